"""Benchmark the compiled kernels against the pure-Python fallback.

The kernels are the per-point pipeline evaluated inside sweeps, the
calibration grid search and the max-distance bisection, so their scalar
call cost dominates those workloads.

Usage: python benchmarks/bench_kernels.py [--calls N]
"""

from __future__ import annotations

import argparse
import time

from qkdcoex import _kernels_py

try:
    from qkdcoex import _kernels as compiled
except ImportError:
    compiled = None


def _bench(fn, args_list, repeats: int = 5) -> float:
    """Best-of-N wall time per call, in nanoseconds."""
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        for args in args_list:
            fn(*args)
        elapsed = time.perf_counter() - start
        best = min(best, elapsed / len(args_list))
    return best * 1e9


def _inputs(n: int):
    """Deterministic, representative argument tuples per kernel."""
    etas = [10.0 ** (-6.0 * (i % 97) / 96.0) for i in range(n)]
    y0s = [1e-6 + 1e-4 * ((i * 13) % 89) / 88.0 for i in range(n)]
    eds = [0.01 + 0.08 * ((i * 7) % 83) / 82.0 for i in range(n)]
    return {
        "h2": [(0.001 + 0.498 * (i % 101) / 100.0,) for i in range(n)],
        "srs_rate": [(0.5495, 12076.0, 1.0 + (i % 100), 0.19)
                     for i in range(n)],
        "gain_qber": [(0.4, etas[i], y0s[i], 0.5, eds[i]) for i in range(n)],
        "key_point": [(etas[i], y0s[i], 0.4, 0.2, 0.5, eds[i], 1.16, 0.5)
                      for i in range(n)],
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--calls", type=int, default=200_000,
                        help="calls per kernel per backend (default 200000)")
    args = parser.parse_args()

    inputs = _inputs(args.calls)
    print(f"{args.calls} calls per kernel, best of 5 runs\n")
    header = f"{'kernel':<12} {'python ns/call':>15}"
    if compiled is not None:
        header += f" {'compiled ns/call':>17} {'speedup':>8}"
    print(header)
    for name, args_list in inputs.items():
        py_ns = _bench(getattr(_kernels_py, name), args_list)
        line = f"{name:<12} {py_ns:>15.0f}"
        if compiled is not None:
            c_ns = _bench(getattr(compiled, name), args_list)
            line += f" {c_ns:>17.0f} {py_ns / c_ns:>7.1f}x"
        print(line)
    if compiled is None:
        print("\ncompiled kernels not built; showing pure Python only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
