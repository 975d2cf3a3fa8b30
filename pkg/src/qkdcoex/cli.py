"""Command-line interface.

Verbs: sweep, max-distance, calibrate, fit-raman, presets list.
Exit codes: 0 success, 1 usage or validation problem, 2 computation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import presets as presets_mod
from ._backend import backend_name
from .config import load_scenario, load_sweep
from .errors import ComputationError, QkdCoexError
from .raman import fit_raman_coefficient, read_measurements_csv
from .scenario import (Scenario, SweepSpec, calibrate, emit_results,
                       max_secure_distance, rows_to_csv, rows_to_json,
                       run_sweep)

_DEFAULT_SWEEP = SweepSpec(0.0, 100.0, 1.0)


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(1)


def _add_scenario_args(parser: argparse.ArgumentParser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--scenario", metavar="PATH",
                       help="scenario configuration file (INI)")
    group.add_argument("--preset", metavar="NAME",
                       help="built-in preset (see 'presets list')")


def _resolve_scenario(args) -> tuple[Scenario, SweepSpec | None]:
    if args.preset:
        return presets_mod.get_preset(args.preset), None
    scenario = load_scenario(args.scenario)
    return scenario, load_sweep(args.scenario)


def _write_or_print(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qkdcoex",
                     description="QKD / classical coexistence simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="distance sweep to CSV/JSON")
    _add_scenario_args(p_sweep)
    p_sweep.add_argument("--from-km", type=float, default=None)
    p_sweep.add_argument("--to-km", type=float, default=None)
    p_sweep.add_argument("--step-km", type=float, default=None)
    p_sweep.add_argument("--out", metavar="PATH", default=None,
                         help="output file (default: stdout)")
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")

    p_max = sub.add_parser("max-distance",
                           help="largest distance with a positive key rate")
    _add_scenario_args(p_max)
    p_max.add_argument("--from-km", type=float, default=0.0)
    p_max.add_argument("--to-km", type=float, default=300.0)
    p_max.add_argument("--ignore-classical-budget", action="store_true",
                       help="rate-only cliff, even where the classical "
                            "channel cannot close")
    p_max.add_argument("--out", metavar="PATH", default=None)
    p_max.add_argument("--format", choices=("text", "json"), default="text")

    p_cal = sub.add_parser("calibrate",
                           help="fit shared (misalignment, EC efficiency) to "
                                "the reference operating points")
    p_cal.add_argument("--out", metavar="PATH", default=None)
    p_cal.add_argument("--format", choices=("text", "json"), default="text")

    p_fit = sub.add_parser("fit-raman",
                           help="least-squares Raman coefficient from a "
                                "measurement CSV")
    p_fit.add_argument("--measurements", metavar="PATH", required=True,
                       help="CSV with header distance_km,power_mw,rate_cps")
    p_fit.add_argument("--alpha-db-per-km", type=float, required=True,
                       help="attenuation of the detected-noise path")
    p_fit.add_argument("--out", metavar="PATH", default=None)
    p_fit.add_argument("--format", choices=("text", "json"), default="text")

    p_presets = sub.add_parser("presets", help="inspect built-in presets")
    p_presets.add_argument("action", choices=("list",))

    return parser


def _cmd_sweep(args) -> int:
    scenario, file_sweep = _resolve_scenario(args)
    flags = (args.from_km, args.to_km, args.step_km)
    if any(v is not None for v in flags):
        base = file_sweep or _DEFAULT_SWEEP
        sweep = SweepSpec(
            from_km=args.from_km if args.from_km is not None else base.from_km,
            to_km=args.to_km if args.to_km is not None else base.to_km,
            step_km=args.step_km if args.step_km is not None else base.step_km,
        )
    else:
        sweep = file_sweep or _DEFAULT_SWEEP
    rows = run_sweep(scenario, sweep)
    if args.out:
        emit_results(rows, args.format, args.out)
    else:
        text = rows_to_csv(rows) if args.format == "csv" else rows_to_json(rows)
        sys.stdout.write(text)
    return 0


def _cmd_max_distance(args) -> int:
    scenario, _ = _resolve_scenario(args)
    result = max_secure_distance(
        scenario, args.from_km, args.to_km,
        require_classical_feasible=not args.ignore_classical_budget,
    )
    if args.format == "json":
        text = json.dumps({
            "scenario": scenario.name,
            "max_secure_distance_km": result.distance_km,
            "at_search_boundary": result.at_upper_boundary,
        }, indent=2) + "\n"
    else:
        note = " (at search boundary)" if result.at_upper_boundary else ""
        text = (f"{scenario.name}: max secure distance "
                f"{result.distance_km:.2f} km{note}\n")
    _write_or_print(text, args.out)
    return 0


def _cmd_calibrate(args) -> int:
    scenarios = [presets_mod.get_preset(name)
                 for name, _ in presets_mod.REFERENCE_TARGETS]
    targets = [target for _, target in presets_mod.REFERENCE_TARGETS]
    report = calibrate(scenarios, targets)
    payload = {
        "misalignment_error": report.misalignment_error,
        "ec_efficiency": report.ec_efficiency,
        "objective": report.objective,
        "residuals": [
            {
                "scenario": r.scenario,
                "distance_km": r.distance_km,
                "key_rate_bps": r.key_rate_bps,
                "target_rate_bps": r.target_rate_bps,
                "rate_ratio": r.rate_ratio,
                "qber": r.qber,
                "target_qber": r.target_qber,
                "qber_delta": r.qber_delta,
            }
            for r in report.residuals
        ],
    }
    if args.format == "json":
        text = json.dumps(payload, indent=2) + "\n"
    else:
        lines = [
            f"misalignment_error = {report.misalignment_error:.6f}",
            f"ec_efficiency      = {report.ec_efficiency:.6f}",
            f"objective          = {report.objective:.6g}",
        ]
        for r in report.residuals:
            lines.append(
                f"{r.scenario:8s} @ {r.distance_km:5.1f} km: "
                f"rate {r.key_rate_bps:10.1f} bps (target {r.target_rate_bps:.1f}, "
                f"x{r.rate_ratio:.2f}), QBER {100 * r.qber:.2f}% "
                f"(target {100 * r.target_qber:.2f}%, "
                f"{100 * r.qber_delta:+.2f} pp)"
            )
        text = "\n".join(lines) + "\n"
    _write_or_print(text, args.out)
    return 0


def _cmd_fit_raman(args) -> int:
    measurements = read_measurements_csv(args.measurements)
    coeff = fit_raman_coefficient(measurements, args.alpha_db_per_km)
    if args.format == "json":
        text = json.dumps({
            "rho_cps_per_mw_km": coeff.rho_cps_per_mw_km,
            "alpha_db_per_km": args.alpha_db_per_km,
            "points": len(measurements),
        }, indent=2) + "\n"
    else:
        text = (f"rho = {coeff.rho_cps_per_mw_km:.6g} cps/(mW km) "
                f"from {len(measurements)} measurement(s)\n")
    _write_or_print(text, args.out)
    return 0


def _cmd_presets(args) -> int:
    width = max(len(n) for n in presets_mod.preset_names())
    for name in presets_mod.preset_names():
        sys.stdout.write(
            f"{name:<{width}}  {presets_mod.PRESET_SUMMARIES[name]}\n")
    sys.stdout.write(f"# kernel backend: {backend_name()}\n")
    return 0


_COMMANDS = {
    "sweep": _cmd_sweep,
    "max-distance": _cmd_max_distance,
    "calibrate": _cmd_calibrate,
    "fit-raman": _cmd_fit_raman,
    "presets": _cmd_presets,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ComputationError as exc:
        sys.stderr.write(f"qkdcoex: computation failed: {exc}\n")
        return 2
    except QkdCoexError as exc:
        sys.stderr.write(f"qkdcoex: {exc}\n")
        return 1
    except OSError as exc:
        sys.stderr.write(f"qkdcoex: {exc}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
