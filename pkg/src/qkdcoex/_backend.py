"""Kernel backend selection.

The compiled extension is preferred when importable; otherwise the pure
Python kernels are used. QKDCOEX_BACKEND overrides the choice:

  QKDCOEX_BACKEND=compiled   require the extension (ImportError if absent)
  QKDCOEX_BACKEND=python     force the pure-Python kernels
  unset / auto               prefer compiled, fall back silently
"""

from __future__ import annotations

import os

_choice = os.environ.get("QKDCOEX_BACKEND", "auto").strip().lower()

if _choice in ("", "auto"):
    try:
        from . import _kernels as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as impl  # type: ignore[no-redef]
elif _choice == "compiled":
    from . import _kernels as impl  # type: ignore[attr-defined,no-redef]
elif _choice in ("python", "pure"):
    from . import _kernels_py as impl  # type: ignore[no-redef]
else:
    raise ImportError(
        f"unknown QKDCOEX_BACKEND value {_choice!r}; "
        "expected 'auto', 'compiled' or 'python'"
    )

BACKEND: str = impl.BACKEND


def backend_name() -> str:
    """Name of the kernel backend in use ('compiled' or 'python')."""
    return BACKEND
