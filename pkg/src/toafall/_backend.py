"""Kernel backend selection.

The compiled extension is preferred when importable; the pure-Python twin is
the fallback.  ``TOAFALL_BACKEND=python`` or ``=cython`` in the environment
forces a choice (forcing cython raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import _kernels_py

_FORCED = os.environ.get("TOAFALL_BACKEND", "").strip().lower()

if _FORCED == "python":
    kernels = _kernels_py
elif _FORCED == "cython":
    from . import _kernels as kernels  # noqa: F401  (ImportError is the contract)
elif _FORCED == "":
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _kernels_py
else:
    raise ValueError(f"TOAFALL_BACKEND must be 'python' or 'cython', got {_FORCED!r}")


def active_backend() -> str:
    """Name of the kernel implementation in use: 'cython' or 'python'."""
    return kernels.BACKEND_NAME


def available_backends() -> tuple[str, ...]:
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401
        names.insert(0, "cython")
    except ImportError:
        pass
    return tuple(names)


def get_backend(name: str):
    """Load a backend module by name, independent of the active selection."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
