"""Kernel backend selection.

The hot solver loops exist twice: jitted in ``_kernels_numba`` and plain
in ``_kernels_numpy``.  The active backend is chosen once at import from
the ``QUANTPLAN_BACKEND`` environment variable:

    QUANTPLAN_BACKEND=auto    numba when importable, else numpy (default)
    QUANTPLAN_BACKEND=numba   require numba, fail if missing
    QUANTPLAN_BACKEND=numpy   force the pure-numpy path

Both backends return bit-identical results; only speed differs.
``set_backend`` rebinds at runtime for benchmarks and tests.
"""

from __future__ import annotations

import os

from . import _kernels_numpy

CHOICES = ("auto", "numba", "numpy")


def _load(name: str):
    if name == "numpy":
        return _kernels_numpy
    if name == "numba":
        from . import _kernels_numba

        return _kernels_numba
    if name == "auto":
        try:
            from . import _kernels_numba

            return _kernels_numba
        except ImportError:
            return _kernels_numpy
    raise ValueError(f"QUANTPLAN_BACKEND must be one of {CHOICES}, got {name!r}")


_active = _load(os.environ.get("QUANTPLAN_BACKEND", "auto").strip().lower() or "auto")


def active_name() -> str:
    """Name of the backend currently in use ("numba" or "numpy")."""
    return _active.NAME


def set_backend(name: str) -> str:
    """Rebind the active backend; returns the previous backend's name."""
    global _active
    previous = _active.NAME
    _active = _load(name)
    return previous


def pair_sums(base_acc, base_lat, item_acc, item_lat):
    return _active.pair_sums(base_acc, base_lat, item_acc, item_lat)


def keep_strict_increase(values):
    return _active.keep_strict_increase(values)
