"""Shared deterministic number formatting for human-facing output."""

from __future__ import annotations


def format_real(x: float) -> str:
    """Up to 9 significant digits; plain decimal notation for any value
    whose magnitude lies in [1e-3, 1e9)."""
    if x == 0:
        return "0"
    return f"{x:.9g}"
