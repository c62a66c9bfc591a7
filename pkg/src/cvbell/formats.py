"""Shared output formatting: diff-stable CSV numbers."""

from __future__ import annotations


def fmt15(x: float) -> str:
    """15 significant digits, '.' decimal, no separators."""
    return format(float(x), ".15g")
