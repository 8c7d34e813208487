"""Rendering helpers for microsecond durations and exact-rational percentages."""

from __future__ import annotations

from fractions import Fraction


def format_seconds(micros: int) -> str:
    """Microseconds as a decimal seconds string with no precision loss.

    Keeps at least one decimal (so a zero value reads "0.0") and strips
    trailing zeros beyond that: 0 -> "0.0", 1_500_000 -> "1.5",
    8 -> "0.000008", 40_000_000 -> "40.0".
    """
    if micros < 0:
        raise ValueError("negative duration")
    whole, frac = divmod(micros, 1_000_000)
    if frac == 0:
        return f"{whole}.0"
    return f"{whole}.{f'{frac:06d}'.rstrip('0')}"


def pct_text(tenths: int) -> str:
    """Tenths of a percent as a one-decimal string: 125 -> "12.5"."""
    return f"{tenths // 10}.{tenths % 10}"


def round_pct_tenths(pct: Fraction) -> int:
    """Round an exact percentage to tenths, ties to even."""
    return round(pct * 10)


def apportion_tenths(parts: list[Fraction]) -> list[int]:
    """Largest-remainder rounding of percentages that sum to exactly 100.

    Returns tenths of a percent summing to exactly 1000, so a rendered
    sibling group always adds up to 100.0. Ties go to earlier entries.
    """
    scaled = [p * 10 for p in parts]
    floors = [int(s) for s in scaled]
    leftover = 1000 - sum(floors)
    if leftover:
        by_remainder = sorted(range(len(parts)), key=lambda i: (floors[i] - scaled[i], i))
        for i in by_remainder[:leftover]:
            floors[i] += 1
    return floors
