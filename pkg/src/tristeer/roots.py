"""Sign-change scanning and bisection for scalar functions of one variable."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Crossing:
    """A located zero crossing: bracket midpoint ``x`` and final bracket ``width``.

    ``rising`` is True when the function goes from negative to nonnegative.
    """

    x: float
    width: float
    rising: bool


def _negative(v: float) -> bool:
    return v < 0.0


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Shrink ``[lo, hi]`` around the point where ``f < 0`` flips, until ``hi - lo <= tol``."""
    if tol <= 0.0:
        raise ValueError("bisection tolerance must be positive")
    neg_lo = _negative(f(lo))
    if neg_lo == _negative(f(hi)):
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _negative(f(mid)) == neg_lo:
            lo = mid
        else:
            hi = mid
    return lo, hi


def scan_crossings(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    intervals: int,
    tol: float,
) -> list[Crossing]:
    """All sign changes of ``f`` on a uniform grid of ``intervals`` cells, each bisected to ``tol``.

    A grid value counts as negative iff ``f < 0``; exact zeros are grouped with
    the nonnegative side.
    """
    if intervals < 1:
        raise ValueError("need at least one scan interval")
    xs = np.linspace(lo, hi, intervals + 1)
    neg = [_negative(f(float(x))) for x in xs]
    found = []
    for i in range(intervals):
        if neg[i] != neg[i + 1]:
            a, b = bisect(f, float(xs[i]), float(xs[i + 1]), tol)
            found.append(Crossing(0.5 * (a + b), b - a, rising=neg[i]))
    return found
