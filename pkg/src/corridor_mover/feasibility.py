"""Closed-form decisions: which rectangles pass the corner of ``C_ij``.

All inequalities are non-strict and checked with an absolute tolerance
(default ``1e-9``).  Each condition is turned into a slack (positive when
satisfied); a branch's slack is the minimum of its conditions and the
decision margin is the best branch slack.  Slacks of conditions on ``d`` are
distances in ``d``, the ``c <= a v b`` slack is a distance in ``c``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .envelopes import anti_window, ladder_length, m_value, min_f_window
from .geometry import DEFAULT_TOL, CorridorSpec, RectDims

SQRT2 = math.sqrt(2.0)


class Branch(str, Enum):
    I = "Thm1-i"
    II1 = "Thm1-ii₁"
    II2 = "Thm1-ii₂"
    III1 = "Thm1-iii₁"
    III2 = "Thm1-iii₂"
    III3 = "Thm1-iii₃"
    IV1 = "Thm1-iv₁"
    IV2 = "Thm1-iv₂"
    ROTATION = "rotation"
    ANTIROTATION = "anti-rotation"
    SEGMENT = "segment"
    SEGMENT_FREE = "segment-unbounded"


@dataclass(frozen=True)
class Decision:
    feasible: bool
    branch: Optional[Branch]
    margin: float
    notes: str = ""
    satisfied: tuple[Branch, ...] = ()
    slacks: dict = field(default_factory=dict, compare=False)


def _positive(**kw: float) -> None:
    for name, v in kw.items():
        if not (v > 0 and math.isfinite(v)):
            raise ValueError(f"{name} must be positive, got {v}")


def _conclude(slacks: dict, tol: float, notes: str = "") -> Decision:
    best = max(slacks, key=lambda k: slacks[k])
    margin = slacks[best]
    sat = tuple(k for k, v in slacks.items() if v >= -tol)
    feasible = margin >= -tol
    if feasible:
        return Decision(True, best, max(margin, 0.0), notes, sat, dict(slacks))
    return Decision(False, None, margin, notes, (), dict(slacks))


def branch_slacks(corr: CorridorSpec, dims: RectDims) -> dict:
    """Slack of every branch of the characterisation for the corridor family."""
    dims = dims.normalized()
    a, b, c, d = corr.a, corr.b, dims.c, dims.d
    h = corr.h
    s_dmin = min(a, b) - d
    s_area = a * b / c - d
    s_cmax = max(a, b) - c
    m = None

    def s_m() -> float:
        nonlocal m
        if m is None:
            m = m_value(a, b, c)
        return m - d

    i, j = corr.i, corr.j
    if i == 0 and j in (0, 1, 2):
        return {Branch.I: min(s_dmin, s_area)}
    if i == 0 and j == 3:
        return {
            Branch.II1: min(d - h, s_dmin, s_area),
            Branch.II2: min(h - d, s_m()),
        }
    if j in (0, 2):
        return {
            Branch.III1: min(h - d, s_area),
            Branch.III2: min(d - h, s_dmin, s_cmax),
            Branch.III3: min(d - h, s_m()),
        }
    return {Branch.IV1: min(s_cmax, s_dmin), Branch.IV2: s_m()}


def decide(corr: CorridorSpec, dims: RectDims, tol: float = DEFAULT_TOL) -> Decision:
    """Can the ``c x d`` rectangle move around the corner of ``corr``?"""
    dims = dims.normalized()
    if dims.d <= 0.0:
        if dims.c <= 0.0:
            raise ValueError("degenerate rectangle")
        return decide_segment(corr, dims.c, tol)
    return _conclude(branch_slacks(corr, dims), tol)


def decide_rotation(a: float, b: float, dims: RectDims, tol: float = DEFAULT_TOL) -> Decision:
    """Rotation around the corner from ``A_1`` into ``B_3`` (sides in either order)."""
    _positive(a=a, b=b, c=dims.c, d=dims.d)
    return _conclude({Branch.ROTATION: m_value(a, b, dims.c) - dims.d}, tol)


def decide_antirotation(a: float, b: float, dims: RectDims, tol: float = DEFAULT_TOL) -> Decision:
    """Anti-rotation around the corner from ``A_1`` into ``B_3`` (sides in either order)."""
    _positive(a=a, b=b, c=dims.c, d=dims.d)
    c, d = dims.c, dims.d
    window = anti_window(a, b, c)
    if window is None:
        return _conclude({Branch.ANTIROTATION: math.hypot(a, b) - c}, tol, "empty angular window")
    slack = min_f_window(a, b, d, window).value - c
    if window.extended:
        slack = min(slack, min(a, b) - d)
    return _conclude({Branch.ANTIROTATION: slack}, tol)


def antirotation_max_d(a: float, b: float, c: float) -> float:
    """Largest ``d`` for which ``c x d`` passes by an anti-rotation (0 if none)."""
    _positive(a=a, b=b, c=c)
    window = anti_window(a, b, c)
    if window is None:
        return 0.0

    def ok(d: float) -> bool:
        if d == 0.0:
            return True
        if window.extended and d > min(a, b):
            return False
        return min_f_window(a, b, d, window).value >= c

    hi = min(a, b) if window.extended else a + b
    if ok(hi):
        return hi
    lo = 0.0
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if ok(mid):
            lo = mid
        else:
            hi = mid
    return lo


def decide_segment(corr: CorridorSpec, length: float, tol: float = DEFAULT_TOL) -> Decision:
    """Ladder problem: a segment of the given length."""
    _positive(length=length)
    if corr.code in ("03", "11", "13"):
        return _conclude({Branch.SEGMENT: ladder_length(corr.a, corr.b) - length}, tol)
    return Decision(True, Branch.SEGMENT_FREE, math.inf, "any length passes", (Branch.SEGMENT_FREE,))


# --------------------------------------------------------------------------
# maximal rectangles


@dataclass(frozen=True)
class MaxRectFamily:
    """Maximum-area rectangles: explicit ``pairs`` and/or ``(ab/d, d)`` for ``d`` in ``d_range``.

    ``d_range = (lo, hi, lo_inclusive)``; the upper end is always included.
    """

    kind: str  # "one_parameter" | "finite_list" | "mixed"
    area: float
    pairs: tuple[tuple[float, float], ...] = ()
    d_range: Optional[tuple[float, float, bool]] = None

    def contains(self, c: float, d: float, tol: float = 1e-9) -> bool:
        c, d = max(c, d), min(c, d)
        for pc, pd in self.pairs:
            if abs(pc - c) <= tol * max(1.0, pc) and abs(pd - d) <= tol * max(1.0, pd):
                return True
        if self.d_range is not None:
            lo, hi, lo_inc = self.d_range
            in_range = (d >= lo - tol if lo_inc else d > lo) and d <= hi + tol
            return in_range and abs(c * d - self.area) <= tol * max(1.0, self.area)
        return False

    def members(self, n: int = 5) -> list[tuple[float, float]]:
        out = [tuple(p) for p in self.pairs]
        if self.d_range is not None:
            lo, hi, lo_inc = self.d_range
            for k in range(n):
                frac = (k + (0 if lo_inc else 1)) / (n - (1 if lo_inc else 0)) if n > 1 else 1.0
                d = lo + (hi - lo) * frac
                if d > 0:
                    out.append((self.area / d, d))
        return out


def max_area_rects(corr: CorridorSpec) -> MaxRectFamily:
    a, b = corr.a, corr.b
    ab = a * b
    big, small = max(a, b), min(a, b)
    if corr.i == 0 and corr.j in (0, 1, 2):
        return MaxRectFamily("one_parameter", ab, d_range=(0.0, small, False))
    if corr.i == 0:
        return MaxRectFamily("one_parameter", ab, d_range=(corr.h, small, True))
    if corr.j in (0, 2):
        return MaxRectFamily("mixed", ab, pairs=((big, small),), d_range=(0.0, corr.h, False))
    return MaxRectFamily("finite_list", ab, pairs=((big, small), (corr.l, corr.h)))


# --------------------------------------------------------------------------
# a = b = 1


@dataclass(frozen=True)
class SquareThresholds:
    rotation_max_d: float
    antirotation_max_d: float


def square_case_thresholds(c: float) -> SquareThresholds:
    """Largest ``d`` passing a unit corner by rotation and by anti-rotation, piecewise closed forms."""
    _positive(c=c)
    if c <= 2 * (SQRT2 - 1):
        rot = 1.0
    elif c <= 2 * SQRT2:
        rot = SQRT2 - c / 2
    else:
        rot = 0.0
    if c <= SQRT2 - 0.5:
        anti = 1.0
    elif c <= math.sqrt(6) - SQRT2:
        anti = 2 * SQRT2 - 2 * c
    elif c <= SQRT2:
        anti = c * (1 - math.sqrt(max(c * c - 1, 0.0)))
    else:
        anti = 0.0
    return SquareThresholds(rot, anti)
