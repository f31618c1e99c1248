"""Envelope functions of the corner problem and their global extrema.

``f(t) = a sin t + b cos t - c sin t cos t`` is the distance from the corner
``(a, b)`` to the line cutting a length-``c`` segment from the first
quadrant.  ``g(t) = (a sin t + b cos t - d) / (sin t cos t)`` is the length
of the first-quadrant segment cut by a tangent to the circle of radius ``d``
about the corner.  Their extrema ``m = min f`` and ``n = inf g`` decide
rotations around the corner.

Minimisers are found through polynomial reductions in ``x = tan t``:
the quartic ``r = p q`` for ``f`` and the stationarity equation ``u = 0``
for ``g``.  :func:`certified_grid_min` is an independent branch-and-bound
minimiser used to cross-check both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

HALF_PI = 0.5 * math.pi
DEFAULT_TARGET_ERROR = 1e-8
_T_SLACK = 1e-12
POLE_CLAMP = 1e-8


class EnvelopeDomainError(ValueError):
    pass


class Unbounded:
    """Marker for an infinite supremum (never a floating sentinel)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNBOUNDED"

    def __str__(self) -> str:
        return "unbounded"


UNBOUNDED = Unbounded()


@dataclass(frozen=True)
class MinResult:
    value: float
    argmin: float
    method: str  # "polynomial" | "closed_form" | "certified_grid"
    certified_error: float = 0.0


@dataclass(frozen=True)
class AntiWindow:
    t1: float
    t2: float
    extended: bool = False  # an end was replaced by 0 or pi/2 (c < a or c < b)

    @property
    def width(self) -> float:
        return self.t2 - self.t1


def _positive(**kw: float) -> None:
    for name, v in kw.items():
        if not (v > 0 and math.isfinite(v)):
            raise EnvelopeDomainError(f"{name} must be positive, got {v}")


def _check_t(t: float, lo: float = 0.0, hi: float = HALF_PI) -> float:
    if not (lo - _T_SLACK <= t <= hi + _T_SLACK):
        raise EnvelopeDomainError(f"t={t} outside [{lo}, {hi}]")
    return min(max(t, lo), hi)


def eval_f(a: float, b: float, c: float, t: float) -> float:
    t = _check_t(t)
    s, co = math.sin(t), math.cos(t)
    return a * s + b * co - c * s * co


def eval_g(a: float, b: float, d: float, t: float) -> float:
    if not (0.0 < t < HALF_PI):
        raise EnvelopeDomainError(f"g has poles at 0 and pi/2, got t={t}")
    s, co = math.sin(t), math.cos(t)
    return (a * s + b * co - d) / (s * co)


def ladder_length(a: float, b: float) -> float:
    _positive(a=a, b=b)
    return (a ** (2.0 / 3.0) + b ** (2.0 / 3.0)) ** 1.5


# --------------------------------------------------------------------------
# real roots of a polynomial on an interval


def _trim(coeffs: Sequence[float]) -> list[float]:
    c = [float(v) for v in coeffs]
    scale = max((abs(v) for v in c), default=0.0)
    k = 0
    while k < len(c) - 1 and abs(c[k]) <= 1e-15 * scale:
        k += 1
    return c[k:]


def _horner(poly: Sequence[float], x: float) -> float:
    acc = 0.0
    for co in poly:
        acc = acc * x + co
    return acc


def _deriv(poly: Sequence[float]) -> list[float]:
    n = len(poly) - 1
    return [co * (n - k) for k, co in enumerate(poly[:-1])]


def _bracket_root(poly: Sequence[float], dpoly: Sequence[float], lo: float, hi: float, flo: float) -> float:
    """Root of ``poly`` in a sign-change bracket: Newton steps, bisection when a step leaves it."""
    x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = _horner(poly, x)
        if fx == 0.0:
            return x
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi = x
        ulps = 4e-16 * max(1.0, abs(x))
        if hi - lo <= ulps:
            break
        dv = _horner(dpoly, x)
        nx = x - fx / dv if dv != 0.0 else lo - 1.0
        if not (lo < nx < hi):
            nx = 0.5 * (lo + hi)
            if nx <= lo or nx >= hi:
                break
        elif abs(nx - x) <= ulps:
            return nx
        x = nx
    return x


def _low_degree_roots(poly: Sequence[float], lo: float, hi: float) -> list[float]:
    if len(poly) == 2:
        cand = [-poly[1] / poly[0]]
    else:
        qa, qb, qc = poly
        disc = qb * qb - 4 * qa * qc
        if disc < 0.0:
            disc = 0.0 if disc >= -1e-15 * qb * qb else -1.0
        if disc < 0.0:
            return []
        # cancellation-free form of the two roots
        q = -0.5 * (qb + math.copysign(math.sqrt(disc), qb))
        cand = [q / qa] + ([qc / q] if q != 0.0 else [])
    return sorted({x for x in cand if lo <= x <= hi})


def real_roots(coeffs: Sequence[float], lo: float, hi: float) -> list[float]:
    """Real roots of a polynomial in ``[lo, hi]`` (highest degree first).

    Roots of the derivative split the interval into monotone pieces; a piece
    holds a root iff its end values change sign, which is then bracketed by
    bisection and polished by Newton steps.  Critical points where the value
    vanishes to rounding are reported as (even multiplicity) roots.
    """
    poly = _trim(coeffs)
    deg = len(poly) - 1
    if deg <= 0:
        return []
    if deg <= 2:
        return _low_degree_roots(poly, lo, hi)
    scale = sum(abs(v) for v in poly) * max(1.0, abs(lo), abs(hi)) ** deg
    dpoly = _deriv(poly)
    crit = real_roots(dpoly, lo, hi) if deg > 1 else []
    knots = [lo] + [x for x in crit if lo < x < hi] + [hi]
    vals = [_horner(poly, x) for x in knots]
    roots = [float(x) for x, v in zip(knots, vals) if abs(v) <= 1e-14 * scale]
    for k in range(len(knots) - 1):
        v0, v1 = vals[k], vals[k + 1]
        if v0 == 0.0 or v1 == 0.0 or (v0 < 0) == (v1 < 0):
            continue
        roots.append(float(_bracket_root(poly, dpoly, knots[k], knots[k + 1], v0)))
    roots.sort()
    out: list[float] = []
    for r in roots:
        if not out or abs(r - out[-1]) > 1e-12 * max(1.0, abs(r)):
            out.append(r)
    return out


def _root_bound(poly: Sequence[float]) -> float:
    return 1.0 + max(abs(v / poly[0]) for v in poly[1:]) if len(poly) > 1 else 1.0


# --------------------------------------------------------------------------
# f and its minimum m(a, b, c)


def f_quartic(a: float, b: float, c: float) -> list[float]:
    """Coefficients of ``r(x) = (a - b x)^2 (x^2 + 1) - c^2 (x^2 - 1)^2``."""
    c2 = c * c
    return [b * b - c2, -2 * a * b, a * a + b * b + 2 * c2, -2 * a * b, a * a - c2]


def f_p(a: float, b: float, c: float, x: float) -> float:
    """``(x^2 + 1) f'(arctan x)``; its positive zero is the interior critical point."""
    return (a - b * x) * math.sqrt(x * x + 1) + c * (x * x - 1)


def f_critical_points(a: float, b: float, c: float) -> list[float]:
    """Interior critical angles of ``f`` from the positive roots of the quartic that zero ``p``."""
    poly = _trim(f_quartic(a, b, c))
    roots = real_roots(poly, 0.0, _root_bound(poly))
    out = []
    for x in roots:
        if x <= 0.0:
            continue
        if abs(f_p(a, b, c, x)) <= 1e-9 * (a + b + c) * (1 + x * x):
            t = math.atan(x)
            # a double root of r comes back as a cluster of nearby roots
            if not out or t - out[-1] > 1e-6:
                out.append(t)
    return out


def _min_over(a: float, b: float, c: float, candidates: list[float]) -> MinResult:
    best_t, best_v = candidates[0], eval_f(a, b, c, candidates[0])
    for t in candidates[1:]:
        v = eval_f(a, b, c, t)
        if v < best_v:
            best_t, best_v = t, v
    return MinResult(best_v, best_t, "polynomial", 1e-12 * (a + b + c))


def min_f(a: float, b: float, c: float, check: bool = False) -> MinResult:
    """``m(a, b, c)``: the minimum of ``f`` over ``[0, pi/2]``."""
    _positive(a=a, b=b, c=c)
    res = _min_over(a, b, c, [0.0, HALF_PI] + f_critical_points(a, b, c))
    if check:
        ref = min_f_certified(a, b, c)
        if abs(ref.value - res.value) > ref.certified_error + 1e-10:
            raise AssertionError(f"min_f mismatch: {res.value} vs certified {ref.value}")
    return res


def m_value(a: float, b: float, c: float) -> float:
    return min_f(a, b, c).value


def min_f_window(a: float, b: float, d: float, window: Optional[AntiWindow]) -> MinResult:
    """``m~(a, b, d)``: minimum of ``f_(a,b,d)`` restricted to ``window``."""
    if window is None:
        raise EnvelopeDomainError("empty window")
    _positive(a=a, b=b, d=d)
    t1, t2 = _check_t(window.t1), _check_t(window.t2)
    if t1 > t2:
        raise EnvelopeDomainError("empty window")
    cands = [t1, t2] + [t for t in f_critical_points(a, b, d) if t1 < t < t2]
    return _min_over(a, b, d, cands)


def anti_window(a: float, b: float, c: float) -> Optional[AntiWindow]:
    """Angular window ``[arccos(b/c), arcsin(a/c)]`` of an anti-rotation, or ``None`` if empty."""
    _positive(a=a, b=b, c=c)
    extended = c < max(a, b)
    if not extended and c * c > (a * a + b * b) * (1 + 1e-12):
        return None
    t1 = math.acos(min(1.0, b / c)) if c >= b else 0.0
    t2 = math.asin(min(1.0, a / c)) if c >= a else HALF_PI
    if t1 > t2:
        t1 = t2 = 0.5 * (t1 + t2)
    return AntiWindow(t1, t2, extended)


# --------------------------------------------------------------------------
# g and its infimum n(a, b, d)


def g_u(a: float, b: float, d: float, x: float) -> float:
    return a * x ** 3 - b - d * (x * x - 1) * math.sqrt(x * x + 1)


def min_g(a: float, b: float, d: float, fast_paths: bool = True) -> MinResult:
    """``n(a, b, d)``: the shortest first-quadrant tangent segment to the circle ``k((a,b); d)``."""
    _positive(a=a, b=b)
    if not (0.0 <= d <= min(a, b) * (1 + 1e-12)):
        raise EnvelopeDomainError(f"need 0 <= d <= min(a, b), got d={d}")
    d = min(d, min(a, b))
    if fast_paths:
        if d == 0.0:
            t0 = math.atan((b / a) ** (1.0 / 3.0))
            return MinResult(ladder_length(a, b), t0, "closed_form", 0.0)
        if a == b:
            return MinResult(2 * math.sqrt(2) * a - 2 * d, math.pi / 4, "closed_form", 0.0)
        l = math.hypot(a, b)
        if abs(d - a * b / l) <= 1e-15 * l:
            return MinResult(l, math.atan2(b, a), "closed_form", 0.0)
    # u(0) = d - b <= 0 and u -> +inf: bisect the sign change, then polish
    lo, hi = 0.0, 1.0
    while g_u(a, b, d, hi) <= 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e12:
            raise EnvelopeDomainError("u has no positive sign change")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if g_u(a, b, d, mid) <= 0.0:
            lo = mid
        else:
            hi = mid
    x0 = 0.5 * (lo + hi)
    for _ in range(2):
        h = 1e-7 * max(1.0, x0)
        du = (g_u(a, b, d, x0 + h) - g_u(a, b, d, x0 - h)) / (2 * h)
        if du == 0.0:
            break
        nx = x0 - g_u(a, b, d, x0) / du
        if not (lo <= nx <= hi):
            break
        x0 = nx
    t0 = min(max(math.atan(x0), POLE_CLAMP), HALF_PI - POLE_CLAMP)
    return MinResult(eval_g(a, b, d, t0), t0, "polynomial", 1e-12 * (a + b))


def n_value(a: float, b: float, d: float) -> float:
    return min_g(a, b, d).value


# --------------------------------------------------------------------------
# h~ and its supremum k(c, d, b)


def eval_h(c: float, d: float, b: float, t: float) -> float:
    t = _check_t(t, 0.0, HALF_PI)
    if t == 0.0:
        raise EnvelopeDomainError("h is evaluated on (0, pi/2]")
    s = math.sin(t)
    return c * math.cos(t) + d / s - b * math.cos(t) / s


def _w(c: float, d: float, b: float, t: float) -> float:
    return b - c * math.sin(t) ** 3 - d * math.cos(t)


def sup_h(c: float, d: float, b: float) -> float | Unbounded:
    """``k(c, d, b)``: the least corridor width ``a`` admitting a rotation of ``c x d``."""
    _positive(c=c, d=d, b=b)
    if d > b:
        return UNBOUNDED
    # h' sin^2 t = w(t); w is monotone between the zeros of sin 2t = 2d/(3c)
    knots = [0.0, HALF_PI]
    if 2 * d < 3 * c:
        ta = 0.5 * math.asin(2 * d / (3 * c))
        knots = [0.0, ta, HALF_PI - ta, HALF_PI]
    cands = [d]  # h(pi/2)
    if d == b:
        cands.append(c)  # limit at 0+
    for lo, hi in zip(knots, knots[1:]):
        wlo, whi = _w(c, d, b, lo), _w(c, d, b, hi)
        if not (wlo > 0.0 > whi):
            continue
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if mid <= lo or mid >= hi:
                break
            if _w(c, d, b, mid) > 0.0:
                lo = mid
            else:
                hi = mid
        t = 0.5 * (lo + hi)
        if t > 0.0:
            cands.append(eval_h(c, d, b, t))
    return max(cands)


# --------------------------------------------------------------------------
# certified branch-and-bound minimisation


def certified_grid_min(
    func: Callable[[np.ndarray], np.ndarray],
    interval: tuple[float, float],
    lipschitz_bound: float,
    target_error: float = DEFAULT_TARGET_ERROR,
    curvature_bound: float | Callable[[np.ndarray, np.ndarray], np.ndarray] | None = None,
    initial_points: int = 1025,
    max_levels: int = 200,
) -> MinResult:
    """Minimise a vectorised ``func`` on ``interval`` with a certified error.

    A uniform grid is refined adaptively: each cell gets a lower bound from
    the Lipschitz constant (or, when given, a bound on ``|f''|``, either a
    number or a callable of the cell ends).  Cells whose bound cannot beat the
    incumbent by more than ``target_error`` are discarded, the rest are
    halved, until none remain.  The returned ``certified_error`` bounds the
    gap between ``value`` and the true minimum.
    """
    if not target_error > 0:
        raise ValueError("target_error must be positive")
    lo, hi = float(interval[0]), float(interval[1])
    if hi < lo:
        raise ValueError("empty interval")
    xs = np.linspace(lo, hi, initial_points) if hi > lo else np.array([lo])
    fs = np.asarray(func(xs), dtype=float)
    k = int(np.argmin(fs))
    best, arg = float(fs[k]), float(xs[k])
    if hi == lo or (lipschitz_bound == 0 and curvature_bound is None):
        return MinResult(best, arg, "certified_grid", 0.0)
    L, R, fL, fR = xs[:-1], xs[1:], fs[:-1], fs[1:]
    floor = best

    def lower(L, R, fL, fR):
        w = R - L
        if curvature_bound is None:
            return 0.5 * (fL + fR) - 0.5 * lipschitz_bound * w
        M = curvature_bound(L, R) if callable(curvature_bound) else np.full_like(w, curvature_bound)
        M = np.maximum(M, 1e-300)
        s = np.clip(0.5 - (fR - fL) / (M * w * w), 0.0, 1.0)
        return fL + (fR - fL) * s - 0.5 * M * w * w * s * (1 - s)

    for _ in range(max_levels):
        lb = lower(L, R, fL, fR)
        keep = lb < best - target_error
        if np.any(~keep):
            floor = min(floor, float(np.min(lb[~keep])))
        L, R, fL, fR = L[keep], R[keep], fL[keep], fR[keep]
        if L.size == 0:
            break
        mid = 0.5 * (L + R)
        fm = np.asarray(func(mid), dtype=float)
        k = int(np.argmin(fm))
        if fm[k] < best:
            best, arg = float(fm[k]), float(mid[k])
        L, R, fL, fR = np.concatenate([L, mid]), np.concatenate([mid, R]), np.concatenate([fL, fm]), np.concatenate([fm, fR])
    else:
        raise RuntimeError("certified_grid_min did not converge")
    return MinResult(best, arg, "certified_grid", max(0.0, best - floor))


def f_vectorized(a: float, b: float, c: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda t: a * np.sin(t) + b * np.cos(t) - c * np.sin(t) * np.cos(t)


def g_vectorized(a: float, b: float, d: float) -> Callable[[np.ndarray], np.ndarray]:
    return lambda t: (a * np.sin(t) + b * np.cos(t) - d) / (np.sin(t) * np.cos(t))


def min_f_certified(a: float, b: float, c: float, target_error: float = 1e-10) -> MinResult:
    return certified_grid_min(
        f_vectorized(a, b, c), (0.0, HALF_PI), a + b + c, target_error, curvature_bound=a + b + 2 * c
    )


def g_curvature_bound(a: float, b: float) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    # g'' sin^3 cos^3 <= 2(a + b), and sin t cos t is smallest at a cell end
    def bound(L, R):
        sc = 0.5 * np.minimum(np.sin(2 * L), np.sin(2 * R))
        return 2.0 * (a + b) / sc ** 3

    return bound


def min_g_certified(a: float, b: float, d: float, target_error: float = 1e-10, clamp: float = 1e-6) -> MinResult:
    return certified_grid_min(
        g_vectorized(a, b, d),
        (clamp, HALF_PI - clamp),
        math.inf,
        target_error,
        curvature_bound=g_curvature_bound(a, b),
    )
