"""Explicit motions of a rectangle around the corner, and their verification.

A motion is built from *pieces*: exact pose generators ``s -> Pose`` on
``[0, 1]`` tagged with a kind.  Each piece is sampled adaptively, so that
linear interpolation of ``(angle, N)`` between stored samples stays within
``interp_tol`` of the exact motion and no vertex travels more than
``step_max`` between consecutive samples.  The stored samples therefore
describe the motion faithfully and can be re-checked after serialisation.

Conventions: ``c >= d`` after normalisation; an upright rectangle has pose
angle 0 (long side vertical), a lying one has angle ``pi/2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence

import numpy as np

from .envelopes import m_value
from .feasibility import Branch, decide
from .geometry import (
    CorridorSpec,
    Point2,
    Pose,
    RectDims,
    clearance_batch,
    pose_from_corners,
    rect_vertices,
    region_a_obstacles,
    region_b_obstacles,
)

HALF_PI = 0.5 * math.pi
DEFAULT_SAMPLES = 512
DEFAULT_INTERP_TOL = 1e-7


class InfeasibleInputError(ValueError):
    """No verified construction exists for the requested instance."""


class MalformedPathError(ValueError):
    pass


class SegmentKind(str, Enum):
    TRANSLATION = "translation"
    ROTATION = "rotation_family"
    ANTIROTATION = "antirotation_family"
    SLIDE_PIVOT = "slide_pivot"
    GRID = "grid"  # steps of a configuration-space search


@dataclass(frozen=True)
class Segment:
    start: float
    end: float
    kind: SegmentKind


@dataclass
class MotionPath:
    corridor: CorridorSpec
    dims: RectDims
    samples: list[tuple[float, Pose]]
    segments: list[Segment]
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if len(self.samples) < 1:
            raise MalformedPathError("a path needs at least one sample")
        ts = [t for t, _ in self.samples]
        if any(t1 <= t0 for t0, t1 in zip(ts, ts[1:])):
            raise MalformedPathError("sample params must be strictly increasing")

    @property
    def params(self) -> np.ndarray:
        return np.array([t for t, _ in self.samples])

    @property
    def start(self) -> Pose:
        return self.samples[0][1]

    @property
    def end(self) -> Pose:
        return self.samples[-1][1]

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        t = np.array([s for s, _ in self.samples])
        ang = np.array([p.angle for _, p in self.samples])
        x = np.array([p.origin[0] for _, p in self.samples])
        y = np.array([p.origin[1] for _, p in self.samples])
        return t, ang, x, y

    def pose_at(self, s: float) -> Pose:
        t, ang, x, y = self.arrays()
        a, xx, yy = _interp(self.dims, t, ang, x, y, np.array([s]))
        return Pose(float(a[0]), Point2(float(xx[0]), float(yy[0])))

    def kinds(self) -> set:
        return {seg.kind for seg in self.segments}

    def transformed(self, corridor: CorridorSpec, fn: Callable, reverse: bool = False) -> "MotionPath":
        """Apply a point map ``fn`` (an isometry) to every sample."""
        out = []
        for t, p in self.samples:
            k, l, m, n = (fn(v) for v in rect_vertices(self.dims, p))
            out.append((1.0 - t if reverse else t, pose_from_corners(k, l, m, n)))
        segs = [Segment(s.start, s.end, s.kind) for s in self.segments]
        if reverse:
            out.reverse()
            segs = [Segment(1.0 - s.end, 1.0 - s.start, s.kind) for s in reversed(segs)]
        return MotionPath(corridor, self.dims, out, segs, self.label)

    def reversed_swapped(self) -> "MotionPath":
        """Run backwards with ``x`` and ``y`` exchanged (``C_13(a,b)`` maps to ``C_13(b,a)``)."""
        corr = CorridorSpec(self.corridor.i, self.corridor.j, self.corridor.b, self.corridor.a)
        return self.transformed(corr, lambda p: (p[1], p[0]), reverse=True)


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    min_clearance: float
    worst_param: float
    samples_checked: int
    start_in_A: bool
    end_in_B: bool


# --------------------------------------------------------------------------
# interpolation and sampling


def _wrap(a: np.ndarray) -> np.ndarray:
    return (a + math.pi) % (2 * math.pi) - math.pi


def _center_offset(dims: RectDims, ang):
    """Offset from ``N`` to the centre of the placed rectangle."""
    hc, hd = 0.5 * dims.c, 0.5 * dims.d
    return hd * np.cos(ang) - hc * np.sin(ang), hd * np.sin(ang) + hc * np.cos(ang)


def _interp(dims: RectDims, t, ang, x, y, s):
    """Poses at params ``s``: angle and centre interpolated linearly.

    Interpolating the centre (rather than ``N``) keeps the result independent
    of the vertex lettering, so it commutes with mirroring and reversal.
    """
    s = np.asarray(s, dtype=float)
    if len(t) == 1:
        return np.full_like(s, ang[0]), np.full_like(s, x[0]), np.full_like(s, y[0])
    k = np.clip(np.searchsorted(t, s, side="right") - 1, 0, len(t) - 2)
    t0, t1 = t[k], t[k + 1]
    lam = np.clip((s - t0) / (t1 - t0), 0.0, 1.0)
    ox, oy = _center_offset(dims, ang)
    cx, cy = x + ox, y + oy
    a = ang[k] + lam * _wrap(ang[k + 1] - ang[k])
    qx = cx[k] + lam * (cx[k + 1] - cx[k])
    qy = cy[k] + lam * (cy[k + 1] - cy[k])
    ox, oy = _center_offset(dims, a)
    return a, qx - ox, qy - oy


def _lerp_pose(dims: RectDims, p0: Pose, p1: Pose, lam: float) -> Pose:
    hc, hd = 0.5 * dims.c, 0.5 * dims.d

    def centre(p):
        ca, sa = math.cos(p.angle), math.sin(p.angle)
        return p.origin[0] + hd * ca - hc * sa, p.origin[1] + hd * sa + hc * ca

    (x0, y0), (x1, y1) = centre(p0), centre(p1)
    da = (p1.angle - p0.angle + math.pi) % (2 * math.pi) - math.pi
    ang = p0.angle + lam * da
    ca, sa = math.cos(ang), math.sin(ang)
    qx, qy = x0 + lam * (x1 - x0), y0 + lam * (y1 - y0)
    return Pose(ang, Point2(qx - (hd * ca - hc * sa), qy - (hd * sa + hc * ca)))


def _vdist(dims: RectDims, p: Pose, q: Pose) -> float:
    """Largest distance between corresponding vertices of two placements."""
    c, d = dims.c, dims.d
    ca, sa = math.cos(p.angle), math.sin(p.angle)
    cb, sb = math.cos(q.angle), math.sin(q.angle)
    dx0, dy0 = p.origin[0] - q.origin[0], p.origin[1] - q.origin[1]
    # body points (0,0), (d,0), (0,c), (d,c)
    ux, uy = d * (ca - cb), d * (sa - sb)  # image difference of (d, 0)
    vx, vy = -c * (sa - sb), c * (ca - cb)  # image difference of (0, c)
    return math.sqrt(
        max(
            dx0 * dx0 + dy0 * dy0,
            (dx0 + ux) ** 2 + (dy0 + uy) ** 2,
            (dx0 + vx) ** 2 + (dy0 + vy) ** 2,
            (dx0 + ux + vx) ** 2 + (dy0 + uy + vy) ** 2,
        )
    )


def sample_piece(
    func: Callable[[float], Pose],
    dims: RectDims,
    step_max: float,
    interp_tol: float = DEFAULT_INTERP_TOL,
    n0: int = 16,
    max_depth: int = 24,
) -> list[tuple[float, Pose]]:
    """Adaptive samples ``(s, pose)`` of a piece over ``[0, 1]``."""
    out: list[tuple[float, Pose]] = []

    def rec(s0, p0, s1, p1, depth):
        sm = 0.5 * (s0 + s1)
        pm = func(sm)
        bad = _vdist(dims, p0, p1) > step_max or _vdist(dims, pm, _lerp_pose(dims, p0, p1, 0.5)) > interp_tol
        if bad and depth < max_depth:
            rec(s0, p0, sm, pm, depth + 1)
            rec(sm, pm, s1, p1, depth + 1)
        else:
            out.append((s1, p1))

    grid = [k / n0 for k in range(n0 + 1)]
    poses = [func(s) for s in grid]
    out.append((0.0, poses[0]))
    for k in range(n0):
        rec(grid[k], poses[k], grid[k + 1], poses[k + 1], 0)
    return out


@dataclass(frozen=True)
class Piece:
    kind: SegmentKind
    func: Callable[[float], Pose]


def assemble(
    corr: CorridorSpec,
    dims: RectDims,
    pieces: Sequence[Piece],
    step_max: Optional[float] = None,
    interp_tol: float = DEFAULT_INTERP_TOL,
    label: str = "",
    join_tol: float = 1e-7,
) -> MotionPath:
    """Concatenate pieces on equal parameter intervals and sample them."""
    if not pieces:
        raise ValueError("no pieces")
    if step_max is None:
        step_max = default_step_max(corr, dims)
    n = len(pieces)
    samples: list[tuple[float, Pose]] = []
    segments = []
    for k, pc in enumerate(pieces):
        lo, hi = k / n, (k + 1) / n
        pts = sample_piece(pc.func, dims, step_max, interp_tol)
        if samples:
            gap = _vdist(dims, samples[-1][1], pts[0][1])
            if gap > join_tol * max(1.0, corr.a + corr.b + dims.c):
                raise RuntimeError(f"pieces {k - 1} and {k} do not join (gap {gap:.3g})")
            pts = pts[1:]
        for s, p in pts:
            samples.append((lo + (hi - lo) * s if s < 1.0 else hi, p))
        segments.append(Segment(lo, hi, pc.kind))
    return MotionPath(corr, dims, samples, segments, label)


def default_step_max(corr: CorridorSpec, dims: RectDims) -> float:
    return 0.02 * (corr.a + corr.b + dims.c)


# --------------------------------------------------------------------------
# verification


def verify_path(
    path: MotionPath, tol: float = 1e-6, samples_per_segment: int = DEFAULT_SAMPLES
) -> VerificationReport:
    """Check a path against the corridor at its stored samples and a uniform resampling."""
    if samples_per_segment < 2:
        raise ValueError("samples_per_segment must be >= 2")
    t, ang, x, y = path.arrays()
    if np.any(np.diff(t) <= 0):
        raise MalformedPathError("sample params must be strictly increasing")
    extra = [np.linspace(seg.start, seg.end, samples_per_segment) for seg in path.segments]
    s = np.concatenate([t] + extra)
    if len(extra):
        ia, ix, iy = _interp(path.dims, t, ang, x, y, np.concatenate(extra))
        ang = np.concatenate([ang, ia])
        x = np.concatenate([x, ix])
        y = np.concatenate([y, iy])
    clear = clearance_batch(path.corridor, path.dims, ang, x, y)
    k = int(np.argmin(clear))
    first, last = path.start, path.end
    corr, dims = path.corridor, path.dims
    start_ok = _region_clearance(corr, dims, first, region_a_obstacles(corr)) >= -tol
    end_ok = _region_clearance(corr, dims, last, region_b_obstacles(corr)) >= -tol
    mc = float(clear[k])
    return VerificationReport(mc >= -tol and start_ok and end_ok, mc, float(s[k]), int(s.size), start_ok, end_ok)


def _region_clearance(corr, dims, pose, obstacles) -> float:
    return float(clearance_batch(corr, dims, [pose.angle], [pose.origin[0]], [pose.origin[1]], obstacles)[0])


# --------------------------------------------------------------------------
# pose families


def _pose_from(corner, w, n, dims: RectDims) -> Pose:
    """Pose of ``corner + [0,c] w + [0,d] n`` for unit ``w`` and ``n`` perpendicular to it."""
    wx, wy = w
    cw = (wy, -wx)
    if n[0] * cw[0] + n[1] * cw[1] > 0:
        origin = corner
    else:
        origin = (corner[0] + dims.d * n[0], corner[1] + dims.d * n[1])
    return Pose(math.atan2(-wx, wy), Point2(origin[0], origin[1]))


def _check_range(t: float) -> float:
    if not (-1e-12 <= t <= HALF_PI + 1e-12):
        raise ValueError(f"t={t} outside [0, pi/2]")
    return min(max(t, 0.0), HALF_PI)


def rotation_family_vertices(c: float, d: float, t: float) -> tuple:
    """``K, L, M, N``: long side ``LM`` sliding with ``L`` on ``Oy`` and ``M`` on ``Ox``."""
    t = _check_range(t)
    s, co = math.sin(t), math.cos(t)
    L = (0.0, c * co)
    M = (c * s, 0.0)
    N = (d * co + c * s, d * s)
    K = (d * co, d * s + c * co)
    return K, L, M, N


def rotation_family_pose(a: float, b: float, c: float, d: float, t: float) -> Pose:
    t = _check_range(t)
    return Pose(t, Point2(c * math.sin(t), 0.0))


def antirotation_family_vertices(c: float, d: float, t: float) -> tuple:
    """``K, L, M, N``: short side ``MN`` sliding with ``M`` on ``Oy`` and ``N`` on ``Ox``."""
    t = _check_range(t)
    s, co = math.sin(t), math.cos(t)
    K = (d * co + c * s, c * co)
    L = (c * s, c * co + d * s)
    M = (0.0, d * s)
    N = (d * co, 0.0)
    return K, L, M, N


def antirotation_family_pose(a: float, b: float, c: float, d: float, t: float) -> Pose:
    t = _check_range(t)
    return Pose(-t, Point2(0.0, d * math.sin(t)))


def corner_line_distance(a: float, b: float, c: float, t: float) -> float:
    """Signed distance from ``(a, b)`` to the line ``L_t M_t`` of the rotation family.

    Positive when the corner lies on the far side of the line from the
    origin.  It equals ``eval_f(a, b, c, pi/2 - t)``: the vertex formulas
    measure ``t`` from the other axis than ``f`` does.
    """
    K, L, M, N = rotation_family_vertices(c, 0.0, t)
    ux, uy = M[0] - L[0], M[1] - L[1]
    norm = math.hypot(ux, uy)
    return ((b - L[1]) * ux - (a - L[0]) * uy) / norm


# --------------------------------------------------------------------------
# pieces


def _translate(p0: Pose, p1: Pose) -> Piece:
    if abs(((p1.angle - p0.angle + math.pi) % (2 * math.pi)) - math.pi) > 1e-12:
        raise ValueError("translation must keep the angle")

    def f(s):
        return Pose(p0.angle, Point2(p0.origin[0] + s * (p1.origin[0] - p0.origin[0]), p0.origin[1] + s * (p1.origin[1] - p0.origin[1])))

    return Piece(SegmentKind.TRANSLATION, f)


def _upright(x: float, y: float) -> Pose:
    """Upright rectangle ``[x, x+d] x [y, y+c]``."""
    return Pose(0.0, Point2(x, y))


def _lying(x: float, y: float, dims: RectDims) -> Pose:
    """Lying rectangle ``[x, x+c] x [y, y+d]`` (angle pi/2, ``N`` at the right end)."""
    return Pose(HALF_PI, Point2(x + dims.c, y))


def _dock_offset(corr: CorridorSpec, dims: RectDims) -> float:
    # 2c from the corner, capped so the docked pose stays in the oracle window
    return min(2.0 * dims.c, 2.0 * (corr.a + corr.b))


def _start_height(corr: CorridorSpec, dims: RectDims) -> float:
    return corr.b + _dock_offset(corr, dims)


def _goal_x(corr: CorridorSpec, dims: RectDims) -> float:
    return corr.a + _dock_offset(corr, dims)


def _pad(corr: CorridorSpec) -> float:
    return 0.01 * (corr.a + corr.b)


def translation_pieces(corr: CorridorSpec, dims: RectDims) -> list[Piece]:
    """Axis-parallel moves only: upright through the door if ``c <= b``, lying if ``c <= a``."""
    a, b, c, d = corr.a, corr.b, dims.c, dims.d
    if d > min(a, b) * (1 + 1e-12):
        raise InfeasibleInputError("d exceeds a and b")
    if c <= b:
        x0, y0 = (a - d) / 2, (b - c) / 2
        p_start = _upright(x0, _start_height(corr, dims))
        p_door = _upright(x0, y0)
        p_goal = _upright(_goal_x(corr, dims), y0)
    elif c <= a:
        x0, y0 = (a - c) / 2, (b - d) / 2
        p_start = _lying(x0, _start_height(corr, dims), dims)
        p_door = _lying(x0, y0, dims)
        p_goal = _lying(_goal_x(corr, dims), y0, dims)
    else:
        raise InfeasibleInputError("c exceeds a and b")
    return [_translate(p_start, p_door), _translate(p_door, p_goal)]


def _rotation_piece(corr, dims, t0=0.0, t1=HALF_PI, kind=SegmentKind.ROTATION) -> Piece:
    a, b, c, d = corr.a, corr.b, dims.c, dims.d
    return Piece(kind, lambda s: rotation_family_pose(a, b, c, d, t0 + s * (t1 - t0)))


def rotation_pieces(corr: CorridorSpec, dims: RectDims) -> list[Piece]:
    """Dock in the corner ``O``, rotate with both long-side ends on the walls, leave along ``Ox``."""
    a, b, c, d = corr.a, corr.b, dims.c, dims.d
    p_start = _upright((a - d) / 2, _start_height(corr, dims))
    p_dock = _upright(0.0, 0.0)
    p_turned = rotation_family_pose(a, b, c, d, HALF_PI)
    y_goal = max(0.0, (b - d) / 2)
    p_goal = _lying(_goal_x(corr, dims), y_goal, dims)
    return [_translate(p_start, p_dock), _rotation_piece(corr, dims), _translate(p_turned, p_goal)]


def antirotation_pieces(corr: CorridorSpec, dims: RectDims) -> list[Piece]:
    """Dock in the corner ``O``, turn with both short-side ends on the walls, leave along ``Ox``."""
    a, b, c, d = corr.a, corr.b, dims.c, dims.d
    p_start = _upright((a - d) / 2, _start_height(corr, dims))
    p_dock = antirotation_family_pose(a, b, c, d, 0.0)
    p_turned = antirotation_family_pose(a, b, c, d, HALF_PI)
    y_goal = max(0.0, (b - d) / 2)
    x_goal = _goal_x(corr, dims)
    # after the turn N sits at (0, d) with the body extending right and down
    p_goal = Pose(p_turned.angle, Point2(x_goal, y_goal + d))
    anti = Piece(SegmentKind.ANTIROTATION, lambda s: antirotation_family_pose(a, b, c, d, s * HALF_PI))
    return [_translate(p_start, p_dock), anti, _translate(p_turned, p_goal)]


def _unit(vx: float, vy: float) -> tuple[float, float]:
    n = math.hypot(vx, vy)
    return vx / n, vy / n


def slide_pivot_pieces(corr: CorridorSpec, dims: RectDims) -> list[Piece]:
    """``C_00``/``C_01`` construction: pivot with the long side through ``A`` and the short side through ``C``.

    ``K`` runs on the semicircle over ``AC`` until ``|KC| = d``, then the
    rectangle slides along its long side into ``B``.
    """
    a, b, c, d = corr.a, corr.b, dims.c, dims.d
    A, C = (a, 0.0), (a, b)
    r = b / 2

    def frame(phi):
        K = (a + r * math.sin(phi), r + r * math.cos(phi))
        if phi == 0.0:
            u = (0.0, -1.0)
        else:
            u = _unit(A[0] - K[0], A[1] - K[1])
        return K, u, (u[1], -u[0])

    def pose(phi):
        K, u, v = frame(phi)
        return _pose_from(K, u, v, dims)

    phi_end = 2.0 * math.asin(min(1.0, d / b))
    p_dock = pose(0.0)
    p_start = Pose(p_dock.angle, Point2(p_dock.origin[0] - (a - d) / 2, _start_height(corr, dims) + c))
    K, u, v = frame(phi_end)
    verts = [(K[0] + sc * c * u[0] + sd * d * v[0], K[1] + sc * c * u[1] + sd * d * v[1]) for sc in (0, 1) for sd in (0, 1)]
    xmin = min(p[0] for p in verts)
    # slide along -u until the whole rectangle is past x = a
    shift = (a + _pad(corr) - xmin) / max(-u[0], 1e-300)
    p_pivoted = pose(phi_end)
    p_out = Pose(p_pivoted.angle, Point2(p_pivoted.origin[0] - shift * u[0], p_pivoted.origin[1] - shift * u[1]))
    pivot = Piece(SegmentKind.SLIDE_PIVOT, lambda s: pose(s * phi_end))
    pieces = [_translate(p_start, p_dock)]
    if phi_end > 0:
        pieces.append(pivot)
    pieces.append(_translate(p_pivoted, p_out))
    return pieces


def floor_pivot_pieces(corr: CorridorSpec, dims: RectDims) -> list[Piece]:
    """``C_10``/``C_12`` construction for ``d <= h``.

    Rotate on the floor of ``A_1`` until the long side reaches ``A = (a, 0)``,
    then keep that side through ``A`` while its upper end slides down ``Oy``;
    the far end dips below ``y = 0`` inside ``B``.  Finally leave along ``Ox``.
    """
    a, b, c, d = corr.a, corr.b, dims.c, dims.d
    p_start = _upright((a - d) / 2, _start_height(corr, dims))
    p_dock = _upright(0.0, 0.0)
    y_goal = max(0.0, (b - d) / 2)
    pieces = [_translate(p_start, p_dock)]
    if c <= a:
        pieces.append(_rotation_piece(corr, dims))
        p_flat = rotation_family_pose(a, b, c, d, HALF_PI)
    else:
        t_a = math.asin(a / c)
        pieces.append(_rotation_piece(corr, dims, 0.0, t_a))
        y0 = math.sqrt(c * c - a * a)

        def pivot(s):
            y = y0 * (1.0 - s)
            v = _unit(a, -y)
            q = (c * v[0], y + c * v[1])  # far end of the long side
            return _pose_from(q, (-v[0], -v[1]), (-v[1], v[0]), dims)

        pieces.append(Piece(SegmentKind.SLIDE_PIVOT, pivot))
        p_flat = pivot(1.0)
    pieces.append(_translate(p_flat, _lying(_goal_x(corr, dims), y_goal, dims)))
    return pieces


def tangent_pieces(corr: CorridorSpec, dims: RectDims) -> list[Piece]:
    """``C_03`` construction for ``h <= d``.

    Standing on the floor at the door with the short side through ``A`` and
    the long side through ``C``, the rectangle pivots until ``K = A``.  Then
    ``K`` runs along the floor of ``B_3`` while ``KN`` stays on the tangent
    from ``K`` to the circle of radius ``d`` about ``C``.
    """
    a, b, c, d = corr.a, corr.b, dims.c, dims.d
    if d > b * (1 + 1e-12):
        raise InfeasibleInputError("d exceeds b")
    delta = math.asin(min(1.0, d / b))

    def phase1(s):
        g = s * delta
        sg, cg = math.sin(g), math.cos(g)
        L = (a + b * sg * cg, b * sg * sg)
        w = (-sg, cg)
        return _pose_from(L, w, (-cg, -sg), dims)

    x_end = a + c + _pad(corr)

    def phase2(s):
        X = a + s * (x_end - a)
        pc = math.hypot(a - X, b)
        beta = math.atan2(b, a - X) + math.asin(min(1.0, d / pc))
        w = (math.cos(beta), math.sin(beta))
        return _pose_from((X, 0.0), w, (w[1], -w[0]), dims)

    p_dock = _upright(a - d, 0.0)
    p_start = _upright(a - d, _start_height(corr, dims))
    return [
        _translate(p_start, p_dock),
        Piece(SegmentKind.SLIDE_PIVOT, phase1),
        Piece(SegmentKind.SLIDE_PIVOT, phase2),
    ]


# --------------------------------------------------------------------------
# planning


_BUILDERS = {
    "translation": translation_pieces,
    "rotation": rotation_pieces,
    "slide_pivot": slide_pivot_pieces,
    "floor_pivot": floor_pivot_pieces,
    "tangent": tangent_pieces,
    "antirotation": antirotation_pieces,
}


def _mirror_y(corr: CorridorSpec):
    b = corr.b
    return lambda p: (p[0], b - p[1])


def _constructions(corr: CorridorSpec, dims: RectDims, branch: Optional[Branch]) -> list[str]:
    """Constructions to try, the one matching ``branch`` first."""
    c, d = dims.c, dims.d
    a, b = corr.a, corr.b
    trans = ["translation"] if c <= max(a, b) and d <= min(a, b) else []
    first: list[str] = []
    if branch == Branch.I:
        first = trans + ["slide_pivot"]
    elif branch in (Branch.IV2, Branch.II2, Branch.III3):
        first = ["rotation"]
    elif branch in (Branch.IV1, Branch.III2):
        first = trans
    elif branch == Branch.III1:
        first = ["floor_pivot"]
    elif branch == Branch.II1:
        first = trans + ["tangent"]
    rest = [k for k in ("translation", "rotation", "slide_pivot", "floor_pivot", "tangent") if k not in first]
    return first + rest


def build_construction(corr: CorridorSpec, dims: RectDims, name: str, step_max: Optional[float] = None) -> MotionPath:
    """Unverified path of a named construction; ``slide_pivot`` in ``C_02`` is the mirror of ``C_01``."""
    dims = dims.normalized()
    if name == "slide_pivot" and corr.j in (2, 3):
        if corr.j == 3:
            raise InfeasibleInputError("slide-pivot needs B unbounded above or below")
        base = corr.with_family(corr.i, 1)
        path = assemble(base, dims, slide_pivot_pieces(base, dims), step_max, label=name)
        return path.transformed(corr, _mirror_y(corr))
    return assemble(corr, dims, _BUILDERS[name](corr, dims), step_max, label=name)


def plan(
    corr: CorridorSpec,
    dims: RectDims,
    steps: int = DEFAULT_SAMPLES,
    tol: float = 1e-6,
    step_max: Optional[float] = None,
) -> MotionPath:
    """A verified motion from deep inside ``A_i`` into ``B_j``."""
    dims = dims.normalized()
    dec = decide(corr, dims)
    if not dec.feasible:
        raise InfeasibleInputError(f"closed form says infeasible (margin {dec.margin:.3g})")
    failures = []
    for name in _constructions(corr, dims, dec.branch):
        try:
            path = build_construction(corr, dims, name, step_max)
        except (InfeasibleInputError, ValueError, RuntimeError) as exc:
            failures.append(f"{name}: {exc}")
            continue
        rep = verify_path(path, tol, steps)
        if rep.ok:
            return path
        failures.append(f"{name}: clearance {rep.min_clearance:.3g} at {rep.worst_param:.4f}")
    raise InfeasibleInputError("no construction verified: " + "; ".join(failures))


def slide_pivot_path(a: float, b: float, c: float, d: float, steps: int = DEFAULT_SAMPLES) -> MotionPath:
    """Slide-pivot motion in ``C_00`` (a translation when ``c <= b``)."""
    corr = CorridorSpec(0, 0, a, b)
    dims = RectDims(c, d).normalized()
    c, d = dims.c, dims.d
    if d > min(a, b) * (1 + 1e-12) or c * d > a * b * (1 + 1e-12):
        raise InfeasibleInputError("need d <= min(a, b) and cd <= ab")
    name = "translation" if c <= b else "slide_pivot"
    return build_construction(corr, dims, name)


def rotation_path(corr: CorridorSpec, dims: RectDims) -> MotionPath:
    return build_construction(corr, dims, "rotation")


def antirotation_path(corr: CorridorSpec, dims: RectDims) -> MotionPath:
    """Anti-rotation motion; the sides are used as given (no reordering)."""
    return assemble(corr, dims, antirotation_pieces(corr, dims), label="antirotation")


def rotation_clearance_profile(a: float, b: float, c: float, d: float, n: int = 1001) -> float:
    """Smallest ``distance(C, L_t M_t) - d`` over a uniform sweep of ``t``."""
    ts = np.linspace(0.0, HALF_PI, n)
    return min(corner_line_distance(a, b, c, float(t)) for t in ts) - d


__all__ = [
    "InfeasibleInputError",
    "MalformedPathError",
    "MotionPath",
    "Segment",
    "SegmentKind",
    "VerificationReport",
    "antirotation_family_pose",
    "antirotation_family_vertices",
    "antirotation_path",
    "build_construction",
    "corner_line_distance",
    "plan",
    "rotation_clearance_profile",
    "rotation_family_pose",
    "rotation_family_vertices",
    "rotation_path",
    "slide_pivot_path",
    "verify_path",
]
