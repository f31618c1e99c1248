"""Planar primitives: poses, rectangle placement and corridor containment.

Body-frame convention used everywhere in the package: the rectangle
``KLMN`` has ``N`` at the origin, ``K = (0, c)`` straight above it,
``L = (d, c)`` and ``M = (d, 0)``.  So ``|KL| = |MN| = d`` and
``|LM| = |KN| = c``.  A :class:`Pose` rotates the body frame by ``angle``
and then moves ``N`` to ``origin``.

Corridors are handled through the closed complement of ``C_ij``, which is
a union of a few convex obstacles (half-planes, quadrants and wall rays on
``x = a``).  The signed clearance of a placed rectangle is the minimum over
obstacles of a separating-axis gap, which is a lower bound on the true
signed distance and is exact whenever a vertex meets an edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-9
_AXIS_EPS = 1e-12


class InvalidToleranceError(ValueError):
    pass


class Point2(NamedTuple):
    x: float
    y: float


@dataclass(frozen=True)
class Pose:
    angle: float = 0.0
    origin: Point2 = Point2(0.0, 0.0)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.angle) and math.isfinite(self.origin[0]) and math.isfinite(self.origin[1])):
            raise ValueError("pose must be finite")
        object.__setattr__(self, "angle", self.angle % TWO_PI)
        object.__setattr__(self, "origin", Point2(float(self.origin[0]), float(self.origin[1])))


@dataclass(frozen=True)
class CorridorSpec:
    """Corridor ``C_ij = A_i U B_j`` with strip width ``a`` and door height ``b``."""

    i: int
    j: int
    a: float
    b: float
    l: float = field(init=False, repr=False)
    h: float = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.i not in (0, 1) or self.j not in (0, 1, 2, 3):
            raise ValueError(f"unknown corridor family ({self.i}, {self.j})")
        if not (self.a > 0 and self.b > 0 and math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("corridor widths must be positive and finite")
        l = math.hypot(self.a, self.b)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "h", self.a * self.b / l)

    @classmethod
    def from_code(cls, code: str, a: float, b: float) -> "CorridorSpec":
        code = str(code).strip()
        if len(code) != 2 or not code.isdigit():
            raise ValueError(f"corridor code must be two digits 'ij', got {code!r}")
        return cls(int(code[0]), int(code[1]), float(a), float(b))

    @property
    def code(self) -> str:
        return f"{self.i}{self.j}"

    @property
    def amin(self) -> float:
        return min(self.a, self.b)

    @property
    def amax(self) -> float:
        return max(self.a, self.b)

    def with_family(self, i: int, j: int) -> "CorridorSpec":
        return CorridorSpec(i, j, self.a, self.b)


@dataclass(frozen=True)
class RectDims:
    """Side lengths of a rectangle; ``d = 0`` is a segment of length ``c``.

    The nominal invariant is ``c >= d``; :meth:`normalized` enforces it.  The
    rotation/anti-rotation deciders accept either order, so construction does
    not reorder the sides.
    """

    c: float
    d: float

    def __post_init__(self) -> None:
        if not (self.c >= 0 and self.d >= 0 and math.isfinite(self.c) and math.isfinite(self.d)):
            raise ValueError("side lengths must be finite and non-negative")
        object.__setattr__(self, "c", float(self.c))
        object.__setattr__(self, "d", float(self.d))

    def normalized(self) -> "RectDims":
        if self.d > self.c:
            return RectDims(self.d, self.c)
        return self


# --------------------------------------------------------------------------
# poses and vertices


def apply_pose(pose: Pose, p: Sequence[float]) -> Point2:
    ca, sa = math.cos(pose.angle), math.sin(pose.angle)
    x, y = float(p[0]), float(p[1])
    return Point2(pose.origin[0] + ca * x - sa * y, pose.origin[1] + sa * x + ca * y)


def body_vertices(dims: RectDims) -> np.ndarray:
    c, d = dims.c, dims.d
    return np.array([[0.0, c], [d, c], [d, 0.0], [0.0, 0.0]])


def rect_vertices(dims: RectDims, pose: Pose) -> list[Point2]:
    """Vertices ``K, L, M, N`` of the placed rectangle."""
    return [apply_pose(pose, v) for v in body_vertices(dims)]


def vertices_batch(dims: RectDims, angles, xs, ys) -> np.ndarray:
    """Vertices for many poses at once, shape ``(n, 4, 2)``."""
    angles = np.asarray(angles, dtype=float)
    ca, sa = np.cos(angles), np.sin(angles)
    body = body_vertices(dims)
    vx = ca[:, None] * body[None, :, 0] - sa[:, None] * body[None, :, 1] + np.asarray(xs, float)[:, None]
    vy = sa[:, None] * body[None, :, 0] + ca[:, None] * body[None, :, 1] + np.asarray(ys, float)[:, None]
    return np.stack([vx, vy], axis=-1)


def pose_from_corners(p0, p1, p2, p3) -> Pose:
    """Pose of a rectangle given its corners in cyclic order.

    ``p0p1`` must be a short side and ``p1p2`` a long side (``p0``..``p3``
    play the roles of ``K, L, M, N``).  Either orientation is accepted; a
    mirrored lettering is relabelled onto the body frame.
    """
    p0, p1, p2, p3 = (np.asarray(p, dtype=float) for p in (p0, p1, p2, p3))
    long_vec = p0 - p3
    short_vec = p1 - p0
    cross = long_vec[0] * short_vec[1] - long_vec[1] * short_vec[0]
    if cross > 0:
        # mirrored lettering: K'=L, L'=K, M'=N, N'=M
        p0, p1, p2, p3 = p1, p0, p3, p2
        long_vec = p0 - p3
    if np.hypot(*long_vec) == 0.0:
        raise ValueError("degenerate rectangle (zero long side)")
    angle = math.atan2(long_vec[1], long_vec[0]) - math.pi / 2
    return Pose(angle, Point2(p3[0], p3[1]))


def mirror_pose_y(dims: RectDims, pose: Pose, b: float) -> Pose:
    """Pose of the rectangle reflected through the line ``y = b/2``."""
    k, l, m, n = rect_vertices(dims, pose)
    ref = [(p[0], b - p[1]) for p in (k, l, m, n)]
    if dims.d == 0.0:
        # a segment has no orientation to preserve
        angle = math.atan2(ref[0][1] - ref[3][1], ref[0][0] - ref[3][0]) - math.pi / 2
        return Pose(angle, Point2(*ref[3]))
    return pose_from_corners(*ref)


# --------------------------------------------------------------------------
# obstacles: closed complement of the corridor as convex pieces.
# each piece is (apex, generators): apex + cone(generators).

_UP, _DOWN, _LEFT, _RIGHT = (0.0, 1.0), (0.0, -1.0), (-1.0, 0.0), (1.0, 0.0)


def corridor_obstacles(corr: CorridorSpec) -> list[tuple[tuple[float, float], tuple]]:
    a, b, i, j = corr.a, corr.b, corr.i, corr.j
    obs = [((0.0, 0.0), (_UP, _DOWN, _LEFT))]  # x <= 0
    if j in (0, 1):
        obs.append(((a, b), (_UP,)))  # wall ray above the door
    else:
        obs.append(((a, b), (_UP, _RIGHT)))  # ceiling of B_2 / B_3
    if i == 0 and j in (0, 2):
        obs.append(((a, 0.0), (_DOWN,)))
    elif i == 1 and j in (0, 2):
        obs.append(((a, 0.0), (_DOWN, _LEFT)))
    elif i == 0:
        obs.append(((a, 0.0), (_DOWN, _RIGHT)))
    else:
        obs.append(((0.0, 0.0), (_DOWN, _LEFT, _RIGHT)))  # y <= 0
    return obs


def region_a_obstacles(corr: CorridorSpec) -> list:
    obs = [((0.0, 0.0), (_UP, _DOWN, _LEFT)), ((corr.a, 0.0), (_UP, _DOWN, _RIGHT))]
    if corr.i == 1:
        obs.append(((0.0, 0.0), (_DOWN, _LEFT, _RIGHT)))
    return obs


def region_b_obstacles(corr: CorridorSpec) -> list:
    obs = [((corr.a, 0.0), (_UP, _DOWN, _LEFT))]
    if corr.j in (1, 3):
        obs.append(((0.0, 0.0), (_DOWN, _LEFT, _RIGHT)))
    if corr.j in (2, 3):
        obs.append(((0.0, corr.b), (_UP, _LEFT, _RIGHT)))
    return obs


def _fixed_axes(gens) -> list[tuple[float, float]]:
    g = np.asarray(gens, dtype=float)
    cands = []
    for gx, gy in g:
        for ax in ((gx, gy), (-gx, -gy), (-gy, gx), (gy, -gx)):
            if ax not in cands and np.all(g @ np.asarray(ax) >= -_AXIS_EPS):
                cands.append(ax)
    return cands


def _obstacle_gap(verts: np.ndarray, apex, gens, rect_axes: np.ndarray) -> np.ndarray:
    """Separating-axis gap between placed rectangles ``verts`` (n,k,2) and one obstacle."""
    apex = np.asarray(apex, dtype=float)
    g = np.asarray(gens, dtype=float)
    best = np.full(verts.shape[0], -np.inf)
    for ax in _fixed_axes(gens):
        ax = np.asarray(ax)
        gap = ax @ apex - np.max(verts @ ax, axis=1)
        best = np.maximum(best, gap)
    # rect axes, shape (n, m, 2)
    proj_apex = rect_axes @ apex
    proj_verts = np.einsum("nmk,npk->nmp", rect_axes, verts).max(axis=2)
    valid = np.all(np.einsum("nmk,gk->nmg", rect_axes, g) >= -_AXIS_EPS, axis=2)
    gaps = np.where(valid, proj_apex - proj_verts, -np.inf)
    return np.maximum(best, gaps.max(axis=1))


def _rect_axes(angles: np.ndarray) -> np.ndarray:
    ca, sa = np.cos(angles), np.sin(angles)
    u = np.stack([ca, sa], axis=-1)
    v = np.stack([-sa, ca], axis=-1)
    return np.stack([u, -u, v, -v], axis=1)


def clearance_from_vertices(obstacles, verts: np.ndarray, angles) -> np.ndarray:
    verts = np.asarray(verts, dtype=float)
    axes = _rect_axes(np.asarray(angles, dtype=float))
    out = np.full(verts.shape[0], np.inf)
    for apex, gens in obstacles:
        out = np.minimum(out, _obstacle_gap(verts, apex, gens, axes))
    return out


def clearance_batch(corr: CorridorSpec, dims: RectDims, angles, xs, ys, obstacles=None) -> np.ndarray:
    """Signed clearance of many placements; ``>= 0`` means contained in the closed corridor."""
    obstacles = corridor_obstacles(corr) if obstacles is None else obstacles
    verts = vertices_batch(dims, angles, xs, ys)
    return clearance_from_vertices(obstacles, verts, angles)


def rect_clearance(corr: CorridorSpec, dims: RectDims, pose: Pose, obstacles=None) -> float:
    return float(
        clearance_batch(corr, dims, [pose.angle], [pose.origin[0]], [pose.origin[1]], obstacles)[0]
    )


def _check_tol(tol: float) -> None:
    if tol < 0 or not math.isfinite(tol):
        raise InvalidToleranceError(f"tolerance must be >= 0, got {tol}")


def contains_point(corr: CorridorSpec, p: Sequence[float], tol: float = DEFAULT_TOL) -> bool:
    """Membership in the closure of ``A_i`` or ``B_j``, walls relaxed by ``tol``."""
    _check_tol(tol)
    x, y = float(p[0]), float(p[1])
    a, b = corr.a, corr.b
    in_a = -tol <= x <= a + tol and (corr.i == 0 or y >= -tol)
    in_b = x >= a - tol
    if corr.j in (1, 3):
        in_b = in_b and y >= -tol
    if corr.j in (2, 3):
        in_b = in_b and y <= b + tol
    return in_a or in_b


def contains_rect(corr: CorridorSpec, dims: RectDims, pose: Pose, tol: float = DEFAULT_TOL) -> bool:
    _check_tol(tol)
    return rect_clearance(corr, dims, pose) >= -tol


def in_region_a(corr: CorridorSpec, dims: RectDims, pose: Pose, tol: float = DEFAULT_TOL) -> bool:
    _check_tol(tol)
    return rect_clearance(corr, dims, pose, region_a_obstacles(corr)) >= -tol


def in_region_b(corr: CorridorSpec, dims: RectDims, pose: Pose, tol: float = DEFAULT_TOL) -> bool:
    _check_tol(tol)
    return rect_clearance(corr, dims, pose, region_b_obstacles(corr)) >= -tol
