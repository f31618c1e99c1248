"""Brute-force feasibility oracle on a discretised configuration space.

Configurations are ``(x, y, theta)`` where ``(x, y)`` is the lower-left
corner of the rectangle's axis-aligned bounding box and ``theta`` is the
pose angle modulo ``pi`` (a rectangle is symmetric under a half turn, and
the bounding box does not see the difference).  With this reference point a
rectangle pressed against ``x = 0`` and ``y = 0`` keeps the same ``(x, y)``
while it turns, so the grid is shifted to put a line at the wall offset
``kappa`` on both axes.  Lines are spaced finely over the corner region and
``coarse_ratio`` times wider in the far parts of the strips, where only
translations happen.  Angle steps across ``pi`` wrap to ``0``: by the half
turn symmetry that is an ordinary small rotation.

A cell is free when its pose has signed clearance ``>= kappa``.  Breadth
first search runs on the 6-neighbour graph, evaluating cells lazily; an edge
is usable when both ends are free and three interior poses have clearance
``>= 0``.  Sources are the axis-aligned free cells inside ``A_i``; a goal is
any free cell inside ``B_j``.  A found path is turned into a
:class:`~corridor_mover.motion.MotionPath` and checked with
:func:`~corridor_mover.motion.verify_path`; edges on which the check fails
are blocked and the search is repeated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numba
import numpy as np

from .geometry import (
    CorridorSpec,
    Point2,
    Pose,
    RectDims,
    _fixed_axes,
    corridor_obstacles,
    region_a_obstacles,
    region_b_obstacles,
)
from .motion import MotionPath, Piece, SegmentKind, assemble, verify_path

_EPS = 1e-12
FEASIBLE = "feasible_with_witness"
INFEASIBLE = "infeasible_at_resolution"
REF_BBOX, REF_CENTRE = 0, 1


class GridConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Window:
    x0: float
    x1: float
    y0: float
    y1: float

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def scaled(self, k: float, corr: CorridorSpec) -> "Window":
        """Grow the far sides by ``k`` (the sides near the walls stay put)."""
        return Window(
            self.x0,
            corr.a + k * (self.x1 - corr.a),
            self.y0 if self.y0 > -0.5 * corr.b else corr.b + k * (self.y0 - corr.b),
            corr.b + k * (self.y1 - corr.b),
        )


@dataclass(frozen=True)
class GridConfig:
    nx: int = 160
    ny: int = 160
    ntheta: int = 180
    window: Optional[Window] = None  # default: truncation_window
    clearance_margin: Optional[float] = None  # default: 1e-3 * min(a, b)
    max_repairs: int = 50
    reference: Optional[int] = None  # REF_BBOX / REF_CENTRE; default per corridor family
    graded: bool = True  # finer spacing near the corner, coarser in the far strips
    coarse_ratio: float = 12.0
    # fine x spacing only up to a + pad * min(a, b): with the bounding-box
    # reference every cell with x >= a is already a goal cell
    x_core_pad: float = 1.0

    def __post_init__(self) -> None:
        if min(self.nx, self.ny) < 4 or self.ntheta < 4 or self.ntheta % 2:
            raise GridConfigError("need nx, ny >= 4 and an even ntheta >= 4")
        if self.clearance_margin is not None and not self.clearance_margin >= 0:
            raise GridConfigError("clearance_margin must be >= 0")

    def refined(self, k: int = 2) -> "GridConfig":
        return replace(self, nx=self.nx * k, ny=self.ny * k, ntheta=self.ntheta * k)


@dataclass
class OracleVerdict:
    result: str
    witness: Optional[MotionPath]
    cells_explored: int
    repairs: int = 0
    window: Optional[Window] = None

    @property
    def feasible(self) -> bool:
        return self.result == FEASIBLE


def truncation_window(corr: CorridorSpec, dims: RectDims) -> Window:
    dims = dims.normalized()
    a, b, c = corr.a, corr.b, dims.c
    delta = 0.05 * min(a, b)
    reach = c + 2.0 * (a + b)
    unbounded_below = corr.i == 0 or corr.j in (0, 2)
    return Window(-delta, a + reach, -reach if unbounded_below else -delta, b + reach)


def default_reference(corr: CorridorSpec) -> int:
    # the bounding-box corner keeps wall contacts on grid lines; the centre is
    # kept as an option for experiments
    return REF_BBOX


def default_margin(corr: CorridorSpec) -> float:
    return 1e-3 * min(corr.a, corr.b)


# --------------------------------------------------------------------------
# obstacle packing and the clearance kernel (same separating-axis gaps as
# geometry.clearance_from_vertices)


def pack_obstacles(obstacles) -> tuple[np.ndarray, ...]:
    m = len(obstacles)
    apex = np.zeros((m, 2))
    gens = np.zeros((m, 3, 2))
    ngen = np.zeros(m, dtype=np.int64)
    fax = np.zeros((m, 12, 2))
    nfax = np.zeros(m, dtype=np.int64)
    for o, (ap, gs) in enumerate(obstacles):
        apex[o] = ap
        ngen[o] = len(gs)
        gens[o, : len(gs)] = gs
        axes = _fixed_axes(gs)
        nfax[o] = len(axes)
        fax[o, : len(axes)] = axes
    return apex, gens, ngen, fax, nfax


@numba.njit(cache=True)
def _clearance(theta, nx_, ny_, c, d, apex, gens, ngen, fax, nfax):
    ca, sa = math.cos(theta), math.sin(theta)
    vx = np.empty(4)
    vy = np.empty(4)
    # K, L, M, N with N at (nx_, ny_)
    vx[0] = nx_ - sa * c
    vy[0] = ny_ + ca * c
    vx[1] = nx_ + ca * d - sa * c
    vy[1] = ny_ + sa * d + ca * c
    vx[2] = nx_ + ca * d
    vy[2] = ny_ + sa * d
    vx[3] = nx_
    vy[3] = ny_
    rax = np.empty((4, 2))
    rax[0, 0], rax[0, 1] = ca, sa
    rax[1, 0], rax[1, 1] = -ca, -sa
    rax[2, 0], rax[2, 1] = -sa, ca
    rax[3, 0], rax[3, 1] = sa, -ca
    total = np.inf
    for o in range(apex.shape[0]):
        best = -np.inf
        for k in range(nfax[o]):
            ax, ay = fax[o, k, 0], fax[o, k, 1]
            mx = -np.inf
            for v in range(4):
                p = ax * vx[v] + ay * vy[v]
                if p > mx:
                    mx = p
            gap = ax * apex[o, 0] + ay * apex[o, 1] - mx
            if gap > best:
                best = gap
        for k in range(4):
            ax, ay = rax[k, 0], rax[k, 1]
            ok = True
            for g in range(ngen[o]):
                if ax * gens[o, g, 0] + ay * gens[o, g, 1] < -_EPS:
                    ok = False
            if not ok:
                continue
            mx = -np.inf
            for v in range(4):
                p = ax * vx[v] + ay * vy[v]
                if p > mx:
                    mx = p
            gap = ax * apex[o, 0] + ay * apex[o, 1] - mx
            if gap > best:
                best = gap
        if best < total:
            total = best
    return total


@numba.njit(cache=True)
def _bbox_offset(theta, c, d):
    """Offset from ``N`` to the lower-left corner of the bounding box."""
    ca, sa = math.cos(theta), math.sin(theta)
    xs = (0.0, ca * d, -sa * c, ca * d - sa * c)
    ys = (0.0, sa * d, ca * c, sa * d + ca * c)
    mx, my = xs[0], ys[0]
    for k in range(1, 4):
        if xs[k] < mx:
            mx = xs[k]
        if ys[k] < my:
            my = ys[k]
    return mx, my


@numba.njit(cache=True)
def _ref_offset(theta, c, d, ref):
    """Offset from ``N`` to the reference point: bounding-box corner (0) or centre (1)."""
    if ref == 0:
        return _bbox_offset(theta, c, d)
    ca, sa = math.cos(theta), math.sin(theta)
    return 0.5 * (ca * d - sa * c), 0.5 * (sa * d + ca * c)


@numba.njit(cache=True)
def _config_clearance(theta, px, py, c, d, ref, apex, gens, ngen, fax, nfax):
    ox, oy = _ref_offset(theta, c, d, ref)
    return _clearance(theta, px - ox, py - oy, c, d, apex, gens, ngen, fax, nfax)


def clearance_at(obstacles, dims: RectDims, theta: float, px: float, py: float, ref: int = REF_BBOX) -> float:
    """Clearance of the configuration ``(px, py, theta)``."""
    return float(_config_clearance(theta, px, py, dims.c, dims.d, ref, *pack_obstacles(obstacles)))


def config_pose(dims: RectDims, theta: float, px: float, py: float, ref: int = REF_BBOX) -> Pose:
    ox, oy = _ref_offset(theta, dims.c, dims.d, ref)
    return Pose(theta, Point2(px - ox, py - oy))


# --------------------------------------------------------------------------
# search


@numba.njit(cache=True)
def _is_blocked(blocked, key):
    if blocked.size == 0:
        return False
    k = np.searchsorted(blocked, key)
    return k < blocked.size and blocked[k] == key


@numba.njit(cache=True)
def _search(
    xs, ys, ths, c, d, ref, kappa,
    apex, gens, ngen, fax, nfax,
    a_apex, a_gens, a_ngen, a_fax, a_nfax,
    b_apex, b_gens, b_ngen, b_fax, b_nfax,
    blocked,
):
    nx, ny, nt = xs.size, ys.size, ths.size
    ncell = nx * ny * nt
    status = np.zeros(ncell, dtype=np.uint8)  # 0 unseen, 1 free, 2 blocked, 3 queued
    parent = np.full(ncell, -1, dtype=np.int32)
    queue = np.empty(ncell, dtype=np.int32)
    head = 0
    tail = 0
    explored = 0
    dth = ths[1] - ths[0]
    # cell index = (i * ny + j) * nt + k
    for i in range(nx):
        for j in range(ny):
            for k in (0, nt // 2):
                cl = _config_clearance(ths[k], xs[i], ys[j], c, d, ref, apex, gens, ngen, fax, nfax)
                explored += 1
                idx = (i * ny + j) * nt + k
                if cl < kappa:
                    status[idx] = 2
                    continue
                status[idx] = 1
                ca = _config_clearance(ths[k], xs[i], ys[j], c, d, ref, a_apex, a_gens, a_ngen, a_fax, a_nfax)
                if ca >= 0.0:
                    status[idx] = 3
                    queue[tail] = idx
                    tail += 1
    while head < tail:
        u = queue[head]
        head += 1
        k = u % nt
        j = (u // nt) % ny
        i = u // (nt * ny)
        cb = _config_clearance(ths[k], xs[i], ys[j], c, d, ref, b_apex, b_gens, b_ngen, b_fax, b_nfax)
        if cb >= 0.0:
            return u, parent, explored
        for nb in range(6):
            ii, jj, kk = i, j, k
            t0 = ths[k]
            t1 = t0
            if nb == 0:
                ii = i - 1
            elif nb == 1:
                ii = i + 1
            elif nb == 2:
                jj = j - 1
            elif nb == 3:
                jj = j + 1
            elif nb == 4:
                kk = k - 1
                t1 = t0 - dth
                if kk < 0:
                    kk = nt - 1
            else:
                kk = k + 1
                t1 = t0 + dth
                if kk == nt:
                    kk = 0
            if ii < 0 or ii >= nx or jj < 0 or jj >= ny:
                continue
            v = (ii * ny + jj) * nt + kk
            st = status[v]
            if st == 2 or st == 3:
                continue
            if st == 0:
                cl = _config_clearance(ths[kk], xs[ii], ys[jj], c, d, ref, apex, gens, ngen, fax, nfax)
                explored += 1
                if cl < kappa:
                    status[v] = 2
                    continue
                status[v] = 1
            if _is_blocked(blocked, np.int64(u) * 6 + nb):
                continue
            ok = True
            for q in range(1, 4):
                s = 0.25 * q
                cl = _config_clearance(
                    t0 + s * (t1 - t0), xs[i] + s * (xs[ii] - xs[i]), ys[j] + s * (ys[jj] - ys[j]),
                    c, d, ref, apex, gens, ngen, fax, nfax,
                )
                if cl < 0.0:
                    ok = False
                    break
            if not ok:
                continue
            status[v] = 3
            parent[v] = u
            queue[tail] = v
            tail += 1
    return -1, parent, explored


def _axis(lo: float, hi: float, n: int, anchor: float, core: Optional[tuple] = None, ratio: float = 4.0) -> np.ndarray:
    """``n`` increasing values covering ``[lo, hi]``, one of them at ``anchor``.

    Inside ``core`` the spacing is ``h``; outside it grows to ``ratio * h``.
    ``h`` is the smallest spacing for which ``n`` values still cover the range.
    """
    if core is None:
        core = (lo, hi)
    c0, c1 = max(lo, min(core[0], anchor)), min(hi, max(core[1], anchor))
    outside = (c0 - lo) + (hi - c1)
    h = ((c1 - c0) + outside / ratio) / (n - 6)
    vals = [anchor]
    while vals[0] > lo:
        vals.insert(0, vals[0] - (h if vals[0] > c0 else ratio * h))
    while vals[-1] < hi:
        vals.append(vals[-1] + (h if vals[-1] < c1 else ratio * h))
    while len(vals) < n:
        vals.append(vals[-1] + ratio * h)
    if len(vals) > n:
        raise RuntimeError("axis construction overflow")
    return np.array(vals)


@dataclass
class Grid:
    xs: np.ndarray
    ys: np.ndarray
    thetas: np.ndarray
    kappa: float
    ref: int = REF_BBOX


def build_grid(corr: CorridorSpec, dims: RectDims, grid: GridConfig, window: Window) -> Grid:
    kappa = default_margin(corr) if grid.clearance_margin is None else grid.clearance_margin
    off = kappa * (1 + 1e-6) + 1e-12
    ref = grid.reference if grid.reference is not None else default_reference(corr)
    if grid.graded:
        a, b, c = corr.a, corr.b, dims.c
        xs = _axis(window.x0, window.x1, grid.nx, off, (0.0, a + grid.x_core_pad * min(a, b)), grid.coarse_ratio)
        ys = _axis(window.y0, window.y1, grid.ny, off, (-c, b + c), grid.coarse_ratio)
    else:
        xs = _axis(window.x0, window.x1, grid.nx, off)
        ys = _axis(window.y0, window.y1, grid.ny, off)
    ths = math.pi * np.arange(grid.ntheta) / grid.ntheta
    return Grid(xs, ys, ths, kappa, ref)


def _decode(u: int, g: Grid) -> tuple[int, int, int]:
    nt, ny = g.thetas.size, g.ys.size
    return u // (nt * ny), (u // nt) % ny, u % nt


def _cell_chain(goal: int, parent: np.ndarray) -> list[int]:
    chain = [int(goal)]
    while parent[chain[-1]] >= 0:
        chain.append(int(parent[chain[-1]]))
    chain.reverse()
    return chain


def _edge_dir(u: tuple, v: tuple, nt: int) -> int:
    if v[0] != u[0]:
        return 0 if v[0] < u[0] else 1
    if v[1] != u[1]:
        return 2 if v[1] < u[1] else 3
    return 5 if (u[2] + 1) % nt == v[2] else 4


def _witness(corr: CorridorSpec, dims: RectDims, g: Grid, chain: list[int]) -> tuple[MotionPath, list]:
    """Path through the cell chain; runs of equal steps become single pieces."""
    nt = g.thetas.size
    dth = math.pi / nt
    cells = [_decode(u, g) for u in chain]
    # continuous angle along the chain (wrap steps continue past pi)
    conf = [(g.thetas[cells[0][2]], g.xs[cells[0][0]], g.ys[cells[0][1]])]
    dirs = []
    for u, v in zip(cells, cells[1:]):
        dr = _edge_dir(u, v, nt)
        dirs.append(dr)
        th = conf[-1][0] + (dth if dr == 5 else -dth if dr == 4 else 0.0)
        conf.append((th, g.xs[v[0]], g.ys[v[1]]))
    runs = []  # (first edge, last edge + 1)
    k = 0
    while k < len(dirs):
        e = k
        while e + 1 < len(dirs) and dirs[e + 1] == dirs[k]:
            e += 1
        runs.append((k, e + 1))
        k = e + 1
    c, d = dims.c, dims.d

    def piece(q0, q1):
        def f(s):
            th = q0[0] + s * (q1[0] - q0[0])
            ox, oy = _ref_offset(th, c, d, g.ref)
            return Pose(th, Point2(q0[1] + s * (q1[1] - q0[1]) - ox, q0[2] + s * (q1[2] - q0[2]) - oy))

        return Piece(SegmentKind.GRID, f)

    if not runs:
        q = conf[0]
        pieces = [piece(q, (q[0], q[1] + 0.0, q[2]))]
        runs = [(0, 0)]
    else:
        pieces = [piece(conf[r0], conf[r1]) for r0, r1 in runs]
    path = assemble(corr, dims, pieces, label="oracle")
    return path, runs


def _run_failures(path: MotionPath, tol: float) -> list[int]:
    """Indices of pieces whose samples violate the corridor by more than ``tol``."""
    from .geometry import clearance_batch

    t, ang, x, y = path.arrays()
    cl = clearance_batch(path.corridor, path.dims, ang, x, y)
    bad = set()
    n = len(path.segments)
    for tk, ck in zip(t, cl):
        if ck < -tol:
            bad.add(min(int(tk * n), n - 1))
    return sorted(bad)


def oracle_decide(
    corr: CorridorSpec,
    dims: RectDims,
    grid: Optional[GridConfig] = None,
    verify_tol: float = 1e-6,
    verify_samples: int = 512,
) -> OracleVerdict:
    """Search the grid for a motion from ``A_i`` into ``B_j``."""
    grid = GridConfig() if grid is None else grid
    dims = dims.normalized()
    if dims.d <= 0 or dims.c <= 0:
        raise GridConfigError("the oracle needs a rectangle with positive sides")
    window = grid.window if grid.window is not None else truncation_window(corr, dims)
    if window.x1 <= corr.a or window.y1 <= corr.b or window.x0 > 0 or window.y0 > 0:
        raise GridConfigError("window must reach past the door on both sides")
    g = build_grid(corr, dims, grid, window)
    obs = pack_obstacles(corridor_obstacles(corr))
    oa = pack_obstacles(region_a_obstacles(corr))
    ob = pack_obstacles(region_b_obstacles(corr))
    blocked: list[int] = []
    explored = 0
    for repair in range(grid.max_repairs + 1):
        goal, parent, n = _search(
            g.xs, g.ys, g.thetas, dims.c, dims.d, g.ref, g.kappa, *obs, *oa, *ob,
            np.array(sorted(set(blocked)), dtype=np.int64),
        )
        explored += int(n)
        if goal < 0:
            return OracleVerdict(INFEASIBLE, None, explored, repair, window)
        chain = _cell_chain(goal, parent)
        path, runs = _witness(corr, dims, g, chain)
        rep = verify_path(path, verify_tol, verify_samples)
        if rep.ok:
            return OracleVerdict(FEASIBLE, path, explored, repair, window)
        bad = _run_failures(path, verify_tol)
        if not bad:
            # resampled point failed: blame the run containing the worst param
            bad = [min(int(rep.worst_param * len(runs)), len(runs) - 1)]
        cells = [_decode(u, g) for u in chain]
        for r in bad:
            r0, r1 = runs[r]
            for e in range(r0, r1):
                blocked.append(chain[e] * 6 + _edge_dir(cells[e], cells[e + 1], g.thetas.size))
    return OracleVerdict(INFEASIBLE, None, explored, grid.max_repairs, window)


def oracle_with_retry(corr: CorridorSpec, dims: RectDims, grid: Optional[GridConfig] = None) -> OracleVerdict:
    """Oracle verdict, retried once on a doubled window if the first search fails."""
    grid = GridConfig() if grid is None else grid
    first = oracle_decide(corr, dims, grid)
    if first.feasible:
        return first
    base = grid.window if grid.window is not None else truncation_window(corr, dims.normalized())
    wide = replace(grid, window=base.scaled(2.0, corr))
    return oracle_decide(corr, dims, wide)
