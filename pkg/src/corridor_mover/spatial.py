"""Boxes in the spatial corridors ``S_ij = C_ij x (0, c)`` and the spatial ladder."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .envelopes import UNBOUNDED, Unbounded, ladder_length
from .feasibility import MaxRectFamily, max_area_rects
from .geometry import CorridorSpec

SIDE_TOL = 1e-9


class NotCharacterizedError(NotImplementedError):
    """General box feasibility in ``S_ij`` has no known characterisation."""


@dataclass(frozen=True)
class BoxDims:
    l1: float
    l2: float
    l3: float

    def __post_init__(self) -> None:
        sides = (self.l1, self.l2, self.l3)
        if not all(s > 0 and math.isfinite(s) for s in sides):
            raise ValueError("box sides must be positive and finite")
        s1, s2, s3 = sorted(sides, reverse=True)
        object.__setattr__(self, "l1", float(s1))
        object.__setattr__(self, "l2", float(s2))
        object.__setattr__(self, "l3", float(s3))

    @property
    def volume(self) -> float:
        return self.l1 * self.l2 * self.l3

    @property
    def sides(self) -> tuple[float, float, float]:
        return (self.l1, self.l2, self.l3)


@dataclass(frozen=True)
class SpatialCorridor:
    base: CorridorSpec
    c: float

    def __post_init__(self) -> None:
        if not (self.c > 0 and math.isfinite(self.c)):
            raise ValueError("height must be positive")


@dataclass(frozen=True)
class BoxFamily:
    """Maximal boxes: the base rectangles of ``rects`` extruded by ``height``."""

    rects: MaxRectFamily
    height: float

    @property
    def volume(self) -> float:
        return self.rects.area * self.height

    def members(self, n: int = 5) -> list[BoxDims]:
        return [BoxDims(p, q, self.height) for p, q in self.rects.members(n)]


def max_volume_boxes(s: SpatialCorridor) -> BoxFamily:
    return BoxFamily(max_area_rects(s.base), s.c)


def _close(x: float, y: float, tol: float = SIDE_TOL) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def is_max_volume_box(s: SpatialCorridor, box: BoxDims) -> bool:
    """Whether ``box`` is a maximal box: one side is the height, the other two a maximal base."""
    fam = max_area_rects(s.base)
    if not _close(box.volume, fam.area * s.c):
        return False
    sides = box.sides
    for k in range(3):
        if _close(sides[k], s.c):
            p, q = (sides[m] for m in range(3) if m != k)
            if fam.contains(p, q):
                return True
    return False


def spatial_ladder(s: SpatialCorridor) -> Union[float, Unbounded]:
    """Longest segment passing the corner of ``S_ij``."""
    if s.base.code in ("03", "11", "13"):
        ll = ladder_length(s.base.a, s.base.b)
        return math.sqrt(ll * ll + s.c * s.c)
    return UNBOUNDED


def decide_box(s: SpatialCorridor, box: BoxDims):
    raise NotCharacterizedError("feasibility of general boxes in S_ij is not characterised; only maximality is")
