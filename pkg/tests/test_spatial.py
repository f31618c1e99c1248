import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corridor_mover.envelopes import UNBOUNDED, ladder_length
from corridor_mover.geometry import CorridorSpec
from corridor_mover.spatial import (
    BoxDims,
    NotCharacterizedError,
    SpatialCorridor,
    decide_box,
    is_max_volume_box,
    max_volume_boxes,
    spatial_ladder,
)

CODES = ["00", "01", "02", "03", "10", "11", "12", "13"]


def s(code, a, b, c):
    return SpatialCorridor(CorridorSpec.from_code(code, a, b), c)


def test_box_dims_sorted():
    box = BoxDims(2, 5, 3)
    assert box.sides == (5, 3, 2) and box.volume == 30
    with pytest.raises(ValueError):
        BoxDims(1, 0, 1)


def test_max_volume_examples():
    fam = max_volume_boxes(s("13", 3, 4, 2))
    assert fam.volume == pytest.approx(24)
    assert sorted(b.sides for b in fam.members()) == [(4, 3, 2), (5, 2.4, 2)]
    fam = max_volume_boxes(s("00", 2, 1, 3))
    assert fam.volume == pytest.approx(6)
    assert all(abs(b.volume - 6) < 1e-12 for b in fam.members(6))


def test_is_max_volume_examples():
    sc = s("13", 3, 4, 2)
    assert is_max_volume_box(sc, BoxDims(5, 2.4, 2))
    assert is_max_volume_box(sc, BoxDims(3, 4, 2))
    assert not is_max_volume_box(sc, BoxDims(6, 2, 2))
    assert not is_max_volume_box(sc, BoxDims(3, 4, 1.9))


def test_spatial_ladder_examples():
    assert spatial_ladder(s("13", 1, 1, 1)) == pytest.approx(3)
    assert spatial_ladder(s("00", 5, 2, 1)) is UNBOUNDED
    assert spatial_ladder(s("11", 2, 3, 1e-9)) == pytest.approx(ladder_length(2, 3))


@given(st.sampled_from(["03", "11", "13"]), st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0.1, 5))
def test_spatial_ladder_law(code, a, b, c):
    sl = spatial_ladder(s(code, a, b, c))
    assert abs(sl * sl - c * c - ladder_length(a, b) ** 2) <= 1e-10 * max(1.0, sl * sl)


@given(st.sampled_from(CODES), st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0.2, 5), st.floats(0.05, 1.0))
def test_extrusion_law(code, a, b, c, frac):
    sc = s(code, a, b, c)
    fam = max_volume_boxes(sc).rects
    q = frac * math.sqrt(a * b)
    p = a * b / q
    expected = fam.contains(p, q) or (abs(p - c) <= 1e-9 * c and fam.contains(q, c)) or (
        abs(q - c) <= 1e-9 * c and fam.contains(p, c)
    )
    assert is_max_volume_box(sc, BoxDims(p, q, c)) == expected


def test_general_boxes_refused():
    with pytest.raises(NotCharacterizedError):
        decide_box(s("13", 1, 1, 1), BoxDims(1, 0.5, 0.5))
