import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from corridor_mover.envelopes import (
    UNBOUNDED,
    EnvelopeDomainError,
    anti_window,
    certified_grid_min,
    eval_f,
    eval_g,
    f_critical_points,
    ladder_length,
    m_value,
    min_f,
    min_f_certified,
    min_f_window,
    min_g,
    min_g_certified,
    n_value,
    real_roots,
    sup_h,
)
from corridor_mover.envelopes import AntiWindow

SQRT2 = math.sqrt(2.0)
HALF_PI = math.pi / 2
pos = st.floats(0.2, 5.0)


def line_distance(p, q, r):
    (x1, y1), (x2, y2) = q, r
    return abs((x2 - x1) * (y1 - p[1]) - (x1 - p[0]) * (y2 - y1)) / math.hypot(x2 - x1, y2 - y1)


def test_eval_f_examples():
    assert eval_f(1, 1, 2, math.pi / 4) == pytest.approx(SQRT2 - 1, abs=1e-12)
    assert eval_f(2, 3, 4, 0.0) == 3 and eval_f(2, 3, 4, HALF_PI) == pytest.approx(2)
    with pytest.raises(EnvelopeDomainError):
        eval_f(1, 1, 1, 2.0)


@given(pos, pos, st.floats(0.1, 8), st.floats(0.01, HALF_PI - 0.01))
def test_f_is_corner_line_distance(a, b, c, t):
    # line with intercepts (c cos t, 0), (0, c sin t); C lies on the far side when f > 0
    dist = line_distance((a, b), (c * math.cos(t), 0.0), (0.0, c * math.sin(t)))
    assert abs(abs(eval_f(a, b, c, t)) - dist) <= 1e-10 * (a + b + c)


@given(pos, pos, st.floats(0.01, HALF_PI - 0.01), st.data())
def test_g_is_tangent_length(a, b, t, data):
    d = data.draw(st.floats(0.0, min(a, b)))
    # tangent to k((a,b); d) with normal (sin t, cos t), on the origin side of C
    rhs = a * math.sin(t) + b * math.cos(t) - d
    x0, y0 = rhs / math.sin(t), rhs / math.cos(t)
    assert abs(eval_g(a, b, d, t) - math.hypot(x0, y0)) <= 1e-9 * max(1.0, math.hypot(x0, y0))


def test_g_pole():
    assert eval_g(1, 1, 0, math.pi / 4) == pytest.approx(2 * SQRT2)
    for t in (0.0, HALF_PI):
        with pytest.raises(EnvelopeDomainError):
            eval_g(1, 1, 0.5, t)


def test_m_special_values():
    assert m_value(1, 1, 2) == pytest.approx(SQRT2 - 1, abs=1e-12)
    assert m_value(3, 4, 5) == pytest.approx(2.4, abs=1e-12)
    assert m_value(1, 1, 2 * SQRT2) == pytest.approx(0.0, abs=1e-12)
    assert m_value(1, 1, 0.5) == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        min_f(1, 1, 0)


def test_n_special_values():
    assert n_value(1, 1, 0) == pytest.approx(2 * SQRT2, abs=1e-12)
    assert n_value(3, 4, 2.4) == pytest.approx(5, abs=1e-12)
    assert n_value(1, 1, 0.5) == pytest.approx(2 * SQRT2 - 1, abs=1e-12)
    assert min_g(3, 4, 2.4, fast_paths=False).value == pytest.approx(5, abs=1e-9)
    with pytest.raises(EnvelopeDomainError):
        min_g(1, 2, 1.5)


@given(pos, pos, st.floats(0.01, 1.0))
def test_n_bounded_by_area(a, b, frac):
    d = frac * min(a, b)
    n = min_g(a, b, d, fast_paths=False).value
    assert n <= a * b / d + 1e-9 * (a + b)


def test_ladder():
    assert ladder_length(1, 1) == pytest.approx(2 * SQRT2)
    assert ladder_length(1, 8) == pytest.approx(5 * math.sqrt(5))


@given(pos, pos)
def test_ladder_is_n_at_zero(a, b):
    assert abs(ladder_length(a, b) - min_g(a, b, 0.0, fast_paths=False).value) <= 1e-10 * (a + b)


def test_d_zero_stationary_point():
    # a x^3 = b: tan t0 = (b/a)^(1/3)
    res = min_g(1.0, 8.0, 0.0)
    assert math.tan(res.argmin) == pytest.approx(2.0)


def test_anti_window():
    w = anti_window(1, 1, SQRT2)
    assert w.t1 == pytest.approx(math.pi / 4) and w.t2 == pytest.approx(math.pi / 4)
    assert anti_window(1, 1, 2) is None
    w = anti_window(1, 1, 0.5)
    assert (w.t1, w.t2, w.extended) == (0.0, HALF_PI, True)


def test_min_f_window():
    assert min_f_window(1, 1, 0.5, AntiWindow(0.0, HALF_PI)).value == pytest.approx(1.0)
    assert min_f_window(1, 1, 1e-9, AntiWindow(math.pi / 4, math.pi / 4)).value == pytest.approx(SQRT2)
    assert min_f_window(1, 1, 0.7, AntiWindow(0.3, 0.3)).value == pytest.approx(eval_f(1, 1, 0.7, 0.3))
    with pytest.raises(EnvelopeDomainError):
        min_f_window(1, 1, 0.5, None)


def test_sup_h():
    assert sup_h(0.3, 1, 1) == pytest.approx(1.0)
    assert sup_h(1.5, 1.5, 1) is UNBOUNDED
    assert str(UNBOUNDED) == "unbounded"


@given(pos, pos, st.floats(0.1, 6))
@settings(max_examples=200)
def test_sup_h_duality(a, b, c):
    m = m_value(a, b, c)
    assume(m > 1e-3)
    for d in (0.9 * m, 1.1 * m):
        k = sup_h(c, d, b)
        if k is UNBOUNDED:
            assert d > b
            continue
        assert k >= d - 1e-12
        if abs(a - k) > 1e-7:
            assert (a >= k) == (d <= m)


def test_certified_grid():
    from corridor_mover.envelopes import f_vectorized, g_vectorized

    r = certified_grid_min(f_vectorized(1, 1, 2), (0, HALF_PI), 4.0, 1e-8)
    assert abs(r.value - (SQRT2 - 1)) <= 1e-8 and r.certified_error <= 1e-8
    r = certified_grid_min(lambda x: np.full_like(x, 3.0), (0, 1), 0.0, 1e-8)
    assert r.value == 3.0 and r.certified_error == 0.0
    r = min_g_certified(1, 1, 0.5, 1e-8)
    assert abs(r.value - (2 * SQRT2 - 1)) <= 1e-8
    with pytest.raises(ValueError):
        certified_grid_min(lambda x: x, (0, 1), 1.0, 0.0)


def test_real_roots_against_numpy():
    rng = np.random.default_rng(4)
    for _ in range(300):
        co = rng.normal(size=rng.integers(2, 7))
        ref = sorted(z.real for z in np.roots(co) if abs(z.imag) < 1e-9 and -2 <= z.real <= 2)
        got = real_roots(co, -2, 2)
        if len(got) == len(ref):
            assert np.allclose(got, ref, atol=1e-9)
    assert real_roots([1, -2, 1], 0, 3) == [1.0]
    assert real_roots([5.0], 0, 1) == []


@given(pos, pos, st.floats(0.1, 10))
def test_m_symmetric(a, b, c):
    assert abs(m_value(a, b, c) - m_value(b, a, c)) <= 1e-10 * (a + b + c)


@given(pos, pos, st.floats(0.1, 10), st.floats(1.0, 1.5))
def test_m_monotone(a, b, c, k):
    base = m_value(a, b, c)
    tol = 1e-10 * (a + b + c)
    assert m_value(k * a, b, c) >= base - tol
    assert m_value(a, k * b, c) >= base - tol
    assert m_value(a, b, k * c) <= base + tol


@given(pos, pos, st.floats(0.0, 5.0))
def test_at_most_one_interior_critical_point(a, b, extra):
    # for shorter c, f can also have interior maxima (e.g. a = b, c < 2(sqrt2 - 1))
    c = max(a, b) + extra
    assert len(f_critical_points(a, b, c)) <= 1


def test_interior_maxima_for_short_rectangles():
    ts = f_critical_points(1, 1, 0.75)
    assert len(ts) == 3 and ts[1] == pytest.approx(math.pi / 4)
    assert m_value(1, 1, 0.75) == pytest.approx(1.0)


@given(pos, pos, st.floats(0.0, 1.0))
def test_f_rotation_beats_anti_window(a, b, frac):
    lo, hi = max(a, b), math.hypot(a, b)
    c = lo + frac * (hi - lo)
    w = anti_window(a, b, c)
    assume(w is not None and w.t1 > 1e-6 and w.t2 < HALF_PI - 1e-6)
    ts = np.linspace(w.t1, w.t2, 201)
    gmin = min(eval_g(a, b, c, float(t)) for t in ts)
    assert m_value(a, b, c) >= gmin - 1e-9


@given(pos, pos, st.floats(0.0, 1.0), st.floats(0.02, HALF_PI - 0.02), st.floats(1e-3, 0.01))
def test_g_convex(a, b, frac, t, h):
    d = frac * min(a, b)
    assume(h < t < HALF_PI - h)
    second = eval_g(a, b, d, t - h) - 2 * eval_g(a, b, d, t) + eval_g(a, b, d, t + h)
    assert second >= -1e-9 * eval_g(a, b, d, t)


@given(pos, pos, st.floats(0.1, 10))
@settings(max_examples=50)
def test_min_f_matches_certified(a, b, c):
    assert abs(min_f(a, b, c).value - min_f_certified(a, b, c).value) <= 1e-8
