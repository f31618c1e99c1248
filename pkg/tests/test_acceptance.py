"""End-to-end acceptance checks, each at its stated tolerance and time limit."""

import math
import random
import time

import numpy as np

from corridor_mover.cspace_oracle import oracle_with_retry
from corridor_mover.envelopes import (
    ladder_length,
    m_value,
    min_f,
    min_f_certified,
    min_g,
    min_g_certified,
    n_value,
)
from corridor_mover.feasibility import (
    decide,
    decide_antirotation,
    decide_rotation,
    max_area_rects,
    square_case_thresholds,
)
from corridor_mover.geometry import CorridorSpec, RectDims
from corridor_mover.motion import plan, verify_path
from corridor_mover.motion import antirotation_path
from corridor_mover.spatial import BoxDims, SpatialCorridor, is_max_volume_box, max_volume_boxes, spatial_ladder

SQRT2 = math.sqrt(2.0)
CODES = ["00", "01", "02", "03", "10", "11", "12", "13"]


def _finish(acceptance, number, failures, elapsed, limit, what):
    ok = not failures and elapsed < limit
    detail = f"{what}; {len(failures)} failures; {elapsed:.2f}s (limit {limit:g}s)"
    if failures:
        detail += f"; first: {failures[0]}"
    acceptance(number, ok, detail)
    assert not failures, failures[:5]
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


def test_golden_values(acceptance):
    t0 = time.perf_counter()
    bad = []
    # m(1,1,c) = min(1, sqrt2 - c/2) on (0, 2 sqrt2]
    for c in np.linspace(2 * SQRT2, 0.0, 2000, endpoint=False)[::-1]:
        c = float(c)
        want = min(1.0, SQRT2 - c / 2)
        if abs(m_value(1, 1, c) - want) > 1e-9:
            bad.append(("m", c, m_value(1, 1, c), want))
        if abs(square_case_thresholds(c).rotation_max_d - want) > 1e-9:
            bad.append(("rotation_max_d", c))
    # anti-rotation threshold: feasible just below it, infeasible just above
    for c in np.linspace(SQRT2, 0.0, 2000, endpoint=False)[::-1]:
        c = float(c)
        thr = square_case_thresholds(c).antirotation_max_d
        below, above = thr - 1e-9, thr + 1e-9
        if below > 0 and not decide_antirotation(1, 1, RectDims(c, below), tol=0.0).feasible:
            bad.append(("anti below", c, thr))
        if decide_antirotation(1, 1, RectDims(c, above), tol=0.0).feasible:
            bad.append(("anti above", c, thr))
    specials = [
        ("m(3,4,5)", m_value(3, 4, 5), 2.4),
        ("n(3,4,2.4)", n_value(3, 4, 2.4), 5.0),
        ("n(1,1,0)", n_value(1, 1, 0), 2 * SQRT2),
        ("ladder(1,1)", ladder_length(1, 1), 2 * SQRT2),
        ("spatial ladder", spatial_ladder(SpatialCorridor(CorridorSpec(1, 3, 1, 1), 1)), 3.0),
    ]
    bad += [s for s in specials if abs(s[1] - s[2]) > 1e-9]
    _finish(acceptance, 1, bad, time.perf_counter() - t0, 1.0, "closed-form golden values")


def test_solver_cross_validation(acceptance):
    rng = random.Random(2)
    triples = []
    for _ in range(500):
        a, b = rng.uniform(0.2, 5), rng.uniform(0.2, 5)
        c = rng.uniform(0.1, 2 * math.hypot(a, b))
        d = rng.uniform(0.0, min(a, b))
        triples.append((a, b, c, d))
    t0 = time.perf_counter()
    bad = []
    for a, b, c, d in triples:
        mf, mc = min_f(a, b, c).value, min_f_certified(a, b, c).value
        if abs(mf - mc) > 1e-8:
            bad.append(("m", a, b, c, mf, mc))
        ng, nc = min_g(a, b, d, fast_paths=False).value, min_g_certified(a, b, d).value
        if abs(ng - nc) > 1e-8:
            bad.append(("n", a, b, d, ng, nc))
    _finish(acceptance, 2, bad, time.perf_counter() - t0, 10.0, "reduction vs certified grid minimum, 500 triples")


def test_theorem1_identities(acceptance):
    rng = random.Random(3)
    t0 = time.perf_counter()
    bad = []
    for _ in range(1000):
        a, b = rng.uniform(0.2, 5), rng.uniform(0.2, 5)
        c = rng.uniform(0.05, 2.5 * math.hypot(a, b))
        d = rng.uniform(0.01, 1.2 * min(a, b))
        dims = RectDims(c, d)
        f = {code: decide(CorridorSpec.from_code(code, a, b), dims).feasible for code in CODES}
        checks = [
            f["00"] == f["01"] == f["02"],
            f["10"] == f["12"],
            f["11"] == f["13"],
            f["00"] == (f["10"] or f["03"]),
            f["13"] == (f["10"] and f["03"]),
        ]
        if not all(checks):
            bad.append((a, b, c, d, checks))
    _finish(acceptance, 3, bad, time.perf_counter() - t0, 5.0, "set identities on 1000 instances")


def _oracle_instances(seed: int, per_family: int):
    rng = random.Random(seed)
    out = []
    for code in CODES:
        n = 0
        while n < per_family:
            a, b = rng.uniform(0.5, 2), rng.uniform(0.5, 2)
            corr = CorridorSpec.from_code(code, a, b)
            c = rng.uniform(0.1, 1.5 * corr.l + 1)
            d = rng.uniform(0.02, 1.05 * min(a, b))
            dims = RectDims(c, d).normalized()
            dec = decide(corr, dims)
            if abs(dec.margin) < 0.02 * min(a, b):
                continue
            out.append((corr, dims, dec))
            n += 1
    return out


def test_oracle_agreement(acceptance):
    instances = _oracle_instances(1, 25)
    t0 = time.perf_counter()
    bad = []
    for corr, dims, dec in instances:
        v = oracle_with_retry(corr, dims)
        if v.feasible != dec.feasible:
            bad.append((corr.code, corr.a, corr.b, dims.c, dims.d, dec.margin, v.result))
        elif v.feasible:
            rep = verify_path(v.witness, tol=1e-6)
            if not rep.ok:
                bad.append(("witness", corr.code, corr.a, corr.b, dims.c, dims.d, rep.min_clearance))
    _finish(acceptance, 4, bad, time.perf_counter() - t0, 300.0, f"oracle vs closed form, {len(instances)} instances")


def test_constructive_soundness(acceptance):
    rng = random.Random(5)
    instances = []
    while len(instances) < 200:
        code = rng.choice(CODES)
        a, b = rng.uniform(0.3, 3), rng.uniform(0.3, 3)
        corr = CorridorSpec.from_code(code, a, b)
        c = rng.uniform(0.05, 2 * corr.l)
        d = rng.uniform(0.01, min(a, b))
        dims = RectDims(c, d).normalized()
        dec = decide(corr, dims)
        if dec.feasible and dec.margin >= 0.01:
            instances.append((corr, dims))
    t0 = time.perf_counter()
    bad = []
    for corr, dims in instances:
        try:
            path = plan(corr, dims)
            rep = verify_path(path, tol=1e-6, samples_per_segment=512)
            if not rep.ok:
                bad.append((corr.code, corr.a, corr.b, dims.c, dims.d, rep.min_clearance))
        except Exception as exc:  # the plan must not fail on a feasible input
            bad.append((corr.code, corr.a, corr.b, dims.c, dims.d, repr(exc)))
    remark = CorridorSpec(1, 3, 1.0, 1.0)
    rdims = RectDims(0.9, 1.0)
    if not verify_path(antirotation_path(remark, rdims), tol=1e-6, samples_per_segment=512).ok:
        bad.append("anti-rotation path of the anti-rotation-only instance fails")
    if decide_rotation(1.0, 1.0, rdims).feasible:
        bad.append("rotation reported feasible for the anti-rotation-only instance")
    _finish(acceptance, 5, bad, time.perf_counter() - t0, 60.0, "plan + verify on 200 feasible instances")


def test_area_bound(acceptance):
    rng = random.Random(6)
    t0 = time.perf_counter()
    bad = []
    for _ in range(500):
        a, b = rng.uniform(0.2, 5), rng.uniform(0.2, 5)
        c = rng.uniform(0.01, ladder_length(a, b))
        d = m_value(a, b, c)
        if c * d > a * b + 1e-9:
            bad.append((a, b, c, d))
        l = math.hypot(a, b)
        if abs(m_value(a, b, l) - a * b / l) > 1e-9:
            bad.append(("equality", a, b))
    _finish(acceptance, 6, bad, time.perf_counter() - t0, 1.0, "c*m(a,b,c) <= ab on 500 instances")


def test_max_volume_boxes(acceptance):
    rng = random.Random(7)
    t0 = time.perf_counter()
    bad = []
    for _ in range(100):
        code = rng.choice(CODES)
        a, b, h = rng.uniform(0.2, 5), rng.uniform(0.2, 5), rng.uniform(0.2, 5)
        corr = CorridorSpec.from_code(code, a, b)
        s = SpatialCorridor(corr, h)
        fam = max_volume_boxes(s)
        for p, q in fam.rects.members(5):
            box = BoxDims(p, q, h)
            if abs(box.volume - a * b * h) > 1e-10 * max(1.0, a * b * h):
                bad.append(("volume", code, a, b, h, p, q))
            if not decide(corr, RectDims(p, q)).feasible:
                bad.append(("base", code, a, b, h, p, q))
            if not is_max_volume_box(s, box):
                bad.append(("member rejected", code, a, b, h, p, q))
        # a non-member base of area ab, extruded to volume abc
        while True:
            q = rng.uniform(0.01, math.sqrt(a * b))
            p = a * b / q
            if not fam.rects.contains(p, q) and abs(q - h) > 1e-6 and abs(p - h) > 1e-6:
                break
        if is_max_volume_box(s, BoxDims(p, q, h)):
            bad.append(("non-member accepted", code, a, b, h, p, q))
    _finish(acceptance, 7, bad, time.perf_counter() - t0, 1.0, "maximal boxes on 100 spatial corridors")
