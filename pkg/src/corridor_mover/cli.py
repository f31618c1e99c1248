"""Command line front end, path serialisation and SVG rendering.

Exit codes: 0 feasible / success, 1 infeasible (decision commands) or a
failed verification, 2 usage error, 3 oracle and closed form disagree.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .envelopes import UNBOUNDED, ladder_length, m_value, n_value
from .feasibility import (
    decide,
    decide_antirotation,
    decide_rotation,
    decide_segment,
    max_area_rects,
)
from .geometry import DEFAULT_TOL, CorridorSpec, Point2, Pose, RectDims, rect_vertices
from .motion import (
    InfeasibleInputError,
    MotionPath,
    Segment,
    SegmentKind,
    plan,
    verify_path,
)

SCHEMA_VERSION = 1
PX_PER_UNIT = 100.0
EXIT_OK, EXIT_INFEASIBLE, EXIT_USAGE, EXIT_DISAGREE = 0, 1, 2, 3
TOL_ENV = "CORRIDOR_MOVER_TOL"


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# serialisation


def path_to_dict(path: MotionPath) -> dict:
    corr, dims = path.corridor, path.dims
    return {
        "schema": SCHEMA_VERSION,
        "corridor": {"i": corr.i, "j": corr.j, "a": corr.a, "b": corr.b},
        "dims": {"c": dims.c, "d": dims.d},
        "samples": [{"t": t, "angle": p.angle, "x": p.origin[0], "y": p.origin[1]} for t, p in path.samples],
        "segments": [{"from": s.start, "to": s.end, "kind": s.kind.value} for s in path.segments],
    }


def dumps_path(path: MotionPath) -> str:
    # json writes floats with repr, the shortest string that reads back exactly
    return json.dumps(path_to_dict(path), separators=(",", ":")) + "\n"


def path_from_dict(obj: dict) -> MotionPath:
    if obj.get("schema") != SCHEMA_VERSION:
        raise ValueError(f"unsupported path schema {obj.get('schema')!r}")
    co = obj["corridor"]
    corr = CorridorSpec(int(co["i"]), int(co["j"]), float(co["a"]), float(co["b"]))
    dims = RectDims(float(obj["dims"]["c"]), float(obj["dims"]["d"]))
    samples = [(float(s["t"]), Pose(float(s["angle"]), Point2(float(s["x"]), float(s["y"])))) for s in obj["samples"]]
    segments = [Segment(float(s["from"]), float(s["to"]), SegmentKind(s["kind"])) for s in obj["segments"]]
    return MotionPath(corr, dims, samples, segments)


def loads_path(text: str) -> MotionPath:
    return path_from_dict(json.loads(text))


# --------------------------------------------------------------------------
# SVG


def _walls(corr: CorridorSpec, x0: float, x1: float, y0: float, y1: float) -> list[list[tuple[float, float]]]:
    a, b, i, j = corr.a, corr.b, corr.i, corr.j
    walls = [[(0.0, 0.0 if i == 1 else y0), (0.0, y1)], [(a, b), (a, y1)]]
    if j in (2, 3):
        walls.append([(a, b), (x1, b)])
    if i == 0 and j in (0, 2):
        walls.append([(a, y0), (a, 0.0)])
    elif i == 1 and j in (0, 2):
        walls.append([(0.0, 0.0), (a, 0.0), (a, y0)])
    elif i == 0:
        walls.append([(a, y0), (a, 0.0), (x1, 0.0)])
    else:
        walls.append([(0.0, 0.0), (x1, 0.0)])
    return walls


def render_svg(path: MotionPath, frames: int = 9, window=None) -> str:
    """Corridor walls, ``frames`` placements of the rectangle and the corner ``C``."""
    from .cspace_oracle import truncation_window

    if frames < 1:
        raise ValueError("frames must be >= 1")
    corr, dims = path.corridor, path.dims
    w = window if window is not None else truncation_window(corr, dims)
    x0, x1, y0, y1 = w.x0, w.x1, w.y0, w.y1
    if window is None:
        for _, pose in path.samples:
            for vx, vy in rect_vertices(dims, pose):
                x0, x1, y0, y1 = min(x0, vx), max(x1, vx), min(y0, vy), max(y1, vy)
    s = PX_PER_UNIT

    def X(x):
        return f"{(x - x0) * s:.2f}"

    def Y(y):
        return f"{(y1 - y) * s:.2f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{(x1 - x0) * s:.0f}" height="{(y1 - y0) * s:.0f}">',
        '<rect x="0" y="0" width="100%" height="100%" fill="white"/>',
    ]
    a, b = corr.a, corr.b
    ya = 0.0 if corr.i == 1 else y0
    yb0 = 0.0 if corr.j in (1, 3) else y0
    yb1 = b if corr.j in (2, 3) else y1
    for (p, q, r, t) in ((0.0, a, ya, y1), (a, x1, yb0, yb1)):
        out.append(
            f'<rect x="{X(p)}" y="{Y(t)}" width="{(q - p) * s:.2f}" height="{(t - r) * s:.2f}" fill="#eef3fb" stroke="none"/>'
        )
    for wall in _walls(corr, x0, x1, y0, y1):
        pts = " ".join(f"{X(x)},{Y(y)}" for x, y in wall)
        out.append(f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="3"/>')
    if SegmentKind.ROTATION in path.kinds():
        out.append(
            f'<circle cx="{X(a)}" cy="{Y(b)}" r="{dims.d * s:.2f}" fill="none" stroke="#888" stroke-dasharray="6,4"/>'
        )
    n = len(path.samples)
    for k in range(frames):
        tt = 0.0 if frames == 1 else k / (frames - 1)
        pose = path.pose_at(tt) if n > 1 else path.start
        opacity = 1.0 if frames == 1 else 0.25 + 0.75 * k / (frames - 1)
        pts = " ".join(f"{X(v[0])},{Y(v[1])}" for v in rect_vertices(dims, pose))
        out.append(f'<polygon points="{pts}" fill="none" stroke="#c03030" stroke-width="2" stroke-opacity="{opacity:.3f}"/>')
    out.append(f'<circle cx="{X(a)}" cy="{Y(b)}" r="4" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# commands


def _tol() -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_TOL
    try:
        t = float(raw)
    except ValueError:
        raise UsageError(f"{TOL_ENV} must be a decimal number, got {raw!r}")
    if not (t >= 0 and math.isfinite(t)):
        raise UsageError(f"{TOL_ENV} must be >= 0")
    return t


def _corridor(args) -> CorridorSpec:
    if args.corridor is None or args.a is None or args.b is None:
        raise UsageError("need --corridor, --a and --b")
    try:
        return CorridorSpec.from_code(args.corridor, args.a, args.b)
    except ValueError as exc:
        raise UsageError(str(exc))


def _dims(args, need_d: bool = True) -> RectDims:
    if args.c is None or (need_d and args.d is None):
        raise UsageError("need --c and --d")
    try:
        return RectDims(args.c, args.d if args.d is not None else 0.0)
    except ValueError as exc:
        raise UsageError(str(exc))


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(payload, ensure_ascii=False))
    else:
        print(text)


def _decision_payload(dec) -> dict:
    return {
        "feasible": dec.feasible,
        "branch": dec.branch.value if dec.branch is not None else None,
        "margin": dec.margin,
        "satisfied": [b.value for b in dec.satisfied],
        "notes": dec.notes,
    }


def cmd_decide(args) -> int:
    corr, dims = _corridor(args), _dims(args, need_d=False)
    dec = decide(corr, dims, _tol()) if dims.d > 0 or dims.c > 0 else None
    if dec is None:
        raise UsageError("degenerate rectangle")
    payload = {"corridor": corr.code, "a": corr.a, "b": corr.b, "c": dims.c, "d": dims.d, **_decision_payload(dec)}
    word = "feasible" if dec.feasible else "infeasible"
    branch = dec.branch.value if dec.branch else "-"
    _emit(args, payload, f"{word} branch={branch} margin={dec.margin:.6g}")
    return EXIT_OK if dec.feasible else EXIT_INFEASIBLE


def _rot_common(args, fn) -> int:
    if args.a is None or args.b is None:
        raise UsageError("need --a and --b")
    dims = _dims(args)
    try:
        dec = fn(args.a, args.b, dims, _tol())
    except ValueError as exc:
        raise UsageError(str(exc))
    word = "feasible" if dec.feasible else "infeasible"
    _emit(args, {"a": args.a, "b": args.b, "c": dims.c, "d": dims.d, **_decision_payload(dec)}, f"{word} margin={dec.margin:.6g}")
    return EXIT_OK if dec.feasible else EXIT_INFEASIBLE


def cmd_rotation(args) -> int:
    return _rot_common(args, decide_rotation)


def cmd_antirotation(args) -> int:
    return _rot_common(args, decide_antirotation)


def cmd_ladder(args) -> int:
    corr = _corridor(args)
    dec = decide_segment(corr, 1.0)
    if dec.margin == math.inf:
        _emit(args, {"corridor": corr.code, "ladder": "unbounded"}, "unbounded")
    else:
        ll = ladder_length(corr.a, corr.b)
        _emit(args, {"corridor": corr.code, "ladder": ll}, repr(ll))
    return EXIT_OK


def cmd_maxrects(args) -> int:
    fam = max_area_rects(_corridor(args))
    payload = {
        "kind": fam.kind,
        "area": fam.area,
        "pairs": [list(p) for p in fam.pairs],
        "d_range": list(fam.d_range) if fam.d_range else None,
    }
    lines = [f"kind={fam.kind} area={fam.area!r}"]
    lines += [f"  {c!r} x {d!r}" for c, d in fam.pairs]
    if fam.d_range:
        lo, hi, inc = fam.d_range
        lines.append(f"  (area/d) x d for d in {'[' if inc else '('}{lo!r}, {hi!r}]")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _write(path: Optional[str], text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_plan(args) -> int:
    corr, dims = _corridor(args), _dims(args)
    try:
        path = plan(corr, dims, steps=args.samples)
    except InfeasibleInputError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    _write(args.out, dumps_path(path))
    if args.out not in (None, "-"):
        print(f"construction={path.label} samples={len(path.samples)} -> {args.out}")
    return EXIT_OK


def _read_path(fname: str) -> MotionPath:
    try:
        with open(fname, encoding="utf-8") as fh:
            return loads_path(fh.read())
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read path {fname}: {exc}")


def cmd_verify(args) -> int:
    path = _read_path(args.path)
    rep = verify_path(path, args.tol, args.samples)
    payload = {
        "ok": rep.ok,
        "min_clearance": rep.min_clearance,
        "worst_param": rep.worst_param,
        "samples_checked": rep.samples_checked,
        "start_in_A": rep.start_in_A,
        "end_in_B": rep.end_in_B,
    }
    _emit(args, payload, " ".join(f"{k}={v}" for k, v in payload.items()))
    return EXIT_OK if rep.ok else EXIT_INFEASIBLE


def cmd_oracle(args) -> int:
    from .cspace_oracle import GridConfig, oracle_with_retry

    corr, dims = _corridor(args), _dims(args)
    grid = GridConfig(nx=args.nx, ny=args.ny, ntheta=args.ntheta)
    verdict = oracle_with_retry(corr, dims, grid)
    dec = decide(corr, dims, _tol())
    agree = verdict.feasible == dec.feasible
    payload = {
        "oracle": verdict.result,
        "closed_form": dec.feasible,
        "margin": dec.margin,
        "agree": agree,
        "cells_explored": verdict.cells_explored,
    }
    if verdict.witness is not None and args.out:
        _write(args.out, dumps_path(verdict.witness))
    _emit(args, payload, " ".join(f"{k}={v}" for k, v in payload.items()))
    if not agree:
        return EXIT_DISAGREE
    return EXIT_OK if dec.feasible else EXIT_INFEASIBLE


def cmd_spatial(args) -> int:
    from .spatial import BoxDims, SpatialCorridor, is_max_volume_box, max_volume_boxes, spatial_ladder

    if args.height is None:
        raise UsageError("need --height")
    try:
        s = SpatialCorridor(_corridor(args), args.height)
    except ValueError as exc:
        raise UsageError(str(exc))
    fam = max_volume_boxes(s)
    sl = spatial_ladder(s)
    payload = {
        "volume": fam.volume,
        "examples": [list(bx.sides) for bx in fam.members(3)],
        "ladder": "unbounded" if sl is UNBOUNDED else sl,
    }
    lines = [f"max volume={fam.volume!r}", f"ladder={'unbounded' if sl is UNBOUNDED else repr(sl)}"]
    lines += ["  box " + " x ".join(repr(v) for v in bx.sides) for bx in fam.members(3)]
    code = EXIT_OK
    if args.box:
        try:
            box = BoxDims(*args.box)
        except ValueError as exc:
            raise UsageError(str(exc))
        ok = is_max_volume_box(s, box)
        payload["is_max_volume_box"] = ok
        lines.append(f"is_max_volume_box={ok}")
        code = EXIT_OK if ok else EXIT_INFEASIBLE
    _emit(args, payload, "\n".join(lines))
    return code


def cmd_render(args) -> int:
    path = _read_path(args.path)
    if args.frames < 1:
        raise UsageError("--frames must be >= 1")
    _write(args.out, render_svg(path, args.frames))
    return EXIT_OK


def selftest_checks() -> list[tuple[str, bool]]:
    s2 = math.sqrt(2.0)
    c13 = CorridorSpec(1, 3, 1.0, 1.0)
    checks = [
        ("m(1,1,2) = sqrt2 - 1", abs(m_value(1, 1, 2) - (s2 - 1)) <= 1e-9),
        ("m(3,4,5) = 2.4", abs(m_value(3, 4, 5) - 2.4) <= 1e-9),
        ("n(3,4,2.4) = 5", abs(n_value(3, 4, 2.4) - 5) <= 1e-9),
        ("n(1,1,0) = 2 sqrt2", abs(n_value(1, 1, 0) - 2 * s2) <= 1e-9),
        ("ladder(1,1) = 2 sqrt2", abs(ladder_length(1, 1) - 2 * s2) <= 1e-9),
        ("C13 2x0.4 feasible", decide(c13, RectDims(2, 0.4)).feasible),
        ("C13 2x0.45 infeasible", not decide(c13, RectDims(2, 0.45)).feasible),
    ]
    try:
        path = plan(c13, RectDims(2, 0.4))
        rep = verify_path(path)
        ok = rep.ok and loads_path(dumps_path(path)) is not None and dumps_path(loads_path(dumps_path(path))) == dumps_path(path)
    except Exception:
        ok = False
    checks.append(("plan + verify + round trip", ok))
    return checks


def cmd_selftest(args) -> int:
    checks = selftest_checks()
    for name, ok in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name}")
    return EXIT_OK if all(ok for _, ok in checks) else EXIT_INFEASIBLE


# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="corridor-mover", description="Rectangles moving around the corner of planar corridors.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def geo(sp, corridor=True, rect=True):
        if corridor:
            sp.add_argument("--corridor", help="family code ij, e.g. 13")
        sp.add_argument("--a", type=float)
        sp.add_argument("--b", type=float)
        if rect:
            sp.add_argument("--c", type=float)
            sp.add_argument("--d", type=float)
        sp.add_argument("--format", choices=("text", "json"), default="text")

    geo(sub.add_parser("decide", help="closed-form decision"))
    geo(sub.add_parser("rotation", help="rotation test"), corridor=False)
    geo(sub.add_parser("antirotation", help="anti-rotation test"), corridor=False)
    geo(sub.add_parser("ladder", help="longest segment"), rect=False)
    geo(sub.add_parser("maxrects", help="maximum-area rectangles"), rect=False)
    sp = sub.add_parser("plan", help="constructive motion as JSON")
    geo(sp)
    sp.add_argument("--out")
    sp.add_argument("--samples", type=int, default=512)
    sp = sub.add_parser("verify", help="check a path file")
    sp.add_argument("path")
    sp.add_argument("--tol", type=float, default=1e-6)
    sp.add_argument("--samples", type=int, default=512)
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp = sub.add_parser("oracle", help="grid search, compared with the closed form")
    geo(sp)
    sp.add_argument("--nx", type=int, default=160)
    sp.add_argument("--ny", type=int, default=160)
    sp.add_argument("--ntheta", type=int, default=180)
    sp.add_argument("--out")
    sp = sub.add_parser("spatial", help="boxes in the spatial corridor")
    geo(sp, rect=False)
    sp.add_argument("--height", type=float)
    sp.add_argument("--box", type=float, nargs=3)
    sp = sub.add_parser("render", help="SVG of a path file")
    sp.add_argument("path")
    sp.add_argument("--out")
    sp.add_argument("--frames", type=int, default=9)
    sub.add_parser("selftest", help="quick sanity checks")
    return p


COMMANDS = {
    "decide": cmd_decide,
    "rotation": cmd_rotation,
    "antirotation": cmd_antirotation,
    "ladder": cmd_ladder,
    "maxrects": cmd_maxrects,
    "plan": cmd_plan,
    "verify": cmd_verify,
    "oracle": cmd_oracle,
    "spatial": cmd_spatial,
    "render": cmd_render,
    "selftest": cmd_selftest,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
