import json
import math

import pytest

from corridor_mover.cli import dumps_path, loads_path, main, render_svg
from corridor_mover.geometry import CorridorSpec, Point2, Pose, RectDims
from corridor_mover.motion import MotionPath, Segment, SegmentKind, plan, rotation_path

C13 = CorridorSpec(1, 3, 1.0, 1.0)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_decide_json(capsys):
    code, out, _ = run(capsys, "decide", "--corridor", "13", "--a", "1", "--b", "1", "--c", "2", "--d", "0.4", "--format", "json")
    body = json.loads(out)
    assert code == 0 and body["branch"] == "Thm1-iv₂"
    assert body["margin"] == pytest.approx(math.sqrt(2) - 1 - 0.4)


def test_decide_infeasible(capsys):
    code, out, _ = run(capsys, "decide", "--corridor", "13", "--a", "1", "--b", "1", "--c", "2", "--d", "0.45")
    assert code == 1 and out.startswith("infeasible")


def test_tolerance_env(capsys, monkeypatch):
    # d = m + 1e-7: infeasible at the default tolerance, feasible with a looser one
    d = str(math.sqrt(2) - 1 + 1e-7)
    args = ("decide", "--corridor", "13", "--a", "1", "--b", "1", "--c", "2", "--d", d)
    assert run(capsys, *args)[0] == 1
    monkeypatch.setenv("CORRIDOR_MOVER_TOL", "1e-6")
    assert run(capsys, *args)[0] == 0
    monkeypatch.setenv("CORRIDOR_MOVER_TOL", "-1")
    assert run(capsys, *args)[0] == 2


def test_ladder(capsys):
    code, out, _ = run(capsys, "ladder", "--corridor", "00", "--a", "1", "--b", "1")
    assert code == 0 and out.strip() == "unbounded"
    code, out, _ = run(capsys, "ladder", "--corridor", "13", "--a", "1", "--b", "1")
    assert float(out) == pytest.approx(2 * math.sqrt(2))


def test_usage_errors(capsys):
    assert run(capsys, "decide", "--corridor", "99", "--a", "1", "--b", "1", "--c", "1", "--d", "1")[0] == 2
    assert run(capsys, "decide", "--corridor", "13", "--a", "1")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys)[0] == 2


def test_plan_verify_render(tmp_path, capsys):
    out = tmp_path / "path.json"
    assert run(capsys, "plan", "--corridor", "13", "--a", "1", "--b", "1", "--c", "2", "--d", "0.4", "--out", str(out))[0] == 0
    code, text, _ = run(capsys, "verify", str(out), "--format", "json")
    rep = json.loads(text)
    assert code == 0 and rep["ok"]
    # the rectangle slides along the outer walls: contact up to sampling rounding
    assert rep["min_clearance"] >= -1e-6
    svg = tmp_path / "p.svg"
    assert run(capsys, "render", str(out), "--out", str(svg), "--frames", "9")[0] == 0
    first = svg.read_bytes()
    assert first.count(b"<polygon") == 9 and b"stroke-dasharray" in first
    assert run(capsys, "render", str(out), "--out", str(svg), "--frames", "9")[0] == 0
    assert svg.read_bytes() == first
    assert run(capsys, "render", str(out), "--frames", "0")[0] == 2
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 2


def test_plan_infeasible(capsys):
    assert run(capsys, "plan", "--corridor", "13", "--a", "1", "--b", "1", "--c", "2", "--d", "0.45")[0] == 1


def test_json_round_trip():
    path = plan(C13, RectDims(2, 0.4))
    text = dumps_path(path)
    again = loads_path(text)
    assert dumps_path(again) == text
    obj = json.loads(text)
    assert obj["schema"] == 1 and set(obj) == {"schema", "corridor", "dims", "samples", "segments"}
    assert set(obj["samples"][0]) == {"t", "angle", "x", "y"}
    assert set(obj["segments"][0]) == {"from", "to", "kind"}
    assert again.samples == path.samples


def test_svg_single_frame():
    pose = Pose(0.0, Point2(0.3, 2.0))
    path = MotionPath(C13, RectDims(2, 0.4), [(0.0, pose)], [Segment(0.0, 1.0, SegmentKind.TRANSLATION)])
    svg = render_svg(path, 1)
    assert svg.count("<polygon") == 1 and "stroke-dasharray" not in svg
    with pytest.raises(ValueError):
        render_svg(path, 0)


def test_svg_rotation_circle():
    svg = render_svg(rotation_path(C13, RectDims(2, 0.4)), 9)
    assert 'r="40.00"' in svg and svg.count("<polygon") == 9


def test_other_commands(capsys):
    assert run(capsys, "rotation", "--a", "1", "--b", "1", "--c", "0.9", "--d", "1")[0] == 1
    assert run(capsys, "antirotation", "--a", "1", "--b", "1", "--c", "0.9", "--d", "1")[0] == 0
    code, out, _ = run(capsys, "maxrects", "--corridor", "13", "--a", "3", "--b", "4", "--format", "json")
    assert code == 0 and json.loads(out)["pairs"] == [[4, 3], [5.0, 2.4]]
    code, out, _ = run(capsys, "spatial", "--corridor", "13", "--a", "3", "--b", "4", "--height", "2", "--box", "5", "2.4", "2")
    assert code == 0 and "is_max_volume_box=True" in out
    assert run(capsys, "spatial", "--corridor", "13", "--a", "3", "--b", "4", "--height", "2", "--box", "6", "2", "2")[0] == 1
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "FAIL" not in out


def test_oracle_command(capsys, tmp_path):
    wit = tmp_path / "w.json"
    code, out, _ = run(capsys, "oracle", "--corridor", "13", "--a", "1", "--b", "1", "--c", "2", "--d", "0.3", "--out", str(wit))
    assert code == 0 and "agree=True" in out and wit.exists()
    code, out, _ = run(capsys, "oracle", "--corridor", "13", "--a", "1", "--b", "1", "--c", "2", "--d", "0.55")
    assert code == 1


def test_oracle_disagreement_exit(capsys, monkeypatch):
    import corridor_mover.cspace_oracle as oracle

    def never(corr, dims, grid=None):
        return oracle.OracleVerdict(oracle.INFEASIBLE, None, 0, 0, oracle.truncation_window(corr, dims))

    monkeypatch.setattr(oracle, "oracle_with_retry", never)
    code, out, _ = run(capsys, "oracle", "--corridor", "13", "--a", "1", "--b", "1", "--c", "2", "--d", "0.3")
    assert code == 3 and "agree=False" in out
