from __future__ import annotations

import io
import json

import pytest
from conftest import run_entry, run_source

from acumen_lite.engine import discrete_fixpoint, instantiate, plan_continuous
from acumen_lite.errors import EvalError
from acumen_lite.scene import SceneFrame, SceneWriter, ShapeRecord, emit_scene, extract_scene, normalize_3d
from acumen_lite.syntax import parse_source
from acumen_lite.values import to_value

HALF_PI = 3.14159265359 / 2


def test_single_record_encoding():
    (s,) = normalize_3d(to_value(["Sphere", [0, 0, 1], 0.5, [1, 0, 0], [1, 1, 1]]))
    assert s == ShapeRecord("Sphere", (0.0, 0.0, 1.0), 0.5, (1.0, 0.0, 0.0), (1.0, 1.0, 1.0))


def test_list_encoding():
    shapes = normalize_3d(to_value([["Sphere", [0, 0, 0], 1, [1, 1, 1], [0, 0, 0]],
                                    ["Cylinder", [1, 0, 0], [0.1, 2], [0, 1, 0], [0, 0, 0]]]))
    assert [s.kind for s in shapes] == ["Sphere", "Cylinder"]
    assert shapes[1].size == (0.1, 2.0)


def test_display_bar_record():
    src = """
    class display_bar (v,c,D)
     private _3D = ["Cylinder", D+[0,0.2,0], [0.02,v], c, [-3.14159265359/2,0,0]] end
     _3D = ["Cylinder", D+[0,0.2,v/2], [0.02,v], c, [-3.14159265359/2,0,0]];
    end
    """
    store = instantiate(parse_source(src), "display_bar", [3, [1, 1, 1], [1, 2, 3]])
    discrete_fixpoint(store)
    (bar,) = extract_scene(store).shapes
    assert bar.kind == "Cylinder" and bar.size == (0.02, 3.0)
    assert bar.center == (1.0, 2.2, 3.0 + 1.5)
    assert bar.orientation == (-HALF_PI, 0.0, 0.0)


@pytest.mark.parametrize("value, match", [
    (["Cube", [0, 0, 0], 1, [1, 1, 1], [0, 0, 0]], "unknown shape kind"),
    (["Sphere", [0, 0, 0], 1, [1, 1, 1]], "5 fields"),
    (["Sphere", [0, 0], 1, [1, 1, 1], [0, 0, 0]], "center"),
    (["Sphere", [0, 0, 0], [1, 2], [1, 1, 1], [0, 0, 0]], "radius"),
    (["Cylinder", [0, 0, 0], 1, [1, 1, 1], [0, 0, 0]], "Cylinder size"),
    (["Sphere", [0, 0, 0], 1, "red", [0, 0, 0]], "color"),
    ([1, 2, 3], "not a shape record"),
    (1.0, "must be a vector"),
])
def test_normalize_errors(value, match):
    with pytest.raises(EvalError, match=match):
        normalize_3d(to_value(value))


def test_colors_not_clamped():
    (s,) = normalize_3d(to_value(["Sphere", [0, 0, 0], 1, [5 / 3, 2.9, -0.5], [0, 0, 0]]))
    assert s.color == (5 / 3, 2.9, -0.5)


def test_every_corpus_shape_normalizes(corpus):
    for entry in corpus:
        store = instantiate(entry.model(), entry.root, entry.args)
        plan_continuous(store).evaluate()
        extract_scene(store)


def test_empty_model_frames():
    buf = io.StringIO()
    run = run_source("class c () end", end_time=0.05)
    emit_scene(run.scenes, buf)
    rows = [json.loads(x) for x in buf.getvalue().splitlines()]
    assert len(rows) == len(run.frames) and all(r["shapes"] == [] for r in rows)


def test_jsonl_keys():
    buf = io.StringIO()
    SceneWriter(buf)(SceneFrame(0.5, (ShapeRecord("Cylinder", (0, 0, 0), (1, 2), (1, 1, 1), (0, 0, 0)),)))
    row = json.loads(buf.getvalue())
    assert row == {"time": 0.5, "shapes": [{"kind": "Cylinder", "center": [0, 0, 0], "size": [1, 2],
                                            "color": [1, 1, 1], "orientation": [0, 0, 0]}]}


def test_bouncing_ball_scene_matches_trace():
    run = run_entry("bouncing_ball", end_time=2)
    assert len(run.scenes) == len(run.frames)
    for scene, frame in zip(run.scenes, run.frames):
        ball = scene.shapes[0]
        assert ball.kind == "Sphere"
        assert abs(ball.center[2] - frame["m.p"]) <= 1e-12


def test_rod_scene_is_dumbbell():
    run = run_entry("rod", end_time=0.5)
    for scene in run.scenes:
        assert sorted(s.kind for s in scene.shapes) == ["Cylinder", "Sphere", "Sphere"]


def test_traversal_order_is_depth_first():
    run = run_entry("example_3", end_time=0.05)
    # m1, m2, m3 each draw a sphere; springs draw nothing; the bar comes last
    assert [s.kind for s in run.scenes[0].shapes] == ["Sphere", "Sphere", "Sphere", "Cylinder"]
    zs = [s.center[2] for s in run.scenes[0].shapes[:3]]
    assert zs == [1.0, -1.0, -1.5]
