import json
from pathlib import Path

import numpy as np
import pytest

from core.exceptions import DegenerateInput, ParseError, SchemaError
from storage.scene_store import load_scene, parse_scene

SCENES = sorted((Path(__file__).resolve().parent.parent / "scenes").glob("*.json"))


def _scene(*loops, **extra):
    return json.dumps({"loops": list(loops), **extra})


def test_circle_primitive_expands_to_a_polygon():
    boundary = parse_scene(_scene({"type": "circle", "radius": 2.0, "segments": 32, "current": 1.0}))
    assert len(boundary.loops) == 1
    loop = boundary.loops[0]
    assert len(loop) == 32
    assert loop.label == "loop0"
    np.testing.assert_allclose(np.linalg.norm(loop.vertices, axis=1), 2.0)


def test_missing_current_defaults_to_one():
    boundary = parse_scene(_scene({"type": "rectangle", "width": 1.0, "height": 2.0, "label": "r"}))
    assert boundary.loops[0].current == 1.0


def test_polyline_resample():
    square = [[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]]
    boundary = parse_scene(_scene({"type": "polyline", "vertices": square, "current": 1.0, "resample": 0.25}))
    assert len(boundary.loops[0]) == 16


def test_transform_is_applied():
    boundary = parse_scene(_scene(
        {"type": "circle", "center": [1, 0, 0], "radius": 0.5, "current": 1.0},
        transform={"rotation_axis": [0, 0, 1], "rotation_deg": 90.0, "translation": [0, 0, 3]},
    ))
    np.testing.assert_allclose(boundary.center, [0.0, 1.0, 3.0], atol=1e-12)


def test_bytes_input_is_accepted():
    boundary = parse_scene(_scene({"type": "circle", "radius": 1.0, "current": 0.5}).encode("utf-8"))
    assert boundary.loops[0].current == 0.5


@pytest.mark.parametrize("text", ["{not json", b"\xff\xfe\x00"])
def test_malformed_input_is_a_parse_error(text):
    with pytest.raises(ParseError):
        parse_scene(text)


@pytest.mark.parametrize("payload", [
    {"loops": []},
    {"loops": [{"type": "circle", "current": 1.0}]},
    {"loops": [{"type": "circle", "radius": 1.0, "colour": "red"}]},
    {"loops": [{"type": "spiral", "radius": 1.0}]},
    {"loops": [{"type": "circle", "radius": 1.0, "resample": -1.0}]},
    {"loops": [{"type": "circle", "radius": 1.0, "label": "a"}, {"type": "circle", "radius": 2.0, "label": "a"}]},
])
def test_schema_violations(payload):
    with pytest.raises(SchemaError):
        parse_scene(json.dumps(payload))


def test_degenerate_geometry_is_rejected():
    with pytest.raises(DegenerateInput):
        parse_scene(_scene({"type": "polyline", "vertices": [[0, 0, 0], [1, 0, 0]], "current": 1.0}))
    with pytest.raises(DegenerateInput):
        parse_scene(_scene({"type": "polyline", "vertices": [[0, 0, 0], [1, 0, 0], [1, 0, 0], [0, 1, 0]]}))
    with pytest.raises(DegenerateInput):
        parse_scene(_scene({"type": "circle", "radius": -1.0}))


def test_missing_file_is_a_parse_error(tmp_path):
    with pytest.raises(ParseError):
        load_scene(tmp_path / "absent.json")


def test_load_scene_from_disk(write_scene):
    path = write_scene({"loops": [{"type": "circle", "radius": 1.0, "segments": 16, "label": "c"}]})
    assert load_scene(path).loops[0].label == "c"


@pytest.mark.parametrize("path", SCENES, ids=lambda p: p.stem)
def test_bundled_scenes_load(path):
    boundary = load_scene(path)
    assert boundary.vertex_count >= 3
    assert boundary.diagonal > 0
