import json

import numpy as np
import pytest

from services.boundary_service import build_boundary_set, make_circle, make_rectangle


@pytest.fixture
def unit_circle():
    return make_circle((0, 0, 0), (0, 0, 1), 1.0, 256)


@pytest.fixture
def circle_set(unit_circle):
    return build_boundary_set([unit_circle])


@pytest.fixture
def square_set():
    return build_boundary_set([make_rectangle((0, 0, 0), (1, 0, 0), (0, 1, 0), 2.0, 2.0, 4, label="square")])


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def write_scene(tmp_path):
    def _write(payload, name: str = "scene.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path
    return _write


@pytest.fixture
def circle_scene_file(write_scene):
    return write_scene({"loops": [{"type": "circle", "radius": 1.0, "segments": 64, "current": 1.0, "label": "c"}]})
