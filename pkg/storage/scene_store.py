import json
from pathlib import Path
from typing import List, Union

from loguru import logger
from pydantic import ValidationError

from core.exceptions import DegenerateInput, ParseError, SchemaError
from core.vector import rotation_matrix
from schemas.enum import Severity
from schemas.scene_schema import CircleLoopSpec, LoopSpec, PolylineLoopSpec, RectangleLoopSpec, SceneSpec
from schemas.schemas import BoundaryLoop, BoundarySet
from services.boundary_service import (
    build_boundary_set,
    make_circle,
    make_rectangle,
    resample_loop,
    transform_set,
    validate,
)


def _expand(spec: LoopSpec, index: int) -> BoundaryLoop:
    label = spec.label or f"loop{index}"
    try:
        if isinstance(spec, CircleLoopSpec):
            loop = make_circle(spec.center, spec.normal, spec.radius, spec.segments, spec.current, label)
        elif isinstance(spec, RectangleLoopSpec):
            loop = make_rectangle(spec.center, spec.u_axis, spec.v_axis, spec.width, spec.height,
                                  spec.segments_per_side, spec.current, label)
        else:
            loop = BoundaryLoop(spec.vertices, spec.current, label)
        if spec.resample is not None:
            loop = resample_loop(loop, spec.resample)
    except DegenerateInput as exc:
        raise DegenerateInput(f"Loop {index} ('{label}'): {exc.detail}") from exc
    return loop


def _schema_message(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        loc = err.get("loc", ())
        where = f"loop {loc[1]}" if len(loc) > 1 and loc[0] == "loops" else ".".join(str(p) for p in loc) or "scene"
        lines.append(f"{where}: {err.get('msg')}")
    return "; ".join(lines)


def parse_scene(data: Union[bytes, str]) -> BoundarySet:
    """Scene JSON -> BoundarySet, with primitives expanded to polylines."""
    try:
        text = data.decode("utf-8") if isinstance(data, bytes) else data
        payload = json.loads(text)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"Scene is not valid UTF-8 JSON: {exc}") from exc

    try:
        spec = SceneSpec.model_validate(payload)
    except ValidationError as exc:
        raise SchemaError(f"Invalid scene: {_schema_message(exc)}") from exc

    loops: List[BoundaryLoop] = [_expand(loop, k) for k, loop in enumerate(spec.loops)]
    labels = [loop.label for loop in loops]
    if len(set(labels)) != len(labels):
        raise SchemaError(f"Loop labels must be unique, got {labels}")

    boundary = build_boundary_set(loops)
    if spec.transform is not None:
        t = spec.transform
        boundary = transform_set(boundary, rotation_matrix(t.rotation_axis, t.rotation_deg), t.translation)

    for diag in validate(boundary):
        if diag.severity == Severity.ERROR:
            raise DegenerateInput(f"Loop {diag.loop_index} ('{boundary.loops[diag.loop_index].label}'): {diag.message}")
        logger.warning(diag.message)

    logger.info(f"Loaded scene with {len(boundary.loops)} loop(s), {boundary.vertex_count} vertices, diagonal {boundary.diagonal:.6g}")
    return boundary


def load_scene(path: Union[str, Path]) -> BoundarySet:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        logger.error(f"Cannot read scene {path}")
        raise ParseError(f"Cannot read scene file {path}: {exc.strerror}") from exc
    return parse_scene(data)
