from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from core.config import CSV_FLOAT_FORMAT
from core.exceptions import ParseError
from schemas.schemas import SurfaceMesh


def _vertex_line(p: np.ndarray) -> str:
    return "v " + " ".join(format(float(c), CSV_FLOAT_FORMAT) for c in p)


def render_mesh(mesh: SurfaceMesh) -> str:
    lines = []
    if mesh.omega_c is not None:
        lines.append(f"# omega_c {format(float(mesh.omega_c), CSV_FLOAT_FORMAT)}")
    lines.extend(_vertex_line(p) for p in mesh.vertices)
    lines.extend(f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces)
    return "\n".join(lines) + "\n"


def render_polylines(groups: Sequence[Tuple[str, Sequence[np.ndarray]]]) -> str:
    lines: List[str] = []
    offset = 1
    for name, polylines in groups:
        lines.append(f"o {name}")
        for line in polylines:
            lines.extend(_vertex_line(p) for p in line)
            lines.append("l " + " ".join(str(offset + k) for k in range(len(line))))
            offset += len(line)
    return "\n".join(lines) + "\n"


def write_mesh(path: Union[str, Path], mesh: SurfaceMesh) -> None:
    Path(path).write_text(render_mesh(mesh), encoding="utf-8")


def write_polylines(path: Union[str, Path], groups: Sequence[Tuple[str, Sequence[np.ndarray]]]) -> None:
    Path(path).write_text(render_polylines(groups), encoding="utf-8")


def read_mesh(path: Union[str, Path]) -> SurfaceMesh:
    """Read `v` and triangular `f` records (1-based, `i/j/k` forms accepted)."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"Cannot read mesh {path}: {exc.strerror}") from exc

    vertices, faces = [], []
    omega_c: Optional[float] = None
    for n, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts:
            continue
        try:
            if parts[0] == "v":
                vertices.append([float(c) for c in parts[1:4]])
            elif parts[0] == "f":
                idx = [int(p.split("/")[0]) - 1 for p in parts[1:]]
                if len(idx) != 3:
                    raise ParseError(f"{path}:{n}: only triangles are supported")
                faces.append(idx)
            elif parts[:2] == ["#", "omega_c"]:
                omega_c = float(parts[2])
        except (ValueError, IndexError) as exc:
            raise ParseError(f"{path}:{n}: malformed record '{raw}'") from exc

    verts = np.array(vertices, dtype=float).reshape(-1, 3)
    tris = np.array(faces, dtype=np.int64).reshape(-1, 3)
    if len(tris) and (tris.min() < 0 or tris.max() >= len(verts)):
        raise ParseError(f"{path}: face index out of range")
    return SurfaceMesh(vertices=verts, faces=tris, seed_indices=np.arange(len(verts)), omega_c=omega_c)
