import csv
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import numpy as np

from core.config import CSV_FLOAT_FORMAT
from core.exceptions import ParseError

Cell = Union[float, int, str, None]


def format_cell(value: Cell) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "" if not np.isfinite(value) else format(float(value), CSV_FLOAT_FORMAT)
    return str(value)


def render_rows(header: Sequence[str], rows: Iterable[Sequence[Cell]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(format_cell(c) for c in row) for row in rows)
    return "\n".join(lines) + "\n"


def write_rows(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Cell]]) -> None:
    Path(path).write_text(render_rows(header, rows), encoding="utf-8")


def read_points(path: Union[str, Path]) -> np.ndarray:
    """x,y,z per row; a non-numeric first row is taken as a header."""
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows: List[List[str]] = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise ParseError(f"Cannot read points file {path}: {exc.strerror}") from exc

    points = []
    for n, row in enumerate(rows):
        try:
            xyz = [float(c) for c in row[:3]]
        except ValueError:
            if n == 0:
                continue
            raise ParseError(f"{path}: row {n + 1} is not numeric: {row}")
        if len(xyz) != 3:
            raise ParseError(f"{path}: row {n + 1} needs 3 columns, got {len(row)}")
        points.append(xyz)
    return np.array(points, dtype=float).reshape(-1, 3)
