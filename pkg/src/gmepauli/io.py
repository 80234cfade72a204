"""State files and CSV output.

A state file is JSON of the form::

    {
      "dims": [2, 2, 2],
      "matrix": [
        [[re, im], [re, im], ...],
        ...
      ],
      "metadata": {"name": "...", "source": "..."}
    }

``metadata`` is optional. :func:`dumps_state` writes the canonical layout
(one matrix row per line, 17 significant digits), so parsing and re-writing a
canonical file reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .states import DensityMatrix, ValidationReport, validate

__all__ = [
    "StateFileError",
    "InvalidStateError",
    "StateFile",
    "dumps_state",
    "loads_state",
    "read_state",
    "write_state",
    "write_csv",
]


class StateFileError(ValueError):
    """The file is not a well-formed state file."""


class InvalidStateError(ValueError):
    """The file parsed, but the matrix is not a valid density matrix."""

    def __init__(self, report: ValidationReport):
        super().__init__(report.describe())
        self.report = report


@dataclass(frozen=True, eq=False)
class StateFile:
    state: DensityMatrix
    metadata: dict = field(default_factory=dict)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.state.dims


def _num(value: float) -> str:
    if not math.isfinite(value):
        raise ValueError(f"cannot serialize non-finite value {value!r}")
    # adding 0.0 turns -0.0 into 0.0, which keeps the canonical form unique
    return "%.17g" % (value + 0.0)


def dumps_state(state: DensityMatrix, metadata: Mapping | None = None) -> str:
    lines = ["{", f'  "dims": {json.dumps(list(state.dims))},', '  "matrix": [']
    mat = state.matrix
    last = mat.shape[0] - 1
    for r, row in enumerate(mat):
        cells = ", ".join(f"[{_num(z.real)}, {_num(z.imag)}]" for z in row)
        lines.append(f"    [{cells}]" + ("," if r < last else ""))
    if metadata:
        lines.append("  ],")
        lines.append(f'  "metadata": {json.dumps(dict(metadata), sort_keys=True)}')
    else:
        lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _as_real(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StateFileError(f"{where}: expected a number, got {value!r}")
    return float(value)


def loads_state(text: str, check: bool = True) -> StateFile:
    """Parse a state file; with ``check`` the matrix must pass :func:`validate`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise StateFileError("top level must be an object")
    unknown = set(doc) - {"dims", "matrix", "metadata"}
    if unknown:
        raise StateFileError(f"unexpected keys: {sorted(unknown)}")
    dims = doc.get("dims")
    if (
        not isinstance(dims, list)
        or not dims
        or not all(isinstance(d, int) and not isinstance(d, bool) and d >= 2 for d in dims)
    ):
        raise StateFileError(f"'dims' must be a nonempty list of integers >= 2, got {dims!r}")
    size = math.prod(dims)
    rows = doc.get("matrix")
    if not isinstance(rows, list) or len(rows) != size:
        raise StateFileError(f"'matrix' must have {size} rows for dims {dims}")
    mat = np.empty((size, size), dtype=complex)
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != size:
            raise StateFileError(f"matrix row {r} must have {size} entries")
        for c, cell in enumerate(row):
            if not isinstance(cell, list) or len(cell) != 2:
                raise StateFileError(f"entry ({r}, {c}) must be a [re, im] pair, got {cell!r}")
            mat[r, c] = complex(_as_real(cell[0], f"entry ({r}, {c})"), _as_real(cell[1], f"entry ({r}, {c})"))
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise StateFileError("'metadata' must be an object")
    state = DensityMatrix(mat, tuple(dims))
    if check:
        report = validate(state)
        if not report.ok:
            raise InvalidStateError(report)
    return StateFile(state, metadata)


def read_state(path, check: bool = True) -> StateFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc}") from exc
    return loads_state(text, check=check)


def write_state(path, state: DensityMatrix, metadata: Mapping | None = None):
    Path(path).write_text(dumps_state(state, metadata), encoding="utf-8")


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(rows: Sequence[Mapping], columns: Iterable[str], out=None) -> str:
    """Write ``rows`` as CSV with a header; returns the text and writes to ``out`` if given."""
    columns = list(columns)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(col)) for col in columns])
    text = buf.getvalue()
    if out is not None:
        if hasattr(out, "write"):
            out.write(text)
        else:
            Path(out).write_text(text, encoding="utf-8")
    return text
