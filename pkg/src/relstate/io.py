"""JSON state files and CSV sweep output.

A state file looks like::

    {"schemaVersion": 1, "kind": "pure", "dimA": 2, "dimB": 2,
     "data": [[0.7071067811865476, 0.0], [0.0, 0.0], [0.0, 0.0], [0.7071067811865476, 0.0]],
     "metadata": {}}

``data`` is row-major: amplitudes ``alpha_ij`` for pure states, the full
``(dimA dimB)**2`` matrix for densities.  Floats are written with Python's
shortest round-trip repr, so reading a file back is bit-exact.

A measurement-basis file has ``"kind": "measurement-basis"``, ``"dim"`` and
``"vectors"``: one list of ``[re, im]`` pairs per basis vector.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Union

import numpy as np

from .discord import MeasurementBasis
from .errors import DimensionError, ValidationError
from .operators import DensityOperator, PureBipartiteState

SCHEMA_VERSION = 1
PathLike = Union[str, Path]


def _pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).ravel()]


def _complex(data, n: int, what: str) -> np.ndarray:
    try:
        arr = np.array(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{what}: data is a list of [re, im] number pairs") from exc
    if arr.shape != (n, 2):
        raise ValidationError(f"{what}: data holds {n} [re, im] pairs (got shape {arr.shape})")
    return arr[:, 0] + 1j * arr[:, 1]


def state_to_dict(state, metadata: dict | None = None) -> dict:
    if isinstance(state, PureBipartiteState):
        kind, (da, db), data = "pure", state.dims, state.amplitudes
    elif isinstance(state, DensityOperator):
        kind, (da, db), data = "density", state.require_dims(), state.matrix
    else:
        raise TypeError(f"cannot serialize {type(state).__name__}")
    return {"schemaVersion": SCHEMA_VERSION, "kind": kind, "dimA": int(da), "dimB": int(db),
            "data": _pairs(data), "metadata": dict(metadata or {})}


def state_from_dict(obj: dict):
    if not isinstance(obj, dict):
        raise ValidationError("StateFile: top-level value is an object")
    if obj.get("schemaVersion") != SCHEMA_VERSION:
        raise ValidationError(f"StateFile: schemaVersion == {SCHEMA_VERSION}")
    kind = obj.get("kind")
    try:
        da, db = int(obj["dimA"]), int(obj["dimB"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError("StateFile: dimA, dimB positive integers") from exc
    if da < 1 or db < 1:
        raise ValidationError("StateFile: dimA, dimB positive integers")
    if kind == "pure":
        vec = _complex(obj.get("data"), da * db, "StateFile")
        return PureBipartiteState(vec.reshape(da, db))
    if kind == "density":
        n = da * db
        mat = _complex(obj.get("data"), n * n, "StateFile").reshape(n, n)
        return DensityOperator(mat, dims=(da, db))
    raise ValidationError("StateFile: kind in {pure, density}")


def write_state(path: PathLike, state, metadata: dict | None = None) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state, metadata), indent=1) + "\n")


def read_state(path: PathLike):
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"StateFile: valid JSON ({exc})") from exc
    return state_from_dict(obj)


def basis_to_dict(basis: MeasurementBasis) -> dict:
    return {"schemaVersion": SCHEMA_VERSION, "kind": "measurement-basis", "dim": basis.dim,
            "vectors": [_pairs(basis.vectors[:, i]) for i in range(basis.dim)]}


def write_basis(path: PathLike, basis: MeasurementBasis) -> None:
    Path(path).write_text(json.dumps(basis_to_dict(basis), indent=1) + "\n")


def read_basis(path: PathLike) -> MeasurementBasis:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"basis file: valid JSON ({exc})") from exc
    if obj.get("kind") != "measurement-basis":
        raise ValidationError("basis file: kind == measurement-basis")
    d = int(obj.get("dim", 0))
    vecs = obj.get("vectors")
    if d < 1 or not isinstance(vecs, list) or len(vecs) != d:
        raise DimensionError("basis file: dim vectors of length dim")
    cols = [_complex(v, d, "basis file") for v in vecs]
    return MeasurementBasis(np.array(cols).T)


def sweep_to_csv(sweep) -> str:
    """CSV text with columns ``p`` then, per k, numeric, closed form and difference."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["p"]
    for k in sweep.ks:
        header += [f"upsilon_{k}_numeric", f"upsilon_{k}_closed", f"diff_{k}"]
    w.writerow(header)
    for p, row in zip(sweep.grid, sweep.results):
        line = [repr(p)]
        for k in sweep.ks:
            num, closed = row[k]
            line += [repr(float(num)), repr(float(closed)), repr(abs(float(num) - float(closed)))]
        w.writerow(line)
    return buf.getvalue()
