"""JSON exchange formats for matrices, observables, subspaces, zero sets and noise.

Matrices are ``{"dim": d, "re": [[...]], "im": [[...]]}`` with row-major
arrays. All writers emit sorted keys and a fixed float repr so output is
byte-stable for fixed input.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .exceptions import FormatError
from .observables import Observable, OperatorSubspace

__all__ = [
    "matrix_to_json",
    "matrix_from_json",
    "observable_to_json",
    "observable_from_json",
    "subspace_to_json",
    "subspace_from_json",
    "zero_set_to_json",
    "zero_set_from_json",
    "noise_to_json",
    "noise_from_json",
    "dumps",
    "load_file",
    "save_file",
    "detect_kind",
]


def _clean(x: float) -> float:
    # avoid "-0.0" so that output does not depend on the sign of rounding noise
    x = float(x)
    return 0.0 if x == 0 else x


def _rows(a: np.ndarray) -> list[list[float]]:
    return [[_clean(v) for v in row] for row in np.asarray(a, dtype=float)]


def _require(doc: Any, key: str, kind: str):
    if not isinstance(doc, dict) or key not in doc:
        raise FormatError(f"{kind}: missing field {key!r}")
    return doc[key]


def _dim(doc: Any, kind: str) -> int:
    d = _require(doc, "dim", kind)
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise FormatError(f"{kind}: 'dim' must be a positive integer")
    return d


def _real_array(rows: Any, shape: tuple[int, ...], what: str) -> np.ndarray:
    try:
        a = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{what}: not a numeric array") from exc
    if a.shape != shape:
        raise FormatError(f"{what}: expected shape {shape}, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise FormatError(f"{what}: non-finite entries")
    return a


def matrix_to_json(m) -> dict:
    m = np.asarray(m, dtype=complex)
    return {"dim": int(m.shape[0]), "re": _rows(m.real), "im": _rows(m.imag)}


def matrix_from_json(doc: Any, dim: int | None = None) -> np.ndarray:
    d = _dim(doc, "matrix")
    if dim is not None and d != dim:
        raise FormatError(f"matrix: dim {d} differs from enclosing dim {dim}")
    re = _real_array(_require(doc, "re", "matrix"), (d, d), "matrix 're'")
    im = _real_array(_require(doc, "im", "matrix"), (d, d), "matrix 'im'")
    return re + 1j * im


def observable_to_json(obs: Observable) -> dict:
    effects = []
    for label, e in zip(obs.labels, obs.effects):
        effects.append({"label": label, "re": _rows(e.real), "im": _rows(e.imag)})
    return {"dim": obs.dim, "effects": effects}


def observable_from_json(doc: Any) -> Observable:
    d = _dim(doc, "observable")
    items = _require(doc, "effects", "observable")
    if not isinstance(items, list) or not items:
        raise FormatError("observable: 'effects' must be a non-empty list")
    effects, labels = [], []
    for k, item in enumerate(items):
        if not isinstance(item, dict):
            raise FormatError(f"observable: effect {k} is not an object")
        labels.append(str(item.get("label", k)))
        effects.append(matrix_from_json({"dim": d, **item}))
    return Observable(d, np.array(effects), tuple(labels))


def subspace_to_json(x: OperatorSubspace) -> dict:
    doc = {"dim": x.dim_space, "basis": [matrix_to_json(b) for b in x.basis]}
    if x.provenance != "GENERIC":
        doc["provenance"] = x.provenance
    return doc


def subspace_from_json(doc: Any) -> OperatorSubspace:
    """Read a subspace file. A ``provenance`` tag in the file is ignored:
    certificates attach only to subspaces built in-process."""
    d = _dim(doc, "subspace")
    items = _require(doc, "basis", "subspace")
    if not isinstance(items, list):
        raise FormatError("subspace: 'basis' must be a list")
    basis = np.array([matrix_from_json(b, d) for b in items]).reshape(-1, d, d)
    return OperatorSubspace(d, basis)


def zero_set_to_json(z) -> dict:
    return {"dim": z.dim, "points": [[x, xi] for x, xi in z.sorted()]}


def zero_set_from_json(doc: Any):
    from .weyl import ZeroSet

    d = _dim(doc, "zero set")
    pts = _require(doc, "points", "zero set")
    if not isinstance(pts, list) or any(not isinstance(p, list) or len(p) != 2 for p in pts):
        raise FormatError("zero set: 'points' must be a list of [x, xi] pairs")
    if any(isinstance(v, bool) or not isinstance(v, int) for p in pts for v in p):
        raise FormatError("zero set: coordinates must be integers")
    return ZeroSet(d, [tuple(p) for p in pts])


def noise_to_json(mu) -> dict:
    return {"dim": mu.dim, "weights": _rows(mu.weights)}


def noise_from_json(doc: Any):
    from .weyl import NoiseMeasure

    d = _dim(doc, "noise")
    w = _real_array(_require(doc, "weights", "noise"), (d, d), "noise 'weights'")
    return NoiseMeasure(d, w)


def dumps(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True) + "\n"


def load_file(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def save_file(path: str | Path, doc: Any) -> None:
    try:
        Path(path).write_text(dumps(doc))
    except OSError as exc:
        raise FormatError(f"cannot write {path}: {exc.strerror}") from exc


def detect_kind(doc: Any) -> str:
    """Name of the format a parsed document is in: observable, subspace, matrix,
    zero_set or noise."""
    if isinstance(doc, dict):
        for key, kind in (("effects", "observable"), ("basis", "subspace"),
                          ("re", "matrix"), ("points", "zero_set"), ("weights", "noise")):
            if key in doc:
                return kind
    raise FormatError("unrecognized document")
