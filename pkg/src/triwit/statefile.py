"""JSON state files.

A state file looks like::

    {"kind": "density", "dims": [2, 2, 2], "data": [[[re, im], ...], ...], "meta": "..."}

``data`` holds an 8x8 row-major matrix for ``kind == "density"`` and 8
amplitudes for ``kind == "pure"``; each entry is a ``[re, im]`` pair in the
basis order 000, 001, ..., 111.  Floats are written with Python's shortest
round-trip repr, so reading a file back reproduces the numbers bit for bit.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np

from triwit.qcore import DEFAULT_TOL, InvalidInputError, NumericalError, Tolerances, check_density, check_pure, min_eigenvalue


@dataclass
class StateFile:
    kind: str
    data: np.ndarray
    meta: str = ""

    @property
    def is_pure(self) -> bool:
        return self.kind == "pure"

    def density(self) -> np.ndarray:
        if self.is_pure:
            return np.outer(self.data, self.data.conj())
        return self.data


def _encode(arr: np.ndarray) -> Any:
    if arr.ndim == 1:
        return [[float(z.real), float(z.imag)] for z in arr]
    return [_encode(row) for row in arr]


def _decode(obj: Any, shape: tuple[int, ...]) -> np.ndarray:
    try:
        arr = np.asarray(obj, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InvalidInputError(f"state data is not numeric: {exc}") from None
    if arr.shape != shape + (2,):
        raise InvalidInputError(f"state data has shape {arr.shape[:-1]}, expected {shape} of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def dumps_state(state: StateFile) -> str:
    doc = {"kind": state.kind, "dims": [2, 2, 2], "data": _encode(np.asarray(state.data)), "meta": state.meta}
    return json.dumps(doc) + "\n"


def loads_state(text: str, tol: Tolerances = DEFAULT_TOL) -> StateFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"state file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InvalidInputError("state file must hold a JSON object")
    kind = doc.get("kind")
    if doc.get("dims") != [2, 2, 2]:
        raise InvalidInputError("state file dims must be [2, 2, 2]")
    if kind == "density":
        data = check_density(_decode(doc.get("data"), (8, 8)), tol, psd=False)
        lam_min = min_eigenvalue(data)
        if lam_min < -tol.psd_tol:
            # well-formed but outside the positivity tolerance: a numerical failure, not a parse error
            raise NumericalError(f"density matrix is not positive semidefinite (min eigenvalue {lam_min:.3e})")
    elif kind == "pure":
        data = check_pure(_decode(doc.get("data"), (8,)), atol=1e-12)
    else:
        raise InvalidInputError(f"state file kind must be 'density' or 'pure', got {kind!r}")
    return StateFile(kind, data, str(doc.get("meta", "")))


def read_state(path: str | os.PathLike, tol: Tolerances = DEFAULT_TOL) -> StateFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInputError(f"cannot read {path}: {exc}") from None
    return loads_state(text, tol)


def dumps_decomposition(parts, claimed: str) -> str:
    doc = {
        "claimed": claimed,
        "components": [{"weight": float(w), "data": _encode(np.asarray(v, dtype=complex))} for w, v in parts],
    }
    return json.dumps(doc) + "\n"


def loads_decomposition(text: str) -> tuple[list[tuple[float, np.ndarray]], str]:
    try:
        doc = json.loads(text)
        claimed = doc["claimed"]
        parts = [(float(c["weight"]), _decode(c["data"], (8,))) for c in doc["components"]]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InvalidInputError(f"malformed decomposition file: {exc}") from None
    return parts, claimed


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temporary file in the target directory, then rename into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
