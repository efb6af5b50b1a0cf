"""File formats: matrix JSON, trajectory CSV."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .exceptions import IoError, ParseError
from .hermitian import make_hermitian

DEFAULT_TOL = 1e-10


def matrix_from_obj(obj, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Build a Hermitian matrix from ``{"n": n, "re": [[...]], "im": [[...]]}``."""
    if not isinstance(obj, dict) or "n" not in obj or "re" not in obj:
        raise ParseError('matrix JSON needs fields "n" and "re"')
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError('"n" must be a positive integer')
    try:
        re = np.array(obj["re"], dtype=float)
        im = np.array(obj["im"], dtype=float) if obj.get("im") is not None else np.zeros((n, n))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"matrix entries must be numbers: {exc}") from exc
    if re.shape != (n, n) or im.shape != (n, n):
        raise ParseError(f'"re"/"im" must be {n}x{n} arrays')
    return make_hermitian(re + 1j * im, tol)


def matrix_to_obj(X) -> dict:
    X = np.asarray(X, dtype=complex)
    obj = {"n": int(X.shape[0]), "re": X.real.tolist()}
    if np.any(X.imag != 0):
        obj["im"] = X.imag.tolist()
    return obj


def parse_matrix_json(text: str, tol: float = DEFAULT_TOL) -> np.ndarray:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    return matrix_from_obj(obj, tol)


def read_matrix_json(path, tol: float = DEFAULT_TOL) -> np.ndarray:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_matrix_json(text, tol)


def write_json(obj, path) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            json.dump(obj, fh, indent=1, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def trajectory_header(n: int) -> list[str]:
    return ["t", *(f"f{i}" for i in range(1, n + 1)), "angle_max_deg", "overlap_min"]


def write_trajectory_csv(path, ts, values, angle_max_deg, overlap_min, n: int | None = None) -> None:
    """One row per sample.

    ``t`` and ``f*`` are written with ``repr`` (they parse back to the same
    floats), the angle with 12 significant digits.
    """
    values = np.asarray(values, dtype=float)
    if n is None:
        n = values.shape[1] if values.ndim == 2 and values.size else 0
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(trajectory_header(n))
            for t, f, ang, ov in zip(ts, values, angle_max_deg, overlap_min):
                w.writerow([repr(float(t)), *(repr(float(x)) for x in f),
                            format(float(ang), ".12g"), repr(float(ov))])
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def write_report_csv(report, path) -> None:
    write_trajectory_csv(path, report.ts, report.values, np.degrees(report.angle_max),
                         report.overlap_min, n=report.values.shape[1])


def read_trajectory_csv(path) -> dict:
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    cols = {name: np.array([float(r[i]) for r in body]) for i, name in enumerate(header)}
    return {"header": header, "columns": cols}
