"""Input checks shared by the estimator wrappers and the CLI."""

from __future__ import annotations

import numpy as np

from .exceptions import ValidationError
from .hermitian import HERMITIAN_TOL, make_hermitian
from .paths import MatrixPath


def check_hermitian(X, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Accept any array-like square matrix and return it validated as Hermitian."""
    return make_hermitian(X, tol)


def check_cut(values, cut: float, tol: float = 1e-12) -> float:
    cut = float(cut)
    if np.any(np.abs(np.asarray(values) - cut) <= tol):
        raise ValidationError(f"cut {cut} coincides with an eigenvalue")
    return cut


def check_path(path, tol: float = HERMITIAN_TOL) -> MatrixPath:
    """A :class:`MatrixPath`, or an ``(N, n, n)`` stack sampled uniformly on [0, 1]."""
    if isinstance(path, MatrixPath):
        return path
    mats = np.asarray(path, dtype=complex)
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2] or mats.shape[0] < 2:
        raise ValidationError("expected a MatrixPath or an (N, n, n) array with N >= 2")
    mats = np.array([make_hermitian(m, tol) for m in mats])
    return MatrixPath(np.linspace(0.0, 1.0, len(mats)), mats)
