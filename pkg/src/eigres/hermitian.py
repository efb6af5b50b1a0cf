"""Dense Hermitian matrices: validation, trace splitting, eigensolver, ensembles.

Matrices are plain ``numpy`` arrays of dtype ``complex128``.  Functions that
return a "Hermitian matrix" guarantee exact conjugate symmetry and an exactly
real diagonal.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .exceptions import ConvergenceFailure, NonFinite, NotHermitian, ValidationError, WrongDimension

HERMITIAN_TOL = 1e-12
RESIDUAL_TOL = 1e-10


class TraceSplit(NamedTuple):
    traceless: np.ndarray
    mean: float

    def reconstruct(self) -> np.ndarray:
        n = self.traceless.shape[0]
        return self.traceless + self.mean * np.eye(n)


class EigenDecomposition(NamedTuple):
    """Ascending eigenvalues and matching orthonormal eigenvectors (columns)."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.vectors
        return hermitize((v * self.values) @ v.conj().T)


def hermitize(a: np.ndarray) -> np.ndarray:
    """Return ``(a + a*) / 2`` with the diagonal forced real."""
    h = 0.5 * (a + a.conj().T)
    np.fill_diagonal(h, h.diagonal().real)
    return h


def make_hermitian(raw, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Validate ``raw`` as a member of S(n) and return its symmetrized copy.

    Raises
    ------
    NotHermitian
        If ``max |raw - raw*|`` exceeds ``tol`` or ``raw`` is not square.
    NonFinite
        If any entry is NaN or infinite.
    """
    if tol <= 0:
        raise ValidationError("tol must be positive")
    a = np.asarray(raw, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise WrongDimension(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFinite("matrix has non-finite entries")
    dev = np.max(np.abs(a - a.conj().T))
    if dev > tol:
        raise NotHermitian(f"max |X - X*| = {dev:.3e} exceeds tol {tol:.1e}")
    return hermitize(a)


def check_square(X, n: int | None = None) -> np.ndarray:
    a = np.asarray(X, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise WrongDimension(f"expected a square matrix, got shape {a.shape}")
    if n is not None and a.shape[0] != n:
        raise WrongDimension(f"expected a {n}x{n} matrix, got {a.shape[0]}x{a.shape[0]}")
    return a


def trace_split(X: np.ndarray) -> TraceSplit:
    """Split ``X`` into its trace-free part and the eigenvalue shift tr(X)/n."""
    n = X.shape[0]
    mean = float(np.trace(X).real) / n
    traceless = X - mean * np.eye(n)
    np.fill_diagonal(traceless, traceless.diagonal().real)
    return TraceSplit(traceless, mean)


def from_parts(split: TraceSplit) -> np.ndarray:
    return split.reconstruct()


def fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first "large" component is real positive.

    A component counts as large when its magnitude exceeds ``1/(2 sqrt(n))``;
    a unit vector always has one.
    """
    v = np.array(vectors, dtype=complex, copy=True)
    n = v.shape[0]
    thresh = 0.5 / np.sqrt(n)
    for j in range(v.shape[1]):
        col = v[:, j]
        idx = np.flatnonzero(np.abs(col) > thresh)
        i = idx[0] if idx.size else int(np.argmax(np.abs(col)))
        z = col[i]
        if z != 0:
            v[:, j] = col * (abs(z) / z)
            v[i, j] = abs(z)
    return v


def eigendecompose(X: np.ndarray) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    Backed by LAPACK ``zheevd`` via :func:`numpy.linalg.eigh`; the residual
    contract ``||X v - lambda v|| <= 1e-10 (1 + ||X||_F)`` is checked on return.
    """
    X = np.asarray(X, dtype=complex)
    try:
        w, v = np.linalg.eigh(X)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = fix_phases(v[:, order])
    bound = RESIDUAL_TOL * (1.0 + np.linalg.norm(X))
    resid = np.linalg.norm(X @ v - v * w, axis=0)
    if not np.all(resid <= bound):
        raise ConvergenceFailure(f"eigen residual {resid.max():.3e} exceeds {bound:.3e}")
    return EigenDecomposition(w, v)


def eigvalsh(X: np.ndarray) -> np.ndarray:
    return np.linalg.eigvalsh(np.asarray(X, dtype=complex))


def random_hermitian(n: int, seed: int) -> np.ndarray:
    """GUE-style draw: ``A = (G1 + i G2)/sqrt(2)`` with iid standard normal
    ``G1, G2`` from ``numpy.random.default_rng(seed)``, returned as ``(A + A*)/2``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    a = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    return hermitize(a)


def random_unitary(n: int, seed: int) -> np.ndarray:
    """Haar unitary from the QR factorization of a complex Ginibre matrix.

    The usual diag(R) phase fix makes the draw Haar; columns are then rotated
    so their first nonzero entry is real positive (for ``n = 1`` this gives 1).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    for j in range(n):
        nz = np.flatnonzero(np.abs(q[:, j]) > 1e-14)
        z0 = q[nz[0], j]
        q[:, j] *= abs(z0) / z0
        q[nz[0], j] = abs(z0)
    return q


def conjugate(g: np.ndarray, X: np.ndarray) -> np.ndarray:
    """The conjugation action ``g X g*``."""
    return hermitize(g @ X @ g.conj().T)
