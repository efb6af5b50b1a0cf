"""Local product structure near a matrix with a spectral gap.

Near ``X0`` with a gap at ``c``, a Hermitian ``X`` is encoded by the point
``Im P_X`` of the Grassmannian (as an orthonormal frame) together with the
compressions of ``X`` to that subspace and to its complement.

Frames are fixed against a reference frame ``xi``: the basis ``f`` of
``Im P_X`` is the unique orthonormal one for which the projection of
``f_1..f_j`` onto ``span(xi)`` spans ``xi_1..xi_j`` for every ``j``, i.e.
``xi* f`` is upper triangular with positive diagonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .exceptions import TransversalityLost, ValidationError
from .hermitian import hermitize
from .riesz import DEFAULT_NODES, contour_for_gap, projector_frame, projector_rank, spectral_projector

TRANSVERSALITY_TOL = 1e-6


@dataclass(frozen=True)
class BundleChart:
    frame_k: np.ndarray
    frame_comp: np.ndarray
    L: np.ndarray
    R: np.ndarray

    @property
    def k(self) -> int:
        return self.frame_k.shape[1]

    @property
    def n(self) -> int:
        return self.frame_k.shape[0]


def complement_frame(frame: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the orthogonal complement of ``span(frame)``."""
    n, k = frame.shape
    q, _ = np.linalg.qr(np.hstack([frame, np.eye(n)]), mode="complete")
    comp = q[:, k:n]
    return comp


def fix_frame(basis: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Re-base ``basis`` so that ``reference* basis`` is upper triangular, positive diagonal.

    With ``G = reference* basis`` and the RQ factorization ``G = T Q``, the
    frame ``basis Q*`` gives ``reference* (basis Q*) = T``.
    """
    k = basis.shape[1]
    if reference.shape[1] != k:
        raise TransversalityLost(f"subspace of dimension {k} cannot project onto a "
                                 f"{reference.shape[1]}-dimensional reference")
    if k == 0:
        return basis.copy()
    G = reference.conj().T @ basis
    smin = float(np.linalg.svd(G, compute_uv=False).min())
    if smin < TRANSVERSALITY_TOL:
        raise TransversalityLost(f"cross-Gram singular value {smin:.2e} < {TRANSVERSALITY_TOL:.0e}")
    T, Q = scipy.linalg.rq(G)
    phase = np.diagonal(T) / np.abs(np.diagonal(T))
    # T = T' D with D = diag(phase): G = T' (D Q)
    M = (phase[:, None] * Q).conj().T
    return basis @ M


def phi(X, c: float, reference, nodes: int = DEFAULT_NODES) -> BundleChart:
    """Chart ``X -> (frame of Im P_X, P_X X on it, (I-P_X) X on the complement)``."""
    X = np.asarray(X, dtype=complex)
    reference = np.asarray(reference, dtype=complex)
    if reference.ndim == 1:
        reference = reference[:, None]
    n = X.shape[0]
    if reference.shape[0] != n:
        raise ValidationError("reference frame has the wrong length")
    gram = reference.conj().T @ reference
    if not np.allclose(gram, np.eye(reference.shape[1]), atol=1e-10):
        raise ValidationError("reference frame is not orthonormal")
    P = spectral_projector(X, contour_for_gap(X, c, nodes))
    k = projector_rank(P)
    frame_k = fix_frame(projector_frame(P, k), reference)
    frame_comp = fix_frame(projector_frame(np.eye(n) - P, n - k), complement_frame(reference))
    L = hermitize(frame_k.conj().T @ X @ frame_k)
    R = hermitize(frame_comp.conj().T @ X @ frame_comp)
    return BundleChart(frame_k, frame_comp, L, R)


def reconstruct(chart: BundleChart) -> np.ndarray:
    """Inverse of :func:`phi`: ``F L F* + F' R F'*``."""
    F, G = chart.frame_k, chart.frame_comp
    return hermitize(F @ chart.L @ F.conj().T + G @ chart.R @ G.conj().T)
