"""scikit-learn style wrappers around the spectral operations.

``fit`` takes a Hermitian matrix (or a path, for the tracker) and stores the
derived data in trailing-underscore attributes; ``transform`` applies the
fitted cut or bracket to another matrix.  ``get_params``/``set_params`` and
``clone`` work as for any estimator.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .blowup2 import resolve_local
from .exceptions import ValidationError
from .hermitian import eigvalsh
from .isotropy import isotropy_index
from .paths import track_cluster, track_eigenlines
from .riesz import (
    DEFAULT_NODES,
    DEFAULT_REL_TOL,
    contour_for_gap,
    detect_gaps,
    multi_split,
    spectral_projector,
    split_from_projector,
)
from .validation import check_cut, check_hermitian, check_path


class RieszSplitter(TransformerMixin, BaseEstimator):
    """Split ``X = L + R`` at a spectral gap.

    Parameters
    ----------
    cut : float or None
        Gap location.  ``None`` uses the midpoint of the widest gap found by
        :func:`eigres.riesz.detect_gaps` at fit time.
    nodes : int
        Quadrature nodes on the contour.
    rel_tol : float
        Clustering tolerance used when ``cut`` is None.
    tol : float
        Hermitian validation tolerance.
    """

    def __init__(self, cut=None, nodes=DEFAULT_NODES, rel_tol=DEFAULT_REL_TOL, tol=1e-10):
        self.cut = cut
        self.nodes = nodes
        self.rel_tol = rel_tol
        self.tol = tol

    def fit(self, X, y=None):
        X = check_hermitian(X, self.tol)
        values = eigvalsh(X)
        if self.cut is None:
            part = detect_gaps(values, self.rel_tol)
            if not part.cuts:
                raise ValidationError("spectrum has no gap to split at")
            self.cut_ = part.cuts[int(np.argmax(part.gap_widths))]
        else:
            self.cut_ = check_cut(values, self.cut)
        self.contour_ = contour_for_gap(values, self.cut_, self.nodes)
        split = split_from_projector(X, spectral_projector(X, self.contour_), self.contour_)
        self.projector_ = split.projector
        self.rank_ = split.k
        self.frame_ = split.frame
        self.L_ = split.L
        self.R_ = split.R
        self.n_features_in_ = X.shape[0]
        return self

    def transform(self, X):
        """Return the stacked blocks ``[L, R]`` of ``X`` at the fitted cut."""
        check_is_fitted(self, "cut_")
        X = check_hermitian(X, self.tol)
        contour = contour_for_gap(X, self.cut_, self.nodes)
        split = split_from_projector(X, spectral_projector(X, contour), contour)
        return np.stack([split.L, split.R])

    def inverse_transform(self, blocks):
        return np.asarray(blocks).sum(axis=0)


class ClusterDecomposer(TransformerMixin, BaseEstimator):
    """Commuting block decomposition, one block per eigenvalue cluster."""

    def __init__(self, nodes=DEFAULT_NODES, rel_tol=DEFAULT_REL_TOL, tol=1e-10):
        self.nodes = nodes
        self.rel_tol = rel_tol
        self.tol = tol

    def fit(self, X, y=None):
        X = check_hermitian(X, self.tol)
        values = eigvalsh(X)
        self.partition_ = detect_gaps(values, self.rel_tol)
        self.isotropy_index_ = isotropy_index(values, self.rel_tol)
        self.blocks_, self.frames_ = multi_split(X, self.partition_, self.nodes)
        self.n_features_in_ = X.shape[0]
        return self

    def transform(self, X):
        """Blocks of ``X`` at the fitted cuts, shape ``(m, n, n)``."""
        check_is_fitted(self, "partition_")
        X = check_hermitian(X, self.tol)
        blocks, _ = multi_split(X, self.partition_, self.nodes)
        return np.stack(blocks)

    def inverse_transform(self, blocks):
        return np.asarray(blocks).sum(axis=0)


class LocalResolver(TransformerMixin, BaseEstimator):
    """Radially lifted eigenvalue pair of a two-eigenvalue cluster."""

    def __init__(self, bracket=(0.0, 1.0), nodes=DEFAULT_NODES, tol=1e-10):
        self.bracket = bracket
        self.nodes = nodes
        self.tol = tol

    def fit(self, X, y=None):
        X = check_hermitian(X, self.tol)
        self.resolution_ = resolve_local(X, self.bracket, self.nodes)
        self.n_features_in_ = X.shape[0]
        return self

    def transform(self, X):
        """``(mu - r, mu + r)`` for ``X``; a stack of matrices gives one row each."""
        check_is_fitted(self, "resolution_")
        X = np.asarray(X)
        mats = X[None] if X.ndim == 2 else X
        return np.array([resolve_local(check_hermitian(m, self.tol), self.bracket,
                                       self.nodes).lifted_values for m in mats])


class EigenbundleTracker(BaseEstimator):
    """Monodromy of eigenlines (``cut=None``) or of the cluster below ``cut``."""

    def __init__(self, cut=None, nodes=DEFAULT_NODES):
        self.cut = cut
        self.nodes = nodes

    def fit(self, path, y=None):
        path = check_path(path)
        if self.cut is None:
            self.report_ = track_eigenlines(path)
        else:
            self.report_ = track_cluster(path, float(self.cut), self.nodes)
        return self

    def predict(self, path=None):
        """Whether the tracked object comes back swapped."""
        if path is not None:
            self.fit(path)
        check_is_fitted(self, "report_")
        return bool(self.report_.swap_detected)
