"""Spectral gaps, contour-integral (Riesz) projectors and commuting block splits.

The projector onto the eigenvalues enclosed by a closed curve ``Gamma`` is

    P = -1/(2 pi i) * contour_integral_Gamma (X - s I)^{-1} ds.

``Gamma`` is the circle whose diameter is the real segment ``[left, right]``.
The integral is discretized with the trapezoidal rule after a real Moebius
change of variable ``z = T(s)`` that maps ``Gamma`` onto the unit circle,
``left -> -1``, ``right -> +1`` and a chosen interior point to 0.  Every node
still costs one resolvent solve ``(s_j I - X)^{-1}`` with ``s_j`` on
``Gamma``.  Choosing the interior point at the centre of ``Gamma`` gives the
plain equal-angle rule; moving it towards the eigenvalue crowding the contour
spreads the nodes so that the error ``~ max |T(lambda)|^{+-N}`` is balanced
over the spectrum.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import minimize_scalar

from .exceptions import (
    ConvergenceFailure,
    EigenvalueOnCut,
    EmptyInput,
    SingularResolvent,
    ValidationError,
)
from .hermitian import eigvalsh, fix_phases, hermitize

DEFAULT_NODES = 64
DEFAULT_REL_TOL = 1e-6
CUT_TOL = 1e-12
RANK_TOL = 1e-6


@dataclass(frozen=True)
class ClusterPartition:
    cuts: tuple[float, ...]
    sizes: tuple[int, ...]
    gap_widths: tuple[float, ...]

    @property
    def m(self) -> int:
        return len(self.sizes)


@dataclass(frozen=True)
class ContourSpec:
    """Circle with diameter ``[left_real, right_real]`` plus its quadrature.

    ``focus`` is the normalized position (in ``(-1, 1)``, diameter mapped to
    ``[-1, 1]``) of the interior point sent to the disk centre; 0 means
    equally spaced angles.  ``margin`` is the smallest distance from the
    spectrum to the circle.
    """

    left_real: float
    right_real: float
    nodes: int = DEFAULT_NODES
    margin: float = float("nan")
    focus: float = 0.0

    def __post_init__(self):
        if not self.left_real < self.right_real:
            raise ValidationError("contour needs left_real < right_real")
        if self.nodes < 8:
            raise ValidationError("at least 8 quadrature nodes are required")
        if not -1.0 < self.focus < 1.0:
            raise ValidationError("focus must lie in (-1, 1)")

    @property
    def center(self) -> float:
        return 0.5 * (self.left_real + self.right_real)

    @property
    def radius(self) -> float:
        return 0.5 * (self.right_real - self.left_real)

    def mobius(self) -> tuple[float, float, float, float]:
        """Coefficients ``(a, b, c, d)`` of ``T(s) = (a s + b) / (c s + d)``."""
        alpha = 1.0 / self.radius
        beta = -self.center / self.radius
        q = self.focus
        return alpha, beta - q, -q * alpha, 1.0 - q * beta

    def to_unit(self, s):
        a, b, c, d = self.mobius()
        return (a * np.asarray(s) + b) / (c * np.asarray(s) + d)

    def node_points(self) -> np.ndarray:
        """Quadrature nodes ``s_j`` on the circle (offset half a step from the real axis)."""
        a, b, c, d = self.mobius()
        z = np.exp(2j * np.pi * (np.arange(self.nodes) + 0.5) / self.nodes)
        return (d * z - b) / (a - c * z)

    def distance(self, values) -> np.ndarray:
        """Distance of real points to the circle."""
        return np.abs(np.abs(np.asarray(values, dtype=float) - self.center) - self.radius)

    def encloses(self, values) -> np.ndarray:
        return np.abs(np.asarray(values, dtype=float) - self.center) < self.radius


@dataclass
class SpectralSplit:
    projector: np.ndarray
    k: int
    L: np.ndarray
    R: np.ndarray
    frame: np.ndarray
    contour: ContourSpec | None = field(default=None, repr=False)


def _cluster_runs(values: np.ndarray, rel_tol: float) -> list[int]:
    """Indices ``i`` such that ``values[i]`` and ``values[i+1]`` are separated."""
    spread = values[-1] - values[0]
    thresh = rel_tol * (1.0 + spread)
    return [i for i in range(len(values) - 1) if values[i + 1] - values[i] > thresh]


def detect_gaps(values, rel_tol: float = DEFAULT_REL_TOL) -> ClusterPartition:
    """Group ascending eigenvalues into clusters.

    Neighbours belong to one cluster iff they differ by at most
    ``rel_tol * (1 + spread)``; every separating gap gets a cut at its midpoint.
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise EmptyInput("no eigenvalues given")
    if rel_tol <= 0:
        raise ValueError("rel_tol must be positive")
    if np.any(np.diff(values) < 0):
        raise ValidationError("eigenvalues must be ascending")
    seps = _cluster_runs(values, rel_tol)
    bounds = [0] + [i + 1 for i in seps] + [values.size]
    sizes = tuple(int(b - a) for a, b in zip(bounds[:-1], bounds[1:]))
    cuts = tuple(0.5 * float(values[i] + values[i + 1]) for i in seps)
    widths = tuple(float(values[i + 1] - values[i]) for i in seps)
    return ClusterPartition(cuts, sizes, widths)


def _best_focus(w: np.ndarray) -> float:
    """Interior point minimizing the worst per-eigenvalue convergence factor.

    ``w`` are eigenvalues in normalized coordinates (diameter -> [-1, 1]).  For
    an enclosed eigenvalue the trapezoidal error decays like ``|T(w)|^N``, for
    an excluded one like ``|T(w)|^-N``.
    """
    inside = np.abs(w) < 1.0

    def rates(t):
        q = np.tanh(np.atleast_1d(t))[:, None]
        with np.errstate(divide="ignore"):
            z = np.abs((w - q) / (1.0 - q * w))
            return np.max(np.where(inside, z, 1.0 / z), axis=1)

    ts = np.linspace(-6.0, 6.0, 241)
    vals = rates(ts)
    i = int(np.argmin(vals))
    lo, hi = ts[max(i - 1, 0)], ts[min(i + 1, ts.size - 1)]
    res = minimize_scalar(lambda t: float(rates(t)[0]), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-10})
    t = res.x if res.fun <= vals[i] else ts[i]
    return float(np.tanh(t))


def _make_contour(values, left, right, nodes, warp) -> ContourSpec:
    base = ContourSpec(float(left), float(right), nodes)
    dist = base.distance(values)
    margin = float(dist.min()) if dist.size else float("inf")
    if margin <= CUT_TOL:
        raise EigenvalueOnCut(f"an eigenvalue lies on the contour (margin {margin:.2e})")
    focus = 0.0
    if warp and len(values):
        w = (np.asarray(values, dtype=float) - base.center) / base.radius
        focus = _best_focus(w)
    return ContourSpec(base.left_real, base.right_real, nodes, margin, focus)


def contour_for_gap(X, c: float, nodes: int = DEFAULT_NODES, warp: bool = True) -> ContourSpec:
    """Contour crossing the real axis at ``-R`` and at the cut ``c``.

    ``-R = min(lambda_min, c) - max(1, spread)``, so every eigenvalue below
    ``c`` is enclosed.  ``X`` may be a matrix or its eigenvalues.
    """
    X = np.asarray(X)
    values = eigvalsh(X) if X.ndim == 2 else np.sort(X.astype(float))
    if np.any(np.abs(values - c) <= CUT_TOL):
        raise EigenvalueOnCut(f"cut {c!r} coincides with an eigenvalue")
    spread = float(values[-1] - values[0])
    left = min(float(values[0]), c) - max(1.0, spread)
    return _make_contour(values, left, c, nodes, warp)


def contour_for_interval(X, lo: float, hi: float, nodes: int = DEFAULT_NODES,
                         warp: bool = True) -> ContourSpec:
    """Contour crossing the real axis at ``lo`` and ``hi``: encloses the eigenvalues in between."""
    X = np.asarray(X)
    values = eigvalsh(X) if X.ndim == 2 else np.sort(X.astype(float))
    for cut in (lo, hi):
        if np.any(np.abs(values - cut) <= CUT_TOL):
            raise EigenvalueOnCut(f"cut {cut!r} coincides with an eigenvalue")
    return _make_contour(values, lo, hi, nodes, warp)


def _resolvent(X: np.ndarray, s: complex) -> np.ndarray:
    n = X.shape[0]
    A = s * np.eye(n) - X
    lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    u = np.abs(np.diagonal(lu))
    if u.min() <= n * np.finfo(float).eps * max(u.max(), 1.0):
        raise SingularResolvent(f"resolvent is numerically singular at s = {s:.6g}")
    return scipy.linalg.lu_solve((lu, piv), np.eye(n, dtype=complex), check_finite=False)


def spectral_projector(X, contour: ContourSpec) -> np.ndarray:
    """Trapezoidal approximation of the Riesz projector for ``contour``.

    Nodes come in complex-conjugate pairs whose contributions are adjoints of
    each other, so the sum is accumulated pairwise in a fixed order and the
    result is exactly Hermitian.
    """
    X = np.asarray(X, dtype=complex)
    n = X.shape[0]
    N = contour.nodes
    a, b, c, d = contour.mobius()
    det = a * d - b * c
    z = np.exp(2j * np.pi * (np.arange(N) + 0.5) / N)
    s = contour.node_points()
    eye = np.eye(n)
    P = np.zeros((n, n), dtype=complex)
    for j in range(N // 2):
        g = c * s[j] + d
        term = (z[j] * g * g / det) * _resolvent(X, s[j]) - (z[j] * c * g / det) * eye
        P += term + term.conj().T
    if N % 2:
        j = N // 2
        g = c * s[j] + d
        term = (z[j] * g * g / det) * _resolvent(X, s[j]) - (z[j] * c * g / det) * eye
        P += hermitize(term)
    return P / N


def projector_rank(P: np.ndarray) -> int:
    tr = float(np.trace(P).real)
    k = int(round(tr))
    if abs(tr - k) > RANK_TOL:
        raise ConvergenceFailure(f"projector trace {tr:.8f} is not close to an integer")
    return k


def projector_frame(P: np.ndarray, k: int) -> np.ndarray:
    """Orthonormal basis (n x k) of the range of a Hermitian projector."""
    if k == 0:
        return np.zeros((P.shape[0], 0), dtype=complex)
    w, v = np.linalg.eigh(hermitize(P))
    return fix_phases(v[:, ::-1][:, :k])


def split_from_projector(X: np.ndarray, P: np.ndarray, contour=None) -> SpectralSplit:
    k = projector_rank(P)
    Q = np.eye(X.shape[0]) - P
    L = hermitize(P @ X @ P)
    R = hermitize(Q @ X @ Q)
    return SpectralSplit(P, k, L, R, projector_frame(P, k), contour)


def split_at_gap(X, c: float, nodes: int = DEFAULT_NODES, warp: bool = True) -> SpectralSplit:
    """``X = L + R`` with ``L = P X P`` (eigenvalues below ``c``) and ``R = (I-P) X (I-P)``."""
    X = np.asarray(X, dtype=complex)
    contour = contour_for_gap(X, c, nodes, warp)
    return split_from_projector(X, spectral_projector(X, contour), contour)


def multi_split(X, partition: ClusterPartition, nodes: int = DEFAULT_NODES,
                warp: bool = True) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Commuting blocks ``B_1 + ... + B_m = X``, one per cluster, low to high.

    The top cluster is split off first and the remaining lower part is split
    again at the next cut, so that ``X = L_1 + ... + L_{m-1} + R``.  The lower
    part carries spurious zero eigenvalues, so every projector is built from
    the spectrum of ``X`` itself; they are nested and commute with ``X``.
    """
    X = np.asarray(X, dtype=complex)
    n = X.shape[0]
    eye = np.eye(n)
    projs = []
    for j, c in enumerate(partition.cuts):
        P = spectral_projector(X, contour_for_gap(X, c, nodes, warp))
        expected = sum(partition.sizes[: j + 1])
        if projector_rank(P) != expected:
            raise ValidationError(f"cut {c} encloses {projector_rank(P)} eigenvalues, "
                                  f"partition says {expected}")
        projs.append(P)

    blocks: list[np.ndarray] = []
    cur = X
    for P in reversed(projs):
        Q = eye - P
        blocks.append(hermitize(Q @ cur @ Q))
        cur = hermitize(P @ cur @ P)
    blocks.append(cur)
    blocks.reverse()

    bounds = [np.zeros((n, n))] + projs + [eye]
    frames = [projector_frame(hi - lo, size)
              for lo, hi, size in zip(bounds[:-1], bounds[1:], partition.sizes)]
    return blocks, frames
