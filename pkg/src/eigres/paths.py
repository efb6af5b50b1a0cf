"""Transport of eigenlines and cluster subspaces along sampled matrix paths.

Two kinds of transport:

* :func:`track_cluster` carries an orthonormal frame of the Riesz image
  ``Im P_{X_t}`` from sample to sample (project onto the new image, then
  orthonormalize by the polar factor), so the frame never leaves the
  spectral subspace.
* :func:`track_eigenlines` continues each eigenline by maximal overlap.

Comparing the transported objects at the end of a path with those at the
start exposes monodromy: on the 2x2 antipodal loop the two eigenlines trade
places, on the 4x4 demonstration curve the bottom 2-plane ends on the
complement of where it started.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import subspace_angles
from scipy.optimize import linear_sum_assignment

from .blowup2 import resolve_local
from .exceptions import (
    DegenerateInterior,
    EigenvalueOnCut,
    GapLost,
    MatchAmbiguous,
    StepTooCoarse,
    UnknownName,
    ValidationError,
)
from .hermitian import conjugate, eigendecompose, eigvalsh, hermitize, random_unitary
from .riesz import DEFAULT_NODES, contour_for_gap, projector_frame, spectral_projector

MIN_OVERLAP = 1.0 / np.sqrt(2.0)
DEGENERATE_GAP = 1e-10
SWAP_ANGLE = np.pi / 2 - 1e-3
BUILTINS = ("loop2x2", "curve4x4", "ray3")


@dataclass
class MatrixPath:
    """Samples ``(t_i, X_i)`` with ``t_0 = 0 < t_1 < ... < t_last = 1``."""

    ts: np.ndarray
    mats: np.ndarray
    func: Callable[[float], np.ndarray] | None = field(default=None, repr=False)
    name: str = "custom"

    def __post_init__(self):
        self.ts = np.asarray(self.ts, dtype=float)
        self.mats = np.asarray(self.mats, dtype=complex)
        if self.ts.ndim != 1 or len(self.ts) != len(self.mats) or len(self.ts) < 2:
            raise ValidationError("a path needs at least two samples, one matrix per time")
        if self.ts[0] != 0.0 or self.ts[-1] != 1.0 or np.any(np.diff(self.ts) <= 0):
            raise ValidationError("sample times must increase strictly from 0 to 1")

    @classmethod
    def from_function(cls, func, steps: int, name: str = "custom") -> "MatrixPath":
        ts = np.linspace(0.0, 1.0, steps + 1)
        return cls(ts, np.array([func(t) for t in ts]), func, name)

    def __len__(self) -> int:
        return len(self.ts)

    @property
    def n(self) -> int:
        return self.mats.shape[1]

    @property
    def steps(self) -> int:
        return len(self.ts) - 1

    @property
    def closure_residual(self) -> float:
        return float(np.linalg.norm(self.mats[-1] - self.mats[0]))

    @property
    def step_bound(self) -> float:
        return float(np.max(np.linalg.norm(np.diff(self.mats, axis=0), axis=(1, 2))))

    def refined(self) -> "MatrixPath":
        """Same path with twice as many steps (needs the generating function)."""
        if self.func is None:
            raise ValidationError("path has no generating function to refine")
        return MatrixPath.from_function(self.func, 2 * self.steps, self.name)


@dataclass
class MonodromyReport:
    kind: str
    start_object: np.ndarray
    end_object: np.ndarray
    permutation: tuple[int, ...] | None
    principal_angles: np.ndarray
    closure_residual: float
    swap_detected: bool
    # per-sample trajectory (CSV payload)
    ts: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))
    values: np.ndarray = field(repr=False, default_factory=lambda: np.zeros((0, 0)))
    angle_max: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))
    overlap_min: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))
    frames: list | None = field(repr=False, default=None)

    def summary(self) -> dict:
        perm = None if self.permutation is None else [p + 1 for p in self.permutation]
        return {
            "kind": self.kind,
            "permutation": perm,
            "principalAnglesRad": [float(a) for a in self.principal_angles],
            "closureResidual": self.closure_residual,
            "swapDetected": bool(self.swap_detected),
        }


# -- builtin paths -----------------------------------------------------------


def smooth_ramp(u):
    """C^2 monotone step from 0 (u <= 0) to 1 (u >= 1) with flat ends."""
    u = np.clip(u, 0.0, 1.0)
    return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u)


def loop2x2_matrix(s: float) -> np.ndarray:
    c, sn = np.cos(np.pi * s), np.sin(np.pi * s)
    return np.array([[c, sn], [sn, -c]], dtype=complex)


_L_FIRST_END = np.array([-1.0, -1.0, 2.0 / 3.0, 4.0 / 3.0])
_L_LAST_START = np.array([-4.0 / 3.0, -2.0 / 3.0, 1.0, 1.0])


def curve4x4_lambda(t: float) -> np.ndarray:
    """Diagonal part: top pair splits, both pairs move, bottom pair re-merges.

    ``[0, 1/3]``: ``(-1, -1, 1 - t, 1 + t)``; ``[2/3, 1]``: ``(-2 + t, -t, 1, 1)``;
    in between a smooth ramp joins the two end values.
    """
    if t <= 1.0 / 3.0:
        return np.array([-1.0, -1.0, 1.0 - t, 1.0 + t])
    if t >= 2.0 / 3.0:
        return np.array([-2.0 + t, -t, 1.0, 1.0])
    w = smooth_ramp(3.0 * t - 1.0)
    return (1.0 - w) * _L_FIRST_END + w * _L_LAST_START


def curve4x4_unitary(t: float) -> np.ndarray:
    """Rotation by ``(pi/2) w(t)`` in the (e1, e3) and (e2, e4) planes.

    Ends at columns ``(e3, e4, -e1, -e2)``: the column permutation up to
    signs, which do not change ``U Lambda U*``.
    """
    phi = 0.5 * np.pi * smooth_ramp(3.0 * t - 1.0)
    c, s = np.cos(phi), np.sin(phi)
    I2 = np.eye(2)
    return np.block([[c * I2, -s * I2], [s * I2, c * I2]]).astype(complex)


def curve4x4_matrix(t: float) -> np.ndarray:
    U = curve4x4_unitary(t)
    return hermitize((U * curve4x4_lambda(t)) @ U.conj().T)


def ray3_function(seed: int = 3) -> Callable[[float], np.ndarray]:
    """Curved segment ``g (D0 + h B + h^2 C) g*``, ``h = t - 1/2``, with a
    conical double eigenvalue 1 at ``t = 1/2`` (``D0 = diag(1, 1, 4)``)."""
    g = random_unitary(3, seed)
    D0 = np.diag([1.0, 1.0, 4.0]).astype(complex)
    B = np.array([[0.8, 0.3 + 0.4j, 0.1], [0.3 - 0.4j, -0.6, 0.2j], [0.1, -0.2j, 0.5]])
    C = np.array([[0.5, -0.2j, 0.0], [0.2j, 0.3, 0.1], [0.0, 0.1, -0.4]])

    def X(t):
        h = t - 0.5
        return conjugate(g, D0 + h * B + h * h * C)

    return X


def builtin_path(name: str, steps: int = 256, **params) -> MatrixPath:
    """``loop2x2`` (``turns`` = 1 or 2), ``curve4x4``, ``ray3`` (``seed``)."""
    if steps < 16:
        raise ValidationError("steps must be >= 16")
    if name == "loop2x2":
        turns = params.get("turns", 1)

        def func(t):
            return loop2x2_matrix(turns * t)

    elif name == "curve4x4":
        func = curve4x4_matrix
    elif name == "ray3":
        func = ray3_function(params.get("seed", 3))
    else:
        raise UnknownName(f"unknown builtin path {name!r}; choose from {BUILTINS}")
    return MatrixPath.from_function(func, steps, name)


# -- tracking ----------------------------------------------------------------


def _polar(Y: np.ndarray) -> np.ndarray:
    u, _, vh = np.linalg.svd(Y, full_matrices=False)
    return u @ vh


def _line_angle(u: np.ndarray, v: np.ndarray) -> float:
    """Angle between the lines of unit vectors ``u`` and ``v`` (accurate near 0)."""
    ip = np.vdot(u, v)
    return float(np.arctan2(np.linalg.norm(v - ip * u), abs(ip)))


def track_cluster(path: MatrixPath, cut: float, nodes: int = DEFAULT_NODES,
                  keep_frames: bool = False) -> MonodromyReport:
    """Transport a frame of the eigenspace below ``cut`` along ``path``."""
    n = path.n
    k = None
    frame0 = frame = None
    values, angle_max, overlap_min = [], [], []
    frames = []
    for i, X in enumerate(path.mats):
        w = eigvalsh(X)
        below = int(np.sum(w < cut))
        if k is None:
            k = below
            if k in (0, n):
                raise ValidationError(f"cut {cut} does not split the spectrum")
        if below != k:
            raise GapLost(f"eigenvalue count below the cut changes at t = {path.ts[i]:.6g}")
        try:
            P = spectral_projector(X, contour_for_gap(w, cut, nodes))
        except EigenvalueOnCut as exc:
            raise GapLost(f"eigenvalue on the cut at t = {path.ts[i]:.6g}") from exc
        if frame is None:
            frame = projector_frame(P, k)
            frame0 = frame
            overlap = 1.0
        else:
            # singular values of P F are the cosines of the principal angles
            # between the old frame and the new eigenspace
            Y = P @ frame
            overlap = float(np.linalg.svd(Y, compute_uv=False).min())
            if overlap < MIN_OVERLAP:
                raise StepTooCoarse(f"frame overlap {overlap:.3f} at t = {path.ts[i]:.6g}; refine")
            frame = _polar(Y)
        values.append(w)
        overlap_min.append(overlap)
        angle_max.append(float(subspace_angles(frame0, frame).max()))
        if keep_frames:
            frames.append(frame)

    angles = np.sort(subspace_angles(frame0, frame))
    comp0 = projector_frame(np.eye(n) - frame0 @ frame0.conj().T, n - k)
    stay = float(np.cos(angles.max()))
    perm = None
    if stay >= MIN_OVERLAP:
        perm = (0, 1)
    elif k == n - k:
        cross = float(np.cos(subspace_angles(comp0, frame).max()))
        if cross >= MIN_OVERLAP:
            perm = (1, 0)
    return MonodromyReport(
        kind="cluster-subspace",
        start_object=frame0,
        end_object=frame,
        permutation=perm,
        principal_angles=angles,
        closure_residual=path.closure_residual,
        swap_detected=bool(angles.max() >= SWAP_ANGLE),
        ts=path.ts.copy(),
        values=np.array(values),
        angle_max=np.array(angle_max),
        overlap_min=np.array(overlap_min),
        frames=frames if keep_frames else None,
    )


def _simple(values: np.ndarray) -> bool:
    return values.size < 2 or float(np.min(np.diff(values))) >= DEGENERATE_GAP


def track_eigenlines(path: MatrixPath) -> MonodromyReport:
    """Continue every eigenline by maximal overlap and compare ends as lines.

    Labels are the ascending positions at the start.  ``permutation[i] = j``
    means line ``i`` ends on the line that started as ``j``.  Degenerate
    endpoints are replaced by their neighbouring interior samples.
    """
    decs = [eigendecompose(X) for X in path.mats]
    last = len(decs) - 1
    for i in range(1, last):
        if not _simple(decs[i].values):
            raise DegenerateInterior(f"eigenvalue gap below {DEGENERATE_GAP:g} at t = {path.ts[i]:.6g}")
    first = 0 if _simple(decs[0].values) else 1
    final = last if _simple(decs[last].values) else last - 1
    if first > final:
        raise DegenerateInterior("no sample with simple spectrum")

    n = path.n
    cur = decs[first].vectors.copy()
    start = cur.copy()
    col = np.arange(n)  # current sorted position of each label
    values = np.full((len(decs), n), np.nan)
    angle_max = np.zeros(len(decs))
    overlap_min = np.ones(len(decs))
    for i in range(len(decs)):
        if i <= first or i > final:
            values[i] = decs[i].values[col] if i > final else decs[i].values
            continue
        V = decs[i].vectors
        S = np.abs(cur.conj().T @ V)
        rows, cols = linear_sum_assignment(-S)
        best = S[rows, cols]
        if best.min() < MIN_OVERLAP:
            raise MatchAmbiguous(f"best overlap {best.min():.3f} at t = {path.ts[i]:.6g}; refine")
        new = V[:, cols]
        ph = np.einsum("ij,ij->j", cur.conj(), new)
        cur = new * (np.abs(ph) / ph).conj()
        col = cols
        values[i] = decs[i].values[col]
        overlap_min[i] = float(best.min())
        angle_max[i] = max(_line_angle(start[:, j], cur[:, j]) for j in range(n))
    angle_max[final + 1:] = angle_max[final]

    S = np.abs(start.conj().T @ cur)  # S[j, i] = |<start_j, end_i>|
    rows, cols = linear_sum_assignment(-S.T)
    perm = None
    if S.T[rows, cols].min() >= MIN_OVERLAP:
        perm = tuple(int(c) for c in cols)
    if perm is None:
        targets = np.argmax(S, axis=0)
    else:
        targets = np.array(perm)
    angles = np.array([_line_angle(start[:, targets[i]], cur[:, i]) for i in range(n)])
    return MonodromyReport(
        kind="eigenline",
        start_object=start,
        end_object=cur,
        permutation=perm,
        principal_angles=angles,
        closure_residual=path.closure_residual,
        swap_detected=perm is not None and perm != tuple(range(n)),
        ts=path.ts.copy(),
        values=values,
        angle_max=angle_max,
        overlap_min=overlap_min,
    )


# -- smoothness probe ----------------------------------------------------------


@dataclass
class ProbeResult:
    hs: np.ndarray
    second_differences: np.ndarray  # (len(hs), 2 sides, 2 values)
    ratios: np.ndarray  # (len(hs) - 1, 2, 2)
    raw_jump: float


def probe_smoothness(func, t0: float, bracket, h0: float = 1e-2, halvings: int = 4,
                     nodes: int = DEFAULT_NODES) -> ProbeResult:
    """Divided differences of lifted vs raw eigenvalues at a conical point ``t0``.

    On each side of ``t0`` the lifted pair ``(mu - r, mu + r)`` is sampled at
    ``t0, t0 +- h, t0 +- 2h`` and its second divided difference recorded for
    ``h = h0, h0/2, ...``.  The raw sorted eigenvalues are checked for a kink:
    the largest jump between left and right first differences at ``h0``.
    """
    def lifted(t):
        return np.array(resolve_local(func(t), bracket, nodes).lifted_values)

    f0 = lifted(t0)
    hs = h0 / 2.0 ** np.arange(halvings + 1)
    d2 = np.zeros((hs.size, 2, 2))
    for i, h in enumerate(hs):
        for side, sgn in enumerate((1.0, -1.0)):
            f1, f2 = lifted(t0 + sgn * h), lifted(t0 + 2 * sgn * h)
            d2[i, side] = (f2 - 2.0 * f1 + f0) / (h * h)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.abs(d2[1:]) / np.abs(d2[:-1])

    lam = [eigvalsh(func(t)) for t in (t0 - h0, t0, t0 + h0)]
    right = (lam[2] - lam[1]) / h0
    left = (lam[1] - lam[0]) / h0
    return ProbeResult(hs, d2, ratios, float(np.max(np.abs(right - left))))
