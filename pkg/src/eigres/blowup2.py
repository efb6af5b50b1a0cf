"""Coordinates on the 2x2 trace-free slice and its blow-ups.

A 2x2 Hermitian matrix ``[[tau + a, c + d i], [c - d i, tau - a]]`` is stored as
``BallCoords(a, c, d, tau)``.  Its eigenvalues are ``tau -+ r`` with
``r = |(a, c, d)|``, singular only at ``r = 0``.  The radial blow-up replaces
the origin by the sphere of directions ``theta``; the projective blow-up by
the lines through the origin, covered by three patches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import (
    BracketInvalid,
    OriginWithoutDirection,
    PatchDivisionByZero,
    ValidationError,
    WrongDimension,
)
from .hermitian import check_square, eigvalsh, fix_phases, hermitize, trace_split
from .riesz import DEFAULT_NODES, contour_for_interval, projector_frame, projector_rank, spectral_projector

DEGENERATE_R = 1e-13


@dataclass(frozen=True)
class BallCoords:
    a: float
    c: float
    d: float
    tau: float = 0.0

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.a, self.c, self.d])

    def to_matrix(self) -> np.ndarray:
        z = complex(self.c, self.d)
        return np.array([[self.tau + self.a, z], [z.conjugate(), self.tau - self.a]])


@dataclass(frozen=True)
class BlowupChartPoint:
    """A point of a blow-up chart.

    ``radial``: ``coords = (r, theta_1, theta_2, theta_3)``.
    ``proj1..proj3``: ``coords = (x, y, z)`` in that patch.
    """

    chart: str
    coords: tuple[float, ...]
    tau: float = 0.0

    @property
    def r(self) -> float:
        if self.chart == "radial":
            return self.coords[0]
        x, y, z = self.coords
        return abs(x) * float(np.sqrt(1.0 + y * y + z * z))

    @property
    def theta(self) -> np.ndarray:
        if self.chart != "radial":
            raise ValidationError("theta is defined on the radial chart only")
        return np.array(self.coords[1:])

    @property
    def lifted_values(self) -> tuple[float, float]:
        return self.tau - self.r, self.tau + self.r

    def blow_down(self) -> BallCoords:
        if self.chart == "radial":
            a, c, d = self.r * self.theta
        else:
            x, y, z = self.coords
            if self.chart == "proj1":
                c, d, a = x, x * y, x * z
            elif self.chart == "proj2":
                d, c, a = x, x * y, x * z
            else:
                a, c, d = x, x * y, x * z
        return BallCoords(float(a), float(c), float(d), self.tau)


@dataclass(frozen=True)
class EigenlinePair:
    plus: np.ndarray
    minus: np.ndarray
    chart_used: tuple[str, str]


@dataclass(frozen=True)
class LocalResolutionData:
    cluster_frame: np.ndarray
    mu: float
    r: float
    theta: np.ndarray | None
    lifted_values: tuple[float, float]


def theta_matrix(theta) -> np.ndarray:
    """The trace-free matrix with ball coordinates ``theta``."""
    a, c, d = theta
    return BallCoords(a, c, d).to_matrix()


def pauli_coords(X) -> BallCoords:
    X = check_square(X, 2)
    tau = 0.5 * float((X[0, 0] + X[1, 1]).real)
    return BallCoords(float(X[0, 0].real) - tau, float(X[0, 1].real), float(X[0, 1].imag), tau)


def radial_lift(b: BallCoords, direction=None) -> BlowupChartPoint:
    """Lift to ``(r, theta)``; at the origin the front-face direction must be given."""
    v = b.vector
    r = float(np.linalg.norm(v))
    if r == 0.0:
        if direction is None:
            raise OriginWithoutDirection("the origin lifts to the whole front face; give a direction")
        theta = np.asarray(direction, dtype=float)
        nrm = np.linalg.norm(theta)
        if nrm == 0:
            raise OriginWithoutDirection("direction must be nonzero")
        theta = theta / nrm
    else:
        theta = v / r
    return BlowupChartPoint("radial", (r, *map(float, theta)), b.tau)


def blow_down(point: BlowupChartPoint) -> BallCoords:
    return point.blow_down()


def projective_chart(patch: int | None, b: BallCoords) -> BlowupChartPoint:
    """Coordinates in projective patch 1 ``(c, d/c, a/c)``, 2 ``(d, c/d, a/d)`` or 3 ``(a, c/a, d/a)``.

    ``patch=None`` picks the patch whose dividing coordinate is largest.
    """
    a, c, d = b.a, b.c, b.d
    if patch is None:
        patch = int(np.argmax(np.abs([c, d, a]))) + 1
    if patch == 1:
        div, p, q = c, d, a
    elif patch == 2:
        div, p, q = d, c, a
    elif patch == 3:
        div, p, q = a, c, d
    else:
        raise ValidationError(f"patch must be 1, 2 or 3, got {patch}")
    if div == 0:
        raise PatchDivisionByZero(f"dividing coordinate of patch {patch} is zero")
    return BlowupChartPoint(f"proj{patch}", (div, p / div, q / div), b.tau)


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def eigenline_atlas(theta) -> EigenlinePair:
    """Eigenlines of ``theta_matrix(theta)`` for eigenvalues +1 and -1.

    Two explicit formulas cover the sphere: A gives ``(c + d i, +-1 - a)``
    (zero at ``a = +-1``), B gives ``(a +- 1, c - d i)`` (zero at ``a = -+1``).
    Each line uses whichever has the larger norm.
    """
    a, c, d = map(float, theta)
    z = complex(c, d)
    out = []
    used = []
    for sign in (1.0, -1.0):
        va = np.array([z, sign - a])
        vb = np.array([a + sign, z.conjugate()])
        if np.linalg.norm(va) >= np.linalg.norm(vb):
            out.append(va)
            used.append("A")
        else:
            out.append(vb)
            used.append("B")
    v = fix_phases(np.column_stack([_unit(out[0]), _unit(out[1])]))
    return EigenlinePair(v[:, 0], v[:, 1], tuple(used))


def resolve_local(X, bracket: tuple[float, float], nodes: int = DEFAULT_NODES) -> LocalResolutionData:
    """Resolve a two-eigenvalue cluster of ``X`` isolated by ``bracket = (lo, hi)``.

    The cluster frame comes from the Riesz projector of a contour crossing the
    real axis at ``lo`` and ``hi``; the compressed 2x2 block is put in ball
    coordinates and lifted radially.  At an exact double point (``r < 1e-13``)
    no direction exists and ``theta`` is ``None``.
    """
    X = np.asarray(X, dtype=complex)
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise BracketInvalid("bracket must satisfy lo < hi")
    values = eigvalsh(X)
    inside = int(np.sum((values > lo) & (values < hi)))
    if inside != 2:
        raise BracketInvalid(f"bracket ({lo}, {hi}) holds {inside} eigenvalues, need 2")
    contour = contour_for_interval(values, lo, hi, nodes)
    P = spectral_projector(X, contour)
    if projector_rank(P) != 2:
        raise BracketInvalid("projector for the bracket does not have rank 2")
    frame = projector_frame(P, 2)
    block = hermitize(frame.conj().T @ X @ frame)
    split = trace_split(block)
    b = pauli_coords(block)
    r = float(np.linalg.norm(b.vector))
    if r < DEGENERATE_R:
        return LocalResolutionData(frame, split.mean, 0.0, None, (split.mean, split.mean))
    theta = b.vector / r
    return LocalResolutionData(frame, split.mean, r, theta, (split.mean - r, split.mean + r))
