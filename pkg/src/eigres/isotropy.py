"""Isotropy indices of the conjugation action and blow-up schedules.

An isotropy index is the set of cumulative multiplicities ``{0, i_1, ..., n}``
of an ascending spectrum; strata are ordered by inclusion of these sets.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .exceptions import DimensionMismatch, GapViolation, UnsupportedN, ValidationError
from .riesz import DEFAULT_REL_TOL, _cluster_runs

FLAVORS = ("radial", "projective", "small")


@dataclass(frozen=True, order=True)
class IsotropyIndex:
    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) < 2 or idx[0] != 0 or any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValidationError(f"not an isotropy index: {idx}")

    @property
    def n(self) -> int:
        return self.indices[-1]

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.indices, self.indices[1:]))

    def __contains__(self, k) -> bool:
        return k in self.indices

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def is_maximal(self) -> bool:
        return len(self.indices) == self.n + 1

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.indices)) + "}"


def isotropy_index(values, rel_tol: float = DEFAULT_REL_TOL) -> IsotropyIndex:
    """Isotropy index of an ascending spectrum; same clustering rule as ``detect_gaps``."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValidationError("no eigenvalues given")
    seps = _cluster_runs(values, rel_tol)
    return IsotropyIndex((0, *(i + 1 for i in seps), values.size))


def leq(I: IsotropyIndex, J: IsotropyIndex) -> bool:
    """Stratum order: ``I <= J`` iff ``I`` is a subset of ``J``."""
    if I.n != J.n:
        raise DimensionMismatch(f"indices over n={I.n} and n={J.n}")
    return set(I.indices) <= set(J.indices)


def split_index(I: IsotropyIndex, k: int) -> tuple[IsotropyIndex, IsotropyIndex]:
    """Indices of the two diagonal blocks left by a spectral gap after ``k`` eigenvalues."""
    if k not in I.indices or k in (0, I.n):
        raise GapViolation(f"{k} is not an interior element of {I}")
    left = IsotropyIndex(tuple(i for i in I.indices if i <= k))
    right = IsotropyIndex(tuple(i - k for i in I.indices if i >= k))
    return left, right


def merge_index(left: IsotropyIndex, right: IsotropyIndex) -> IsotropyIndex:
    k = left.n
    return IsotropyIndex(tuple(sorted(set(left.indices) | {i + k for i in right.indices})))


@dataclass(frozen=True)
class BlowupCenter:
    flavor: str  # "full-stratum" or "chain"
    index: IsotropyIndex | None = None
    chain: tuple[int, int] | None = None

    def __post_init__(self):
        if self.flavor == "full-stratum":
            if self.index is None or self.index.is_maximal():
                raise ValidationError("the open stratum is never a blow-up center")
        elif self.flavor == "chain":
            if self.chain is None or not 1 <= self.chain[0] < self.chain[1]:
                raise ValidationError(f"bad chain {self.chain}")
        else:
            raise ValidationError(f"unknown center flavor {self.flavor!r}")

    def to_json(self) -> dict:
        if self.flavor == "chain":
            return {"chain": list(self.chain)}
        return {"I": list(self.index.indices)}


@dataclass(frozen=True)
class BlowupSchedule:
    resolution: str
    levels: tuple[tuple[BlowupCenter, ...], ...]

    @property
    def centers(self) -> list[BlowupCenter]:
        return [c for level in self.levels for c in level]

    def __len__(self) -> int:
        return sum(len(level) for level in self.levels)

    def to_json(self) -> list:
        return [[c.to_json() for c in level] for level in self.levels]

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def is_ordered(self) -> bool:
        """Check that no center comes after one it is strictly contained in."""
        flat = [(lvl, c) for lvl, level in enumerate(self.levels) for c in level]
        for i, (_, a) in enumerate(flat):
            for _, b in flat[:i]:
                if self.resolution == "small":
                    (i0, j0), (i1, j1) = a.chain, b.chain
                    # a may not strictly contain an earlier b
                    if i0 <= i1 and j1 <= j0 and (i0, j0) != (i1, j1):
                        return False
                elif set(a.index) < set(b.index):
                    return False
        return True


def schedule(n: int, resolution: str) -> BlowupSchedule:
    """Blow-up centers grouped into levels; centers within a level commute.

    ``radial``/``projective``: every non-open stratum ``S^I``, by ``|I| = 2..n``.
    ``small``: chains ``{lambda_i = ... = lambda_j}``, longest first.
    Within a level the order is lexicographic.
    """
    if not 2 <= n <= 12:
        raise UnsupportedN(f"n = {n} outside the supported range 2..12")
    if resolution not in FLAVORS:
        raise ValidationError(f"unknown resolution {resolution!r}")
    levels = []
    if resolution == "small":
        for length in range(n - 1, 0, -1):
            levels.append(tuple(BlowupCenter("chain", chain=(i, i + length))
                                for i in range(1, n - length + 1)))
    else:
        for m in range(2, n + 1):
            levels.append(tuple(BlowupCenter("full-stratum", index=IsotropyIndex((0, *inner, n)))
                                for inner in combinations(range(1, n), m - 2)))
    return BlowupSchedule(resolution, tuple(levels))


def expected_center_count(n: int, resolution: str) -> int:
    if resolution == "small":
        return n * (n - 1) // 2
    return sum(comb(n - 1, m - 2) for m in range(2, n + 1))


def schedule_from_json(data: list, resolution: str) -> BlowupSchedule:
    levels = []
    for level in data:
        centers = []
        for item in level:
            if "chain" in item:
                centers.append(BlowupCenter("chain", chain=tuple(item["chain"])))
            else:
                centers.append(BlowupCenter("full-stratum", index=IsotropyIndex(tuple(item["I"]))))
        levels.append(tuple(centers))
    return BlowupSchedule(resolution, tuple(levels))
