"""Seeded ensembles and independent oracles shared by the tests."""

import numpy as np

from eigres.hermitian import random_hermitian, random_unitary


def gapped_matrix(n, seed, gap=0.3):
    """Spectral-norm-1 GUE spectrum pushed apart around 0 by ``gap``, Haar-rotated.

    Returns ``(X, cut, k, values)``; exactly ``k`` eigenvalues lie below ``cut``.
    """
    rng = np.random.default_rng(seed)
    w = np.linalg.eigvalsh(random_hermitian(n, seed))
    w = w / np.max(np.abs(w))
    k = int(rng.integers(1, n))
    w = np.concatenate([w[:k] - w[k - 1] - gap / 2, w[k:] - w[k] + gap / 2])
    g = random_unitary(n, seed + 10_000)
    X = g @ np.diag(w) @ g.conj().T
    return 0.5 * (X + X.conj().T), 0.0, k, np.sort(w)


def standard_matrix(n, seed, gap=0.5):
    """Standardized ensemble: ``||X||_F <= 2`` and a gap of at least ``gap`` at 0."""
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, n))
    width = np.sqrt(4.0 / n) - gap / 2
    lo = -gap / 2 - width * rng.random(k)
    hi = gap / 2 + width * rng.random(n - k)
    w = np.sort(np.concatenate([lo, hi]))
    g = random_unitary(n, seed + 20_000)
    X = g @ np.diag(w) @ g.conj().T
    return 0.5 * (X + X.conj().T), 0.0, k, w


def oracle_projector(X, cut):
    """Sum of ``v v*`` over eigenvectors with eigenvalue below ``cut``."""
    w, V = np.linalg.eigh(X)
    Vk = V[:, w < cut]
    return Vk @ Vk.conj().T


def max_principal_angle(A, B):
    from scipy.linalg import subspace_angles

    return float(np.max(subspace_angles(A, B)))


def greedy_eigenline_permutation(mats):
    """Brute-force tracking: eigh at each sample, greedy best-overlap matching.

    Returns the end-to-start permutation (``perm[i]`` = start label of the
    line that ends in column ``i``) or None when an end line has no start
    line with overlap >= 1/sqrt(2).
    """
    _, V = np.linalg.eigh(mats[0])
    start = cur = V
    n = V.shape[0]
    for X in mats[1:]:
        _, W = np.linalg.eigh(X)
        S = np.abs(cur.conj().T @ W)
        order = np.empty(n, dtype=int)
        rows, cols = set(), set()
        for flat in np.argsort(-S, axis=None):
            i, j = divmod(int(flat), n)
            if i not in rows and j not in cols:
                order[i] = j
                rows.add(i)
                cols.add(j)
        cur = W[:, order]
    S = np.abs(start.conj().T @ cur)
    perm = []
    for i in range(n):
        j = int(np.argmax(S[:, i]))
        if S[j, i] < 1 / np.sqrt(2):
            return None
        perm.append(j)
    if len(set(perm)) != n:
        return None
    return tuple(perm)
