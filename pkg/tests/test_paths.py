import numpy as np
import pytest
from scipy.linalg import expm

from eigres.exceptions import (
    DegenerateInterior,
    GapLost,
    MatchAmbiguous,
    StepTooCoarse,
    UnknownName,
    ValidationError,
)
from eigres.hermitian import random_hermitian, random_unitary
from eigres.paths import (
    MatrixPath,
    builtin_path,
    curve4x4_lambda,
    curve4x4_matrix,
    loop2x2_matrix,
    probe_smoothness,
    ray3_function,
    track_cluster,
    track_eigenlines,
)
from helpers import greedy_eigenline_permutation, max_principal_angle, oracle_projector


def constant_path(X, steps=16):
    return MatrixPath(np.linspace(0, 1, steps + 1), np.array([X] * (steps + 1)))


def random_smooth_path(seed, steps=200):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    H = random_hermitian(n, seed)
    H /= np.linalg.norm(H, 2)
    spin = rng.uniform(0.0, np.pi)
    d0 = np.arange(n, dtype=float) + 0.3 * rng.random(n)
    d1 = 0.2 * rng.normal(size=n)

    w, V = np.linalg.eigh(H)

    def func(t):
        g = (V * np.exp(1j * spin * t * w)) @ V.conj().T
        return g @ np.diag(d0 + t * d1) @ g.conj().T

    return MatrixPath.from_function(func, steps)


class TestMatrixPath:
    def test_validation(self):
        with pytest.raises(ValidationError):
            MatrixPath([0, 0.5], np.zeros((2, 2, 2)))
        with pytest.raises(ValidationError):
            MatrixPath([0, 0.7, 0.5, 1], np.zeros((4, 2, 2)))
        with pytest.raises(ValidationError):
            MatrixPath([0], np.zeros((1, 2, 2)))

    def test_refinement_halves_step(self):
        p = builtin_path("loop2x2", 64)
        q = p.refined()
        assert q.steps == 128
        assert q.step_bound <= 0.51 * p.step_bound
        with pytest.raises(ValidationError):
            constant_path(np.eye(2)).refined()


class TestBuiltins:
    def test_loop2x2_unit_sphere(self):
        p = builtin_path("loop2x2", 256)
        assert len(p) == 257
        for X in p.mats:
            np.testing.assert_allclose(np.linalg.eigvalsh(X), [-1, 1], atol=1e-14)

    def test_curve4x4_start(self):
        p = builtin_path("curve4x4", 512)
        np.testing.assert_allclose(np.linalg.eigvalsh(p.mats[0]), [-1, -1, 1, 1], atol=1e-14)

    def test_curve4x4_gap(self):
        p = builtin_path("curve4x4", 512)
        w = np.array([np.linalg.eigvalsh(X) for X in p.mats])
        assert np.min(np.minimum(-w[:, 1], w[:, 2])) >= 0.3 / 2
        assert np.min(w[:, 2] - w[:, 1]) >= 0.3

    def test_curve4x4_continuous(self):
        t = np.linspace(0, 1, 4001)
        lam = np.array([curve4x4_lambda(s) for s in t])
        assert np.max(np.abs(np.diff(lam, axis=0))) <= 2e-3
        for s in (1 / 3, 2 / 3):
            np.testing.assert_allclose(curve4x4_matrix(s - 1e-9), curve4x4_matrix(s + 1e-9), atol=1e-7)

    def test_ray3_double_point(self):
        w = np.linalg.eigvalsh(ray3_function()(0.5))
        np.testing.assert_allclose(w, [1, 1, 4], atol=1e-12)

    def test_errors(self):
        with pytest.raises(UnknownName):
            builtin_path("spiral", 64)
        with pytest.raises(ValidationError):
            builtin_path("loop2x2", 8)


class TestTrackCluster:
    def test_constant(self):
        r = track_cluster(constant_path(np.diag([-1.0, 1.0]).astype(complex)), 0.0)
        assert r.permutation == (0, 1)
        assert np.max(r.principal_angles) <= 1e-12 and not r.swap_detected

    def test_curve4x4_swap(self):
        r = track_cluster(builtin_path("curve4x4", 512), 0.0, keep_frames=True)
        e = np.eye(4)
        assert max_principal_angle(r.start_object, e[:, :2]) <= 1e-8
        assert max_principal_angle(r.end_object, e[:, 2:]) <= 1e-6
        assert r.swap_detected and r.permutation == (1, 0)

    def test_contractible_unitary_loop(self):
        # g(t) = exp(2 pi i t H) with integer spectrum and zero trace: a contractible loop
        V = random_unitary(4, 12)
        H = V @ np.diag([1.0, -1.0, 2.0, -2.0]) @ V.conj().T
        D = np.diag([-1.0, -0.5, 1.0, 2.0])

        def func(t):
            g = expm(2j * np.pi * t * H)
            return g @ D @ g.conj().T

        coarse = track_cluster(MatrixPath.from_function(func, 100), 0.0)
        fine = track_cluster(MatrixPath.from_function(func, 1000), 0.0)
        assert not coarse.swap_detected and not fine.swap_detected
        assert coarse.permutation == fine.permutation == (0, 1)
        assert np.max(np.abs(coarse.principal_angles - fine.principal_angles)) <= 1e-6

    def test_projector_functorial(self):
        p = builtin_path("ray3", 64)
        r = track_cluster(p, 2.5, keep_frames=True)
        for X, F in zip(p.mats, r.frames):
            P = oracle_projector(X, 2.5)
            w, V = np.linalg.eigh(P)
            assert max_principal_angle(F, V[:, w > 0.5]) <= 1e-8

    def test_gap_lost(self):
        path = MatrixPath([0, 0.5, 1], np.array([np.diag([-1.0, 1.0]), np.diag([1.0, 2.0]),
                                                  np.diag([1.0, 3.0])]))
        with pytest.raises(GapLost):
            track_cluster(path, 0.0)

    def test_step_too_coarse(self):
        X = np.array([[1.0, 0], [0, -1.0]])
        with pytest.raises(StepTooCoarse):
            track_cluster(MatrixPath([0, 1], np.array([X, -X])), 0.0)
        # loop2x2 in 4 steps turns the eigenlines by 45 degrees per step: still fine
        track_cluster(MatrixPath.from_function(loop2x2_matrix, 4), 0.0)
        with pytest.raises(StepTooCoarse):
            track_cluster(MatrixPath.from_function(loop2x2_matrix, 1), 0.0)

    def test_cut_outside_spectrum(self):
        with pytest.raises(ValidationError):
            track_cluster(constant_path(np.diag([1.0, 2.0])), 0.0)


class TestTrackEigenlines:
    def test_loop2x2_transposition(self):
        r = track_eigenlines(builtin_path("loop2x2", 256))
        assert r.permutation == (1, 0) and r.swap_detected
        assert np.max(r.principal_angles) <= 1e-8
        # the -1 line ends on span(1, 0)
        assert abs(abs(r.end_object[0, 0]) - 1) <= 1e-8

    def test_loop2x2_doubled(self):
        r = track_eigenlines(builtin_path("loop2x2", 512, turns=2))
        assert r.permutation == (0, 1) and not r.swap_detected
        assert np.max(r.principal_angles) <= 1e-8

    def test_constant_diagonal(self):
        r = track_eigenlines(constant_path(np.diag([1.0, 2.0, 3.0]).astype(complex)))
        assert r.permutation == (0, 1, 2)

    def test_scalar_phase_loop(self):
        D = np.diag([1.0, 2.0, 3.0]).astype(complex)

        def func(t):
            g = np.exp(2j * np.pi * t) * np.eye(3)
            return g @ D @ g.conj().T

        r = track_eigenlines(MatrixPath.from_function(func, 32))
        assert r.permutation == (0, 1, 2)

    def test_degenerate_interior(self):
        def func(t):
            return np.diag([t - 0.5, 0.5 - t]).astype(complex)

        with pytest.raises(DegenerateInterior):
            track_eigenlines(MatrixPath.from_function(func, 16))

    def test_degenerate_endpoint_allowed(self):
        def func(t):
            return np.diag([-t, t]).astype(complex)

        r = track_eigenlines(MatrixPath.from_function(func, 16))
        assert r.permutation == (0, 1)

    def test_match_ambiguous(self):
        # Fourier eigenbasis: every overlap with the standard basis is 1/sqrt(3)
        F = np.exp(2j * np.pi * np.outer(range(3), range(3)) / 3) / np.sqrt(3)
        D = np.diag([1.0, 2.0, 3.0])
        with pytest.raises(MatchAmbiguous):
            track_eigenlines(MatrixPath([0, 1], np.array([D, F @ D @ F.conj().T])))

    def test_oracle_equivalence(self):
        for seed in range(50):
            path = random_smooth_path(seed)
            r = track_eigenlines(path)
            assert r.permutation == greedy_eigenline_permutation(path.mats), seed


class TestRefinementStability:
    @pytest.mark.parametrize("name, steps, tracker", [
        ("loop2x2", 256, "lines"), ("curve4x4", 512, "cluster"), ("ray3", 256, "cluster"),
    ])
    def test_builtin(self, name, steps, tracker):
        cut = {"curve4x4": 0.0, "ray3": 2.5}.get(name)
        reports = []
        for s in (steps, 2 * steps):
            p = builtin_path(name, s)
            reports.append(track_eigenlines(p) if tracker == "lines" else track_cluster(p, cut))
        assert np.max(np.abs(reports[0].principal_angles - reports[1].principal_angles)) <= 1e-6


class TestProbe:
    def test_ray3(self):
        res = probe_smoothness(ray3_function(), 0.5, (-1.0, 2.5))
        assert np.nanmax(res.ratios) <= 2.0
        assert res.raw_jump >= 0.1
        assert np.all(np.isfinite(res.second_differences))
