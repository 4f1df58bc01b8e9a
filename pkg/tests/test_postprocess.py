"""Tests for pattern filling, deflation, and variance metrics."""

import numpy as np
import pytest
import scipy.linalg

from sparsepca import (
    FillProblem,
    PenaltyConfig,
    StopRule,
    adjusted_variance,
    alternating_fill,
    deflate,
    fill_single_l1,
    init_column,
    sequential_extract,
    solve_single,
    variance,
)

TIGHT = StopRule(relative_tolerance=1e-12)


def random_pattern(rng, n, m=None, frac=0.5):
    shape = (n,) if m is None else (n, m)
    pattern = (rng.random(shape) >= frac).astype(np.uint8)
    flat = pattern.reshape(-1)
    if (flat == 0).sum() == 0:
        flat[0] = 0
    return pattern


class TestFillSingle:
    def test_all_active_is_full_pca(self):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((6, 14))
        x, z = fill_single_l1(a, np.zeros(14, dtype=np.uint8))
        sigma = np.linalg.svd(a, compute_uv=False)[0]
        assert variance(a, z) == pytest.approx(sigma**2, abs=1e-8)
        assert np.linalg.norm(a @ z - (z @ (a.T @ x)) * x) <= 1e-6

    def test_single_active_column(self):
        a = np.array([[1.0, 0.0], [0.0, 2.0], [0.0, 1.0]])
        pattern = np.array([1, 0], dtype=np.uint8)
        x, z = fill_single_l1(a, pattern)
        assert np.allclose(np.abs(z), [0.0, 1.0], atol=1e-12)
        assert abs(x @ (a[:, 1] / np.linalg.norm(a[:, 1]))) == pytest.approx(
            1.0, abs=1e-12
        )

    def test_variance_matches_submatrix_eigen_oracle(self):
        rng = np.random.default_rng(1)
        a = rng.standard_normal((8, 20))
        pattern = np.ones(20, dtype=np.uint8)
        pattern[rng.choice(20, size=5, replace=False)] = 0
        _, z = fill_single_l1(a, pattern)
        sub = a[:, pattern == 0]
        lam = np.linalg.eigvalsh(sub.T @ sub).max()
        assert variance(a, z) == pytest.approx(lam, abs=1e-8)

    def test_all_inactive_returns_zero(self):
        a = np.eye(3)
        x, z = fill_single_l1(a, np.ones(3, dtype=np.uint8))
        assert np.all(z == 0.0)
        assert np.linalg.norm(x) == pytest.approx(1.0)

    def test_small_active_sets_match_brute_force(self):
        rng = np.random.default_rng(2)
        for _ in range(25):
            n = int(rng.integers(6, 16))
            a = rng.standard_normal((5, n))
            k = int(rng.integers(1, 6))
            pattern = np.ones(n, dtype=np.uint8)
            pattern[rng.choice(n, size=k, replace=False)] = 0
            _, z = fill_single_l1(a, pattern)
            sub = a[:, pattern == 0]
            lam = np.linalg.eigvalsh(sub.T @ sub).max()
            assert variance(a, z) == pytest.approx(lam, abs=1e-8)


class TestAlternatingFill:
    def test_m1_matches_exact_fill(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            a = rng.standard_normal((7, 18))
            pattern = random_pattern(rng, 18)
            _, z_exact = fill_single_l1(a, pattern)
            fill = alternating_fill(
                FillProblem(a, pattern[:, None], np.ones(1), init_column(a)[:, None]),
                stop=TIGHT,
            )
            v1, v2 = variance(a, z_exact), variance(a, fill.z[:, 0])
            assert v2 == pytest.approx(v1, rel=1e-6)

    def test_all_active_distinct_weights_recover_pca(self):
        rng = np.random.default_rng(4)
        a = rng.standard_normal((8, 22))
        m = 3
        x0 = np.linalg.qr(rng.standard_normal((8, m)))[0]
        fill = alternating_fill(
            FillProblem(a, np.zeros((22, m), dtype=np.uint8), np.array([3.0, 2.0, 1.0]), x0),
            stop=TIGHT,
        )
        u, _, vt = np.linalg.svd(a, full_matrices=False)
        assert np.max(scipy.linalg.subspace_angles(fill.x, u[:, :m])) <= 1e-4
        assert np.max(scipy.linalg.subspace_angles(fill.z, vt[:m].T)) <= 1e-4

    def test_all_inactive_returns_zero_immediately(self):
        a = np.eye(4)
        x0 = np.linalg.qr(np.random.default_rng(5).standard_normal((4, 2)))[0]
        fill = alternating_fill(
            FillProblem(a, np.ones((4, 2), dtype=np.uint8), np.ones(2), x0)
        )
        assert np.all(fill.z == 0.0)
        assert fill.sweeps == 0
        assert fill.zero_columns.all()

    def test_objective_nondecreasing_per_sweep(self):
        rng = np.random.default_rng(6)
        for _ in range(30):
            p = int(rng.integers(3, 10))
            n = int(rng.integers(5, 25))
            m = int(rng.integers(1, min(p, 4) + 1))
            a = rng.standard_normal((p, n))
            pattern = random_pattern(rng, n, m)
            mu = rng.uniform(0.5, 3.0, m)
            x0 = np.linalg.qr(rng.standard_normal((p, m)))[0]
            fill = alternating_fill(FillProblem(a, pattern, mu, x0), stop=TIGHT)
            assert np.all(np.diff(fill.objectives) >= -1e-12)

    def test_stationarity_of_active_parts(self):
        rng = np.random.default_rng(7)
        a = rng.standard_normal((6, 15))
        pattern = random_pattern(rng, 15, 2)
        mu = np.array([2.0, 1.0])
        x0 = np.linalg.qr(rng.standard_normal((6, 2)))[0]
        fill = alternating_fill(FillProblem(a, pattern, mu, x0), stop=StopRule(1e-14))
        g = (a.T @ fill.x) * mu[None, :]
        for j in range(2):
            active = pattern[:, j] == 0
            if fill.zero_columns[j]:
                continue
            gj = g[active, j]
            assert np.linalg.norm(fill.z[active, j] - gj / np.linalg.norm(gj)) <= 1e-6

    def test_unit_or_zero_columns_and_pattern_zeros(self):
        rng = np.random.default_rng(8)
        a = rng.standard_normal((5, 12))
        pattern = random_pattern(rng, 12, 3)
        fill = alternating_fill(
            FillProblem(a, pattern, np.ones(3), np.linalg.qr(rng.standard_normal((5, 3)))[0])
        )
        assert np.all(fill.z[pattern == 1] == 0.0)
        norms = np.linalg.norm(fill.z, axis=0)
        for j in range(3):
            assert norms[j] == pytest.approx(0.0 if fill.zero_columns[j] else 1.0, abs=1e-8)

    def test_rejects_non_orthonormal_start(self):
        a = np.eye(3)
        with pytest.raises(ValueError):
            alternating_fill(
                FillProblem(a, np.zeros((3, 2), dtype=np.uint8), np.ones(2), np.ones((3, 2)))
            )


class TestDeflate:
    def test_removes_selected_column(self):
        residual = deflate(np.diag([1.0, 2.0]), np.array([0.0, 1.0]))
        assert np.allclose(residual, np.diag([1.0, 0.0]), atol=1e-14)

    def test_residual_spectrum_drops_to_second_singular_value(self):
        rng = np.random.default_rng(9)
        a = rng.standard_normal((6, 10))
        s = np.linalg.svd(a, compute_uv=False)
        v1 = np.linalg.svd(a)[2][0]
        residual = deflate(a, v1)
        assert np.linalg.svd(residual, compute_uv=False)[0] == pytest.approx(
            s[1], abs=1e-10
        )

    def test_annihilates_the_loading_vector(self):
        rng = np.random.default_rng(10)
        for _ in range(20):
            a = rng.standard_normal((5, 9))
            z = rng.standard_normal(9)
            z /= np.linalg.norm(z)
            assert np.linalg.norm(deflate(a, z) @ z) <= 1e-10 * np.linalg.norm(a)

    def test_two_orthogonal_deflations_reduce_rank_by_at_most_two(self):
        rng = np.random.default_rng(11)
        a = rng.standard_normal((6, 8))
        z1 = np.eye(8)[:, 0]
        z2 = np.eye(8)[:, 1]
        residual = deflate(deflate(a, z1), z2)
        assert np.linalg.matrix_rank(residual) >= np.linalg.matrix_rank(a) - 2


class TestVariance:
    def test_first_principal_component(self):
        rng = np.random.default_rng(12)
        a = rng.standard_normal((7, 11))
        s = np.linalg.svd(a, compute_uv=False)[0]
        v1 = np.linalg.svd(a)[2][0]
        assert variance(a, v1) == pytest.approx(s**2, abs=1e-10)

    def test_zero_loading(self):
        assert variance(np.eye(3), np.zeros(3)) == 0.0

    def test_matches_direct_product(self):
        rng = np.random.default_rng(13)
        a = rng.standard_normal((4, 9))
        z = rng.standard_normal(9)
        y = a @ z
        assert variance(a, z) == pytest.approx(float(y @ y), abs=1e-12)


class TestSequentialExtract:
    def test_exact_diagonal_case(self):
        a = np.diag([1.0, 2.0, 3.0])
        results, avar = sequential_extract(a, PenaltyConfig("l1", 0.0), 2, stop=TIGHT)
        assert np.allclose(np.abs(results[0].z_star), [0.0, 0.0, 1.0], atol=1e-10)
        assert np.allclose(np.abs(results[1].z_star), [0.0, 1.0, 0.0], atol=1e-10)
        assert avar == pytest.approx(13.0, abs=1e-8)

    def test_m1_is_a_plain_solve(self):
        rng = np.random.default_rng(14)
        a = rng.standard_normal((5, 13))
        penalty = PenaltyConfig("l1", 0.3 * np.linalg.norm(a, axis=0).max())
        results, avar = sequential_extract(a, penalty, 1, stop=TIGHT)
        direct = solve_single(a, penalty, stop=TIGHT)
        assert np.allclose(results[0].z_star, direct.z_star, atol=1e-12)
        assert avar == pytest.approx(variance(a, direct.z_star), rel=1e-10)

    def test_adjusted_variance_never_exceeds_summed_variances(self):
        rng = np.random.default_rng(15)
        a = rng.standard_normal((8, 16))
        a[:, 8:] = a[:, :8] + 0.1 * rng.standard_normal((8, 8))  # correlated block
        results, avar = sequential_extract(a, PenaltyConfig("l1", 1.0), 3)
        total = sum(variance(a, r.z_star) for r in results)
        assert avar <= total + 1e-9

    def test_suppressed_stage_yields_zero_component_and_continues(self):
        a = np.diag([1.0, 2.0, 3.0])
        results, avar = sequential_extract(a, PenaltyConfig("l1", 2.5), 3, stop=TIGHT)
        assert not results[0].fully_suppressed
        assert results[1].fully_suppressed and results[2].fully_suppressed
        assert np.all(results[1].z_star == 0.0)
        assert avar == pytest.approx(9.0, abs=1e-10)
