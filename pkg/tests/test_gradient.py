"""Tests for the linearize-and-step maximization scheme."""

import numpy as np
import pytest

from sparsepca import (
    NotConvexError,
    ObjectiveOracle,
    Sphere,
    Stiefel,
    StopRule,
    ZeroDirectionError,
    domain_step,
    maximize,
    optimality_measure,
    power_method,
    procrustes,
    rate_bound_check,
    shifted_power_method,
)

TIGHT = StopRule(relative_tolerance=1e-12)


def quadratic_oracle(c):
    return ObjectiveOracle(
        value=lambda x: 0.5 * float(x @ (c @ x)),
        subgrad=lambda x: c @ x,
    )


def random_psd(rng, p, lo=0.3, hi=3.0):
    q, _ = np.linalg.qr(rng.standard_normal((p, p)))
    lam = rng.uniform(lo, hi, p)
    return (q * lam) @ q.T, lam.min(), lam.max()


def random_stiefel(rng, p, m):
    q, _ = np.linalg.qr(rng.standard_normal((p, m)))
    return q


class TestMaximize:
    def test_quadratic_on_circle_reaches_top_eigenvalue(self):
        c = np.diag([3.0, 1.0])
        x0 = np.array([1.0, 1.0]) / np.sqrt(2.0)
        trace = maximize(quadratic_oracle(c), Sphere(dim=2), x0, stop=TIGHT)
        assert trace.objectives[-1] == pytest.approx(1.5, abs=1e-8)
        assert abs(trace.x[0]) == pytest.approx(1.0, abs=1e-6)

    def test_linear_objective_converges_in_one_step(self):
        c = np.array([0.0, 1.0])
        oracle = ObjectiveOracle(value=lambda x: float(c @ x), subgrad=lambda x: c)
        trace = maximize(oracle, Sphere(dim=2), np.array([1.0, 0.0]))
        assert np.allclose(trace.x, [0.0, 1.0], atol=1e-14)
        assert trace.objectives[-1] == pytest.approx(1.0)

    def test_constant_on_stiefel_stops_immediately(self):
        oracle = ObjectiveOracle(
            value=lambda x: 0.5 * float(np.vdot(x, x)),
            subgrad=lambda x: x,
        )
        x0 = np.eye(3)[:, :2]
        trace = maximize(oracle, Stiefel(3, 2), x0)
        assert trace.iterations == 1
        assert trace.termination == "converged"
        assert trace.objectives[-1] == pytest.approx(1.0, abs=1e-14)

    def test_zero_subgradient_terminates(self):
        oracle = ObjectiveOracle(value=lambda x: 0.0, subgrad=lambda x: np.zeros_like(x))
        trace = maximize(oracle, Sphere(dim=3), np.array([1.0, 0.0, 0.0]))
        assert trace.termination == "stationary_zero_subgradient"
        assert trace.iterations == 0

    def test_rejects_infeasible_start(self):
        with pytest.raises(ValueError):
            maximize(quadratic_oracle(np.eye(2)), Sphere(dim=2), np.array([1.0, 1.0]))

    def test_objective_monotone_and_iterates_feasible(self):
        rng = np.random.default_rng(17)
        for _ in range(40):
            p = int(rng.integers(2, 12))
            c, _, _ = random_psd(rng, p)
            seen = []
            base = quadratic_oracle(c)

            def spying_subgrad(x, base=base, seen=seen):
                seen.append(abs(np.linalg.norm(x) - 1.0))
                return base.subgrad(x)

            oracle = ObjectiveOracle(value=base.value, subgrad=spying_subgrad)
            x0 = rng.standard_normal(p)
            x0 /= np.linalg.norm(x0)
            trace = maximize(oracle, Sphere(dim=p), x0, stop=TIGHT)
            assert np.all(np.diff(trace.objectives) >= -1e-12)
            assert max(seen) <= 1e-8

    def test_not_convex_detected_on_concave_quadratic(self):
        c = np.diag([-3.0, -1.0])
        x0 = np.array([0.8, 0.6])
        with pytest.raises(NotConvexError):
            maximize(quadratic_oracle(c), Sphere(dim=2), x0, stop=TIGHT)


class TestDomainStep:
    def test_sphere_scales_gradient(self):
        step = domain_step(np.array([3.0, 4.0]), Sphere(dim=2, radius=2.0))
        assert np.allclose(step, [1.2, 1.6], atol=1e-14)

    def test_stiefel_identity(self):
        assert np.allclose(domain_step(np.eye(2), Stiefel(2, 2)), np.eye(2), atol=1e-14)

    def test_zero_direction_rejected_on_sphere(self):
        with pytest.raises(ZeroDirectionError):
            domain_step(np.zeros(3), Sphere(dim=3))

    def test_stiefel_step_maximizes_linear_form(self):
        rng = np.random.default_rng(23)
        g = rng.standard_normal((4, 2))
        step = domain_step(g, Stiefel(4, 2))
        best = np.vdot(g, step)
        for _ in range(100):
            x = random_stiefel(rng, 4, 2)
            assert best + 1e-12 >= np.vdot(g, x)

    def test_sphere_step_maximizes_linear_form(self):
        rng = np.random.default_rng(29)
        g = rng.standard_normal(6)
        step = domain_step(g, Sphere(dim=6, radius=1.5))
        best = g @ step
        for _ in range(100):
            y = rng.standard_normal(6)
            y *= 1.5 / np.linalg.norm(y)
            assert best + 1e-12 >= g @ y


class TestOptimalityMeasure:
    def test_zero_at_critical_points(self):
        oracle = quadratic_oracle(np.diag([3.0, 1.0]))
        dom = Sphere(dim=2)
        assert optimality_measure(oracle, dom, np.array([1.0, 0.0])) == pytest.approx(
            0.0, abs=1e-14
        )
        assert optimality_measure(oracle, dom, np.array([0.0, 1.0])) == pytest.approx(
            0.0, abs=1e-14
        )

    def test_interior_point_matches_grid_search(self):
        oracle = quadratic_oracle(np.diag([3.0, 1.0]))
        x = np.array([1.0, 1.0]) / np.sqrt(2.0)
        delta = optimality_measure(oracle, Sphere(dim=2), x)
        assert delta == pytest.approx(0.2360679774997898, abs=1e-12)
        # independent oracle: exhaustive search over the unit circle
        theta = np.linspace(0.0, 2.0 * np.pi, 100000, endpoint=False)
        ys = np.vstack([np.cos(theta), np.sin(theta)])
        g = np.diag([3.0, 1.0]) @ x
        grid_delta = (g @ ys).max() - g @ x
        assert delta == pytest.approx(grid_delta, abs=1e-6)

    def test_nonnegative_and_dominates_samples_on_stiefel(self):
        rng = np.random.default_rng(31)
        c = rng.standard_normal((5, 10))
        gram = c @ c.T

        oracle = ObjectiveOracle(
            value=lambda x: 0.5 * float(np.vdot(x, gram @ x)),
            subgrad=lambda x: gram @ x,
        )
        x = random_stiefel(rng, 5, 2)
        delta = optimality_measure(oracle, Stiefel(5, 2), x)
        assert delta >= 0.0
        g = gram @ x
        for _ in range(200):
            y = random_stiefel(rng, 5, 2)
            assert delta + 1e-10 >= np.vdot(g, y - x)


class TestRateBound:
    def test_power_run_satisfies_rate(self):
        c = np.diag([3.0, 1.0])
        x0 = np.array([1.0, 1.0]) / np.sqrt(2.0)
        trace = power_method(c, x0, stop=TIGHT, record_deltas=True)
        assert rate_bound_check(trace, 1.5)

    def test_one_step_linear_objective(self):
        c = np.array([0.0, 2.0])
        oracle = ObjectiveOracle(value=lambda x: float(c @ x), subgrad=lambda x: c)
        trace = maximize(
            oracle, Sphere(dim=2), np.array([1.0, 0.0]), record_deltas=True
        )
        assert rate_bound_check(trace, float(np.linalg.norm(c)) + 1e-12)

    def test_requires_recorded_deltas(self):
        trace = power_method(np.eye(2), np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            rate_bound_check(trace, 0.5)

    def test_seeded_psd_suite(self):
        rng = np.random.default_rng(37)
        for _ in range(10):
            c, _, lam_max = random_psd(rng, 10)
            x0 = rng.standard_normal(10)
            x0 /= np.linalg.norm(x0)
            trace = power_method(c, x0, stop=TIGHT, record_deltas=True)
            assert rate_bound_check(trace, 0.5 * lam_max)


class TestPowerMethod:
    def test_recovers_top_eigenvalue(self):
        c = np.diag([3.0, 1.0])
        x0 = np.array([1.0, 1.0]) / np.sqrt(2.0)
        trace = power_method(c, x0, stop=TIGHT)
        assert 2.0 * trace.objectives[-1] == pytest.approx(3.0, abs=1e-8)

    def test_identity_converges_immediately(self):
        trace = power_method(np.eye(4), np.eye(4)[:, 0])
        assert trace.iterations == 1
        assert 2.0 * trace.objectives[-1] == pytest.approx(1.0, abs=1e-14)

    def test_matches_eigen_oracle(self):
        rng = np.random.default_rng(41)
        c, _, _ = random_psd(rng, 8)
        x0 = rng.standard_normal(8)
        x0 /= np.linalg.norm(x0)
        trace = power_method(c, x0, stop=TIGHT)
        assert 2.0 * trace.objectives[-1] == pytest.approx(
            np.linalg.eigvalsh(c).max(), abs=1e-8
        )

    def test_step_norm_energy_bound(self):
        rng = np.random.default_rng(43)
        for _ in range(10):
            c, lam_min, lam_max = random_psd(rng, 10)
            x0 = rng.standard_normal(10)
            x0 /= np.linalg.norm(x0)
            trace = power_method(c, x0, stop=TIGHT, record_steps=True)
            bound = (lam_max - x0 @ (c @ x0)) / (2.0 * lam_min)
            assert float(np.sum(trace.step_norms**2)) <= bound + 1e-9


class TestShiftedPowerMethod:
    def test_shift_cancels_in_report(self):
        c = np.diag([1.0, -2.0])
        trace, lam = shifted_power_method(c, 3.0, np.array([0.6, 0.8]), stop=TIGHT)
        assert lam == pytest.approx(1.0, abs=1e-8)

    def test_zero_matrix_any_start_is_stationary(self):
        c = np.zeros((2, 2))
        x0 = np.array([0.6, 0.8])
        trace, lam = shifted_power_method(c, 1.0, x0)
        assert trace.iterations == 1
        assert lam == pytest.approx(0.0, abs=1e-14)
        assert np.allclose(trace.x, x0, atol=1e-14)

    def test_indefinite_matches_eigen_oracle(self):
        rng = np.random.default_rng(47)
        b = rng.standard_normal((6, 6))
        c = 0.5 * (b + b.T)
        omega = float(np.linalg.norm(c, "fro")) + 1.0
        x0 = rng.standard_normal(6)
        x0 /= np.linalg.norm(x0)
        _, lam = shifted_power_method(c, omega, x0, stop=TIGHT)
        assert lam == pytest.approx(np.linalg.eigvalsh(c).max(), abs=1e-8)

    def test_insufficient_shift_rejected(self):
        c = np.diag([1.0, -2.0])
        with pytest.raises(NotConvexError):
            shifted_power_method(c, 1.0, np.array([0.6, 0.8]))


class TestProcrustes:
    def test_identity_map_recovers_target(self):
        rng = np.random.default_rng(53)
        c = random_stiefel(rng, 5, 2)
        x0 = random_stiefel(rng, 5, 2)
        trace, residual = procrustes(
            c, np.eye(5), 2.0, x0, stop=StopRule(relative_tolerance=1e-15)
        )
        assert residual == pytest.approx(0.0, abs=1e-12)
        assert np.allclose(trace.x, c, atol=1e-6)

    def test_scaled_identity_target(self):
        c = 2.0 * np.eye(2)
        x0 = np.array([[0.0, 1.0], [1.0, 0.0]])
        trace, residual = procrustes(c, np.eye(2), 2.0, x0, stop=TIGHT)
        assert np.allclose(trace.x, np.eye(2), atol=1e-8)
        assert residual == pytest.approx(2.0, abs=1e-10)

    def test_beats_random_sampling_oracle(self):
        rng = np.random.default_rng(59)
        c = rng.standard_normal((6, 2))
        d = rng.standard_normal((6, 6))
        omega = float(np.linalg.eigvalsh(d.T @ d).max()) + 1.0
        x0 = random_stiefel(rng, 6, 2)
        _, residual = procrustes(c, d, omega, x0, stop=TIGHT)
        for _ in range(500):
            x = random_stiefel(rng, 6, 2)
            misfit = c - d @ x
            assert residual <= float(np.vdot(misfit, misfit)) + 1e-10
