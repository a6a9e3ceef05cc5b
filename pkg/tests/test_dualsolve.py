import numpy as np
import pytest
from scipy.optimize import brentq

from entrosdp.dualsolve import (
    DiagonalProblem,
    TraceProblem,
    dual_objective_exact,
    minorizer_exact,
    newton_step,
    scaling_step,
    smooth_trajectory,
    solve_diagonal,
    solve_trace,
    trace_derivatives_exact,
)
from entrosdp.linop import DualShiftedOperator, SparseSymMatrix, SpectralInterval, gershgorin_interval
from entrosdp.matfunc import HALF_EXPONENTIAL, dense_reference, fermi_dirac

from test_linop import random_sparse_sym


def diag_problem(n, seed, beta=10.0, scale=0.3, density=0.15, b=None):
    c = random_sparse_sym(n, density, seed, scale=scale)
    return DiagonalProblem(C=c, b=np.ones(n) if b is None else b, beta=beta)


class TestScalingStep:
    def test_fixed_point(self):
        lam = np.array([0.3, -0.2])
        b = np.array([1.0, 2.0])
        assert np.array_equal(scaling_step(lam, b.copy(), b, 5.0), lam)

    def test_log_e_shift(self):
        lam = np.zeros(3)
        out = scaling_step(lam, np.e * np.ones(3), np.ones(3), 1.0)
        assert np.allclose(out, -1.0)

    def test_beta_scaling(self):
        out = scaling_step(np.zeros(1), np.array([2.0]), np.array([1.0]), 10.0)
        assert out[0] == pytest.approx(-np.log(2.0) / 10.0)

    def test_nonpositive_estimate_rejected(self):
        with pytest.raises(ValueError):
            scaling_step(np.zeros(2), np.array([1.0, 0.0]), np.ones(2), 1.0)


class TestDualObjective:
    def test_scalar_formula(self):
        prob = DiagonalProblem(C=SparseSymMatrix.zeros(1), b=np.ones(1), beta=1.0)
        assert dual_objective_exact(prob, np.zeros(1)) == pytest.approx(-1.0)
        lam = np.array([0.5])
        assert dual_objective_exact(prob, lam) == pytest.approx(0.5 - np.exp(0.5))

    def test_zero_lambda(self):
        prob = diag_problem(8, 0, beta=2.0)
        ref = dense_reference(
            DualShiftedOperator(prob.C, "diagonal", np.zeros(8)), 2.0, HALF_EXPONENTIAL
        )
        assert dual_objective_exact(prob, np.zeros(8)) == pytest.approx(-ref.trace_exp / 2.0)

    def test_scalar_maximizer_at_origin(self):
        prob = DiagonalProblem(C=SparseSymMatrix.zeros(1), b=np.ones(1), beta=3.0)
        g0 = dual_objective_exact(prob, np.zeros(1))
        for eps in (-1e-3, 1e-3):
            assert dual_objective_exact(prob, np.array([eps])) < g0

    @pytest.mark.parametrize("seed", range(3))
    def test_gradient_matches_finite_differences(self, seed):
        prob = diag_problem(10, seed, beta=4.0)
        rng = np.random.default_rng(seed + 50)
        lam = rng.standard_normal(10) * 0.1
        ref = dense_reference(
            DualShiftedOperator(prob.C, "diagonal", lam), prob.beta, HALF_EXPONENTIAL
        )
        grad = prob.b - np.diag(ref.x)
        h = 1e-5
        for i in range(10):
            e = np.zeros(10)
            e[i] = h
            fd = (dual_objective_exact(prob, lam + e) - dual_objective_exact(prob, lam - e)) / (2 * h)
            assert abs(fd - grad[i]) <= 1e-6 * max(abs(grad[i]), 1.0)


class TestMinorizer:
    def test_touches_at_base_point(self):
        prob = diag_problem(8, 1, beta=3.0)
        lam0 = np.random.default_rng(2).standard_normal(8) * 0.2
        assert minorizer_exact(prob, lam0, lam0) == pytest.approx(
            dual_objective_exact(prob, lam0), abs=1e-10
        )

    def test_golden_thompson_lower_bound(self):
        prob = diag_problem(16, 3, beta=5.0)
        rng = np.random.default_rng(4)
        for _ in range(100):
            lam0 = rng.standard_normal(16) * 0.3
            lam = rng.standard_normal(16) * 0.3
            assert minorizer_exact(prob, lam0, lam) <= dual_objective_exact(prob, lam) + 1e-10

    def test_argmax_is_scaling_step(self):
        prob = diag_problem(8, 5, beta=4.0)
        lam0 = np.random.default_rng(6).standard_normal(8) * 0.1
        a = np.diag(
            dense_reference(
                DualShiftedOperator(prob.C, "diagonal", lam0), prob.beta, HALF_EXPONENTIAL
            ).x
        )
        lam1 = scaling_step(lam0, a, prob.b, prob.beta)
        g_at_step = minorizer_exact(prob, lam0, lam1)
        rng = np.random.default_rng(7)
        for _ in range(20):
            assert minorizer_exact(prob, lam0, lam1 + 1e-3 * rng.standard_normal(8)) <= g_at_step


class TestSolveDiagonal:
    def test_diagonal_cost_converges_in_one_step(self):
        d = np.array([0.4, -0.1, 0.7, 0.0])
        c = SparseSymMatrix.from_dense(np.diag(d))
        b = np.array([1.0, 2.0, 0.5, 1.5])
        prob = DiagonalProblem(C=c, b=b, beta=3.0)
        traj = solve_diagonal(prob, iters=1, mode="exact")
        ref = dense_reference(
            DualShiftedOperator(c, "diagonal", traj.final_dual), 3.0, HALF_EXPONENTIAL
        )
        assert np.allclose(np.diag(ref.x), b, atol=1e-12)

    def test_fixed_point_stays_fixed(self):
        d = np.array([0.2, -0.3])
        c = SparseSymMatrix.from_dense(np.diag(d))
        lam_star = d + np.log(1.0) / 2.0  # beta=2, b=1: lambda* = C_ii
        prob = DiagonalProblem(C=c, b=np.ones(2), beta=2.0)
        traj = solve_diagonal(prob, iters=3, mode="exact", lam0=lam_star)
        assert np.allclose(traj.final_dual, lam_star, atol=1e-12)

    @pytest.mark.parametrize("beta", [1.0, 10.0])
    def test_exact_mode_converges(self, beta):
        prob = diag_problem(64, 8, beta=beta)
        traj = solve_diagonal(prob, iters=200, mode="exact")
        assert traj.rows[-1]["constraint_residual_estimate"] <= 1e-8

    def test_monotone_dual_objective(self):
        prob = diag_problem(32, 9, beta=10.0)
        traj = solve_diagonal(prob, iters=60, mode="exact", store_snapshots=True)
        gs = [dual_objective_exact(prob, lam) for lam in traj.snapshots]
        assert np.all(np.diff(gs) >= -1e-10)

    def test_stochastic_deterministic_given_seed(self):
        prob = diag_problem(24, 10, beta=5.0)
        a = solve_diagonal(prob, iters=10, seed=3, mode="stochastic")
        b = solve_diagonal(prob, iters=10, seed=3, mode="stochastic")
        assert np.array_equal(a.final_dual, b.final_dual)
        assert a.column("objective").tolist() == b.column("objective").tolist()


class TestNewtonStep:
    def test_zero_gradient(self):
        assert newton_step(0.7, a1=2.0, a2=-1.0, k=2.0) == 0.7

    def test_arithmetic(self):
        assert newton_step(0.0, a1=1.0, a2=-2.0, k=2.0) == pytest.approx(0.5)

    def test_huge_curvature_freezes(self):
        assert newton_step(1.0, a1=0.0, a2=-1e308, k=2.0) == pytest.approx(1.0)

    def test_nonnegative_curvature_rejected(self):
        with pytest.raises(ValueError):
            newton_step(0.0, a1=1.0, a2=0.0, k=2.0)


class TestSmoothTrajectory:
    def test_constant(self):
        assert smooth_trajectory([2.0] * 7, 7) == 2.0

    def test_window_of_one(self):
        assert smooth_trajectory([0.0, 2.0], 2) == 2.0

    def test_window_of_two(self):
        assert smooth_trajectory([1.0, 2.0, 3.0, 4.0], 4) == pytest.approx(3.5)

    def test_prefix_for_t1(self):
        assert smooth_trajectory([5.0, 9.0], 1) == 5.0

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            smooth_trajectory([1.0], 2)


def bisection_mu(eigvals, k, beta):
    f = lambda m: k - np.sum(fermi_dirac(eigvals - m, beta))
    return brentq(f, eigvals.min() - 1e-9, eigvals.max() + 1e-9, xtol=1e-14)


class TestSolveTrace:
    def test_step_cost_matches_bisection(self):
        d = np.concatenate([np.zeros(3), np.ones(5)])
        c = SparseSymMatrix.from_dense(np.diag(d))
        prob = TraceProblem(C=c, k=3.0, beta=10.0, interval=SpectralInterval(0.0, 1.0))
        traj = solve_trace(prob, iters=60, mode="exact")
        assert abs(traj.final_dual - bisection_mu(d, 3.0, 10.0)) <= 1e-10

    def test_two_level_symmetry(self):
        c = SparseSymMatrix.from_dense(np.diag([0.0, 1.0]))
        prob = TraceProblem(C=c, k=1.0, beta=7.0, interval=SpectralInterval(0.0, 1.0))
        traj = solve_trace(prob, iters=60, mode="exact")
        assert traj.final_dual == pytest.approx(0.5, abs=1e-10)

    def test_random_sparse_matches_bisection(self):
        c = random_sparse_sym(40, 0.15, 12, scale=0.4)
        iv = gershgorin_interval(DualShiftedOperator(c, "scalar", 0.0))
        prob = TraceProblem(C=c, k=8.0, beta=10.0, interval=iv)
        traj = solve_trace(prob, iters=80, mode="exact")
        w = np.linalg.eigvalsh(c.to_dense())
        assert abs(traj.final_dual - bisection_mu(w, 8.0, 10.0)) <= 1e-8

    def test_stochastic_deterministic(self):
        c = random_sparse_sym(30, 0.2, 13, scale=0.4)
        iv = gershgorin_interval(DualShiftedOperator(c, "scalar", 0.0))
        prob = TraceProblem(C=c, k=5.0, beta=5.0, interval=iv)
        a = solve_trace(prob, iters=30, seed=2)
        b = solve_trace(prob, iters=30, seed=2)
        assert a.column("smoothed_mu").tolist() == b.column("smoothed_mu").tolist()

    def test_exact_derivatives_match_finite_differences(self):
        c = random_sparse_sym(20, 0.25, 14, scale=0.5)
        w = np.linalg.eigvalsh(c.to_dense())
        beta, k = 6.0, 4.0

        def free_energy(mu):
            return k * mu - np.sum(np.logaddexp(0.0, -beta * (w - mu))) / beta

        for mu in (0.1, 0.4, -0.2):
            grad, curv = trace_derivatives_exact(w, mu, beta, k)
            h = 1e-5
            fd1 = (free_energy(mu + h) - free_energy(mu - h)) / (2 * h)
            fd2 = (free_energy(mu + h) - 2 * free_energy(mu) + free_energy(mu - h)) / h**2
            assert abs(fd1 - grad) <= 1e-6 * max(abs(grad), 1.0)
            assert abs(fd2 - curv) <= 1e-4 * max(abs(curv), 1.0)
            assert curv < 0


class TestTrajectoryCsv:
    def test_round_trip_precision_and_header(self, tmp_path):
        prob = diag_problem(8, 15, beta=2.0)
        traj = solve_diagonal(prob, iters=4, seed=1)
        path = tmp_path / "trajectory.csv"
        traj.to_csv(path)
        lines = path.read_text().splitlines()
        config_lines = [l for l in lines if l.startswith("# ")]
        assert any(l.startswith("# beta=") for l in config_lines)
        header_idx = len(config_lines)
        assert lines[header_idx].startswith("t,objective")
        first = lines[header_idx + 1].split(",")
        assert float(first[1]) == traj.rows[0]["objective"]  # 17 digits round-trips

    def test_snapshot_binary(self, tmp_path):
        prob = diag_problem(6, 16, beta=2.0)
        traj = solve_diagonal(prob, iters=3, seed=1, store_snapshots=True)
        path = tmp_path / "snaps.f64le"
        traj.save_snapshots(path)
        data = np.fromfile(path, dtype="<f8").reshape(3, 6)
        assert np.array_equal(data[-1], traj.final_dual)


class TestValidation:
    def test_bad_b_rejected(self):
        with pytest.raises(ValueError):
            DiagonalProblem(C=SparseSymMatrix.zeros(2), b=np.array([1.0, -1.0]), beta=1.0)

    def test_bad_k_rejected(self):
        with pytest.raises(ValueError):
            TraceProblem(
                C=SparseSymMatrix.zeros(3), k=3.0, beta=1.0, interval=SpectralInterval(0, 1)
            )
