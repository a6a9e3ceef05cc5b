import numpy as np
import pytest

from entrosdp.linop import DualShiftedOperator, SparseSymMatrix
from entrosdp.matfunc import HALF_EXPONENTIAL, GibbsFactorOperator
from entrosdp.maxcut import (
    GW_REFERENCE_RATIO,
    MaxCutInstance,
    brute_force_minimum,
    erdos_renyi,
    expected_upper_bound,
    gw_round,
    lower_bound,
    run_maxcut_experiment,
)


class TestErdosRenyi:
    def test_p_zero_is_empty(self):
        inst = erdos_renyi(10, 0.0, seed=0)
        assert inst.adjacency.csr.nnz == 0

    def test_p_one_is_complete(self):
        inst = erdos_renyi(3, 1.0, seed=0)
        dense = inst.adjacency.to_dense()
        assert np.array_equal(dense, np.ones((3, 3)) - np.eye(3))

    def test_cost_is_scaled_adjacency(self):
        inst = erdos_renyi(20, 0.3, seed=1)
        assert np.allclose(inst.C.to_dense(), inst.adjacency.to_dense() / 20)

    def test_mean_degree_concentrates(self):
        degs = [
            erdos_renyi(1000, 3.0 / 1000, seed=s).adjacency.to_dense().sum(axis=0).mean()
            for s in range(20)
        ]
        assert 2.7 <= np.mean(degs) <= 3.3

    def test_deterministic(self):
        a = erdos_renyi(50, 0.1, seed=7).adjacency.to_dense()
        b = erdos_renyi(50, 0.1, seed=7).adjacency.to_dense()
        assert np.array_equal(a, b)

    def test_invalid_probability(self):
        with pytest.raises(ValueError):
            erdos_renyi(5, 1.5, seed=0)


class TestLowerBound:
    def test_zero_cost(self):
        inst = MaxCutInstance.from_adjacency(SparseSymMatrix.zeros(4))
        lo, mu = lower_bound(inst, np.zeros(4))
        assert lo == pytest.approx(0.0, abs=1e-8)
        assert mu == pytest.approx(0.0, abs=1e-8)

    def test_single_edge(self):
        # C = [[0, 1/2], [1/2, 0]]; at lambda = 0, mu = -1/2, bound = -1 = true optimum
        inst = MaxCutInstance.from_adjacency(
            SparseSymMatrix.from_triplets(2, [0, 1], [1, 0], [1.0, 1.0])
        )
        lo, mu = lower_bound(inst, np.zeros(2))
        assert mu == pytest.approx(-0.5, abs=1e-8)
        assert lo == pytest.approx(-1.0, abs=1e-8)

    @pytest.mark.parametrize("seed", range(5))
    def test_below_exhaustive_optimum(self, seed):
        inst = erdos_renyi(12, 0.35, seed=seed)
        rng = np.random.default_rng(seed + 60)
        lam = rng.standard_normal(12) * 0.1
        lo, _ = lower_bound(inst, lam)
        assert lo <= brute_force_minimum(inst.C) + 1e-8

    def test_shifted_point_is_dual_feasible(self):
        inst = erdos_renyi(30, 0.2, seed=3)
        lam = np.random.default_rng(4).standard_normal(30) * 0.1
        _, mu = lower_bound(inst, lam)
        shifted = DualShiftedOperator(inst.C, "diagonal", lam + mu)
        assert np.linalg.eigvalsh(shifted.to_dense()).min() >= -1e-8


class TestRounding:
    def identity_factor(self, n):
        op = DualShiftedOperator(SparseSymMatrix.zeros(n), "diagonal", np.zeros(n))
        return GibbsFactorOperator(op, 1.0, HALF_EXPONENTIAL)

    def test_signs_only(self):
        inst = erdos_renyi(16, 0.3, seed=5)
        x, val = gw_round(self.identity_factor(16), inst.C, seed=1, iteration=0)
        assert set(np.unique(x)) <= {-1.0, 1.0}
        assert val == pytest.approx(x @ (inst.C.to_dense() @ x))

    def test_sign_of_zero_is_positive(self):
        # zero probe column through Y gives Yz = 0, so x must be all +1
        op = DualShiftedOperator(SparseSymMatrix.zeros(3), "diagonal", np.zeros(3))
        y = GibbsFactorOperator(op, 1.0, HALF_EXPONENTIAL)
        z = np.zeros(3)
        x = np.where(y.matvec(z) >= 0.0, 1.0, -1.0)
        assert np.array_equal(x, np.ones(3))

    def test_deterministic(self):
        inst = erdos_renyi(16, 0.3, seed=6)
        y = self.identity_factor(16)
        a = gw_round(y, inst.C, seed=2, iteration=4)
        b = gw_round(y, inst.C, seed=2, iteration=4)
        assert np.array_equal(a[0], b[0]) and a[1] == b[1]

    def test_best_not_above_mean(self):
        inst = erdos_renyi(20, 0.25, seed=7)
        mean, best = expected_upper_bound(self.identity_factor(20), inst.C, samples=50, seed=3)
        assert best <= mean

    def test_expected_value_identity_gram(self):
        # with Y = I the rounding expectation is (2/pi) sum_ij C_ij arcsin(delta_ij) = 0
        inst = erdos_renyi(200, 0.05, seed=8)
        mean, _ = expected_upper_bound(self.identity_factor(200), inst.C, samples=400, seed=4)
        se = np.abs(inst.C.to_dense()).sum() / np.sqrt(400)
        assert abs(mean) <= 3 * se

    def test_sample_validation(self):
        with pytest.raises(ValueError):
            expected_upper_bound(self.identity_factor(4), SparseSymMatrix.zeros(4), 0, seed=0)


class TestBruteForce:
    def test_single_edge(self):
        c = SparseSymMatrix.from_triplets(2, [0, 1], [1, 0], [0.5, 0.5])
        assert brute_force_minimum(c) == pytest.approx(-1.0)

    def test_triangle_frustration(self):
        # one edge of the triangle always stays uncut
        a = np.ones((3, 3)) - np.eye(3)
        assert brute_force_minimum(SparseSymMatrix.from_dense(a)) == pytest.approx(-2.0)

    def test_size_cap(self):
        with pytest.raises(ValueError):
            brute_force_minimum(SparseSymMatrix.zeros(15))


class TestExperiment:
    def test_certificates_bracket_exhaustive_optimum(self):
        for seed in range(3):
            inst = erdos_renyi(12, 0.35, seed=seed)
            report, _ = run_maxcut_experiment(
                n=12, beta=50.0, iters=150, seed=seed, samples=200, instance=inst
            )
            opt = brute_force_minimum(inst.C)
            assert report.lower <= opt + 1e-8
            assert report.upper_best >= opt - 1e-12
            assert report.upper_expected >= report.upper_best

    def test_ratio_in_unit_interval(self):
        report, _ = run_maxcut_experiment(n=64, beta=32.0, iters=200, seed=1, samples=200)
        assert 0.0 < report.ratio <= 1.0
        assert report.reference_ratio == GW_REFERENCE_RATIO

    def test_trajectory_config(self):
        report, traj = run_maxcut_experiment(n=32, beta=10.0, iters=20, seed=2, samples=10)
        assert traj.config["application"] == "maxcut"
        assert traj.config["beta"] == 10.0
        assert traj.config["beta_effective"] == 10.0 * 32
        assert len(traj.rows) == 20
        assert report.samples == 10

    def test_deterministic_report(self):
        a, _ = run_maxcut_experiment(n=32, beta=10.0, iters=30, seed=3, samples=20)
        b, _ = run_maxcut_experiment(n=32, beta=10.0, iters=30, seed=3, samples=20)
        assert a.to_dict() == b.to_dict()
