import numpy as np
import pytest

from gaitgraph.cycles import gait_from_walk
from gaitgraph.errors import CovarianceModelError, EnumerationCapError
from gaitgraph.learning import EdgeWeight, WeightedDigraph, synthetic_weights
from gaitgraph.oracle import (
    exhaustive_evaluate,
    monte_carlo_cycle_covariance,
    nonlinear_costs,
    pareto_front,
    propagate_cycle_covariance,
)

from conftest import complete_graph
from oracles import brute_pareto


def random_edge_models(rng, length, sigma_p=0.5, sigma_theta=0.02):
    """Random means with measurement-scale noise (mm / centirad)."""
    scale = np.diag([sigma_p, sigma_p, sigma_theta])
    pairs = []
    for _ in range(length):
        mu = np.concatenate([rng.uniform(-10, 10, 2), rng.uniform(-0.5, 0.5, 1)])
        a = scale @ rng.normal(size=(3, 3))
        pairs.append((mu, a @ a.T))
    return pairs


class TestPropagation:
    def test_zero_covariance(self):
        pairs = [(np.array([1.0, 2.0, 0.3]), np.zeros((3, 3)))] * 4
        assert np.allclose(propagate_cycle_covariance(pairs), 0.0)

    def test_zero_rotation_identity_jacobians(self):
        rng = np.random.default_rng(0)
        pairs = []
        total = np.zeros((2, 2))
        for _ in range(5):
            d = np.diag([*rng.uniform(0.1, 1.0, 2), 0.0])
            pairs.append((np.array([rng.uniform(-5, 5), rng.uniform(-5, 5), 0.0]), d))
            total += d[:2, :2]
        cov = propagate_cycle_covariance(pairs)
        assert np.allclose(cov[:2, :2], total, atol=1e-12)

    def test_theta_variance_exact_sum(self):
        rng = np.random.default_rng(1)
        pairs = random_edge_models(rng, 6)
        cov = propagate_cycle_covariance(pairs)
        assert cov[2, 2] == pytest.approx(sum(s[2, 2] for _, s in pairs), rel=1e-12)

    @pytest.mark.parametrize("seed", range(6))
    def test_translation_block_vs_monte_carlo(self, seed):
        rng = np.random.default_rng(seed)
        pairs = random_edge_models(rng, 4)
        cov = propagate_cycle_covariance(pairs)
        mc = monte_carlo_cycle_covariance(pairs, np.random.default_rng(seed + 500))
        frob = np.linalg.norm(cov[:2, :2] - mc[:2, :2]) / np.linalg.norm(mc[:2, :2])
        assert frob < 0.05

    def test_theta_variance_within_three_se(self):
        rng = np.random.default_rng(40)
        pairs = random_edge_models(rng, 4)
        n = 200_000
        mc = monte_carlo_cycle_covariance(pairs, np.random.default_rng(41), samples=n)
        exact = propagate_cycle_covariance(pairs)[2, 2]
        se = exact * np.sqrt(2.0 / (n - 1))
        assert abs(mc[2, 2] - exact) < 3 * se

    def test_non_psd_rejected_in_monte_carlo(self):
        pairs = [(np.zeros(3), np.diag([1.0, 1.0, -0.5]))]
        with pytest.raises(CovarianceModelError):
            monte_carlo_cycle_covariance(pairs, np.random.default_rng(0), samples=10)


class TestNonlinearCosts:
    def test_zero_weights(self, g4):
        w = synthetic_weights(g4, 0, p_scale=0, theta_scale=0, sigma_scale=0)
        gait = gait_from_walk([1, 2, 1], g4)
        rec = nonlinear_costs(gait, w)
        assert rec.J_t_nl == 0.0 and rec.J_theta_nl == 0.0

    def test_two_cycle_hand_value(self, g4):
        weights = []
        for s, t in g4.edges:
            if (s, t) == (1, 2) or (s, t) == (2, 1):
                mu = np.array([2.0, 0.0, 0.0])
            else:
                mu = np.zeros(3)
            weights.append(EdgeWeight(mu=mu, sigma=np.zeros((3, 3)), sample_count=1))
        w = WeightedDigraph(graph=g4, weights=weights)
        rec = nonlinear_costs(gait_from_walk([1, 2, 1], g4), w, lambda_t=1.0)
        assert rec.p_norm == pytest.approx(4.0)
        assert rec.J_t_nl == pytest.approx(2.0)

    def test_pure_rotation_hand_value(self, g4):
        weights = []
        for s, t in g4.edges:
            theta = 0.2 if (s, t) in {(1, 2), (2, 3), (3, 1)} else 0.0
            weights.append(
                EdgeWeight(
                    mu=np.array([0.0, 0.0, theta]),
                    sigma=np.zeros((3, 3)),
                    sample_count=1,
                )
            )
        w = WeightedDigraph(graph=g4, weights=weights)
        rec = nonlinear_costs(gait_from_walk([1, 2, 3, 1], g4), w, lambda_theta=1.0)
        assert rec.theta_abs == pytest.approx(0.6)
        assert rec.J_theta_nl == pytest.approx(0.2)

    def test_length_is_popcount(self, w8):
        gait = gait_from_walk([1, 5, 3, 1], w8.graph)
        rec = nonlinear_costs(gait, w8)
        assert rec.length == 3 == int(gait.z.sum())
        assert rec.s_p >= 0 and rec.s_theta >= 0


class TestScoreAlignment:
    def test_bilp_argmin_matches_score_argmax_fixed_length(self, g4):
        """Zero covariance, zero rotation: minimizing the linear cost
        with the direction weight opposed to a cycle's displacement
        picks that cycle among its length class."""
        from gaitgraph.cycles import enumerate_simple_cycles
        from gaitgraph.synthesis import Goal, build_cost

        rng = np.random.default_rng(3)
        for trial in range(10):
            weights = []
            for _ in range(g4.m):
                weights.append(
                    EdgeWeight(
                        mu=np.array([*rng.uniform(-5, 5, 2), 0.0]),
                        sigma=np.zeros((3, 3)),
                        sample_count=1,
                    )
                )
            w = WeightedDigraph(graph=g4, weights=weights)
            records = exhaustive_evaluate(w)
            for length in (2, 3, 4):
                group = [r for r in records if r.length == length]
                best = max(group, key=lambda r: r.J_t_nl)
                if best.p_norm < 1e-9:
                    continue
                direction = (w.P @ best.gait.z.astype(float)) / best.p_norm
                c = build_cost(Goal.TRANSLATION, w, -direction, 0.0, 0.0)
                argmin = min(group, key=lambda r: float(c @ r.gait.z))
                assert float(c @ argmin.gait.z) == pytest.approx(
                    float(c @ best.gait.z), abs=1e-9
                )


class TestExhaustive:
    def test_counts(self, w4):
        assert len(exhaustive_evaluate(w4)) == 20

    def test_count_n3(self):
        g = complete_graph(3)
        w = synthetic_weights(g, 1)
        assert len(exhaustive_evaluate(w)) == 5

    def test_count_n8_under_ten_seconds(self, w8):
        import time

        t0 = time.time()
        records = exhaustive_evaluate(w8)
        assert time.time() - t0 < 10.0
        assert len(records) == 16_064

    def test_cap_refusal(self, g16):
        w = synthetic_weights(g16, 2)
        with pytest.raises(EnumerationCapError):
            exhaustive_evaluate(w)


class TestPareto:
    def test_single_record(self, w4):
        records = exhaustive_evaluate(w4)[:1]
        assert pareto_front(records, "translation") == records

    def test_dominated_pair(self, w4):
        records = exhaustive_evaluate(w4)
        a, b = records[0], records[1]
        a.J_t_nl, a.J_theta_nl = 2.0, 0.1
        b.J_t_nl, b.J_theta_nl = 1.0, 0.2
        assert pareto_front([a, b], "translation") == [a]

    @pytest.mark.parametrize("mode", ["translation", "rotation"])
    def test_matches_brute_scan(self, w4, mode):
        records = exhaustive_evaluate(w4)
        index_of = {id(r): i for i, r in enumerate(records)}
        front = pareto_front(records, mode)
        if mode == "translation":
            pts = [(r.J_t_nl, r.J_theta_nl) for r in records]
        else:
            pts = [(r.J_theta_nl, r.J_t_nl) for r in records]
        kept = set(brute_pareto(pts))
        assert {index_of[id(r)] for r in front} == kept

    def test_every_non_member_dominated(self, w8):
        records = exhaustive_evaluate(w8)[:500]
        front = set(map(id, pareto_front(records, "translation")))
        for r in records:
            if id(r) in front:
                continue
            assert any(
                s.J_t_nl >= r.J_t_nl
                and s.J_theta_nl <= r.J_theta_nl
                and (s.J_t_nl > r.J_t_nl or s.J_theta_nl < r.J_theta_nl)
                for s in records
                if id(s) in front
            )

    def test_ties_kept(self, w4):
        records = exhaustive_evaluate(w4)[:2]
        a, b = records
        a.J_t_nl = b.J_t_nl = 1.0
        a.J_theta_nl = b.J_theta_nl = 0.5
        assert set(map(id, pareto_front([a, b], "translation"))) == {id(a), id(b)}

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            pareto_front([], "translation")
