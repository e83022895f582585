import math

import numpy as np
import pytest

from cfdecomp.evaluate import rate_lower_bound
from cfdecomp.graph import Partition, edge_weights, sumcut
from cfdecomp.netdecomp import compute_beta, rate_budget, rc_netdecomp, sumcut_budget
from cfdecomp.topology import GainMatrix
from conftest import random_instance


def test_beta_hand_example():
    gains = GainMatrix(np.array([[1.0, 0.5], [0.2, 2.0]]))
    assert compute_beta(gains, 1.0, 1.0) == pytest.approx(1.5)
    assert compute_beta(gains, 1.0, 0.0) == 0.0
    assert compute_beta(gains, 2.0, 1.0) == pytest.approx(0.75)


def test_beta_rejects_bad_power():
    with pytest.raises(ValueError):
        compute_beta(GainMatrix(np.ones((1, 1))), 0.0, 1.0)


def test_budget_examples():
    assert sumcut_budget(100, 1.0, 0.0) == pytest.approx(200.0)
    assert sumcut_budget(5, 0.0, 3.0) == math.inf
    assert sumcut_budget(10, 10.0, 5.0) == pytest.approx(20 / 1023 - 10)


def test_budget_huge_threshold_has_no_headroom():
    assert sumcut_budget(10, 5000.0, 1.0) == -2.0


def test_budget_rejects_negative_threshold():
    with pytest.raises(ValueError):
        sumcut_budget(3, -0.1, 0.0)


def test_budget_decreasing_in_threshold():
    vals = [sumcut_budget(20, r, 0.7) for r in np.linspace(0.1, 8, 30)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_zero_threshold_gives_best_beam_association(rng):
    for _ in range(20):
        gains = random_instance(rng)
        w = edge_weights(gains)
        res = rc_netdecomp(gains, 0.0, 1.0, 1.0)
        assert res.M_star == w.N and res.feasible
        np.testing.assert_array_equal(res.partition.user_labels,
                                      res.partition.beam_labels[w.best_beam])


def test_infeasible_threshold_falls_back_to_grand_coalition(rng):
    gains = random_instance(rng, min_N=3)
    res = rc_netdecomp(gains, 100.0, 1.0, 1.0)
    assert res.M_star == 1
    assert not res.feasible
    assert res.budget.budget < 0 and not res.budget.feasible_at_M1


def test_trace_consistent_with_result(rng):
    for _ in range(20):
        gains = random_instance(rng, min_N=4)
        res = rc_netdecomp(gains, float(rng.uniform(0.2, 3)), 1.0, 0.1, seed=2)
        accepted = [m for m, c in res.per_M_trace if c <= res.budget.budget]
        rejected = [m for m, c in res.per_M_trace if c > res.budget.budget]
        assert res.M_star == max(accepted, default=1)
        assert all(m > res.M_star for m in rejected)
        assert sumcut(res.partition, edge_weights(gains)) == pytest.approx(res.sumcut_achieved)


def test_feasible_output_meets_threshold_bound(rng):
    for _ in range(40):
        gains = random_instance(rng)
        R_th = float(rng.uniform(0.05, 5))
        res = rc_netdecomp(gains, R_th, 1.0, 0.01, seed=4)
        if res.feasible:
            assert rate_lower_bound(res.partition, edge_weights(gains), res.budget.beta) >= R_th - 1e-9


def test_deterministic(rng):
    gains = random_instance(rng, min_N=6)
    a = rc_netdecomp(gains, 1.5, 1.0, 0.1, seed=9)
    b = rc_netdecomp(gains, 1.5, 1.0, 0.1, seed=9)
    assert a.partition == b.partition and a.per_M_trace == b.per_M_trace


def test_subnetwork_count_shrinks_with_threshold(rng):
    gains = random_instance(rng, max_K=12, max_N=8, min_N=8)
    counts = [rc_netdecomp(gains, r, 1.0, 0.01).M_star for r in (0, 0.5, 1, 2, 4, 8)]
    assert counts[0] == 8 and counts[-1] == 1
    assert all(b <= a for a, b in zip(counts, counts[1:]))


def test_report_dict(rng):
    d = rc_netdecomp(random_instance(rng), 0.0, 1.0, 1.0).to_dict()
    assert d["budget"] == "inf" and d["feasible"] is True
    assert len(d["partition"]) == d["M_star"]


def test_rate_budget_bundle():
    gains = GainMatrix(np.array([[2.0, 1.0]]))
    b = rate_budget(gains, 1.0, 1.0, 1.0)
    assert b.beta == pytest.approx(0.5) and b.budget == pytest.approx(2 - 1)
