import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cfdecomp.evaluate import (
    RealizationMetrics, aggregate, partition_metrics, per_user_rate, rate_lower_bound,
    user_rate, user_rates, user_sinr, user_sinrs, zf_infeasible,
)
from cfdecomp.graph import Partition, edge_weights
from cfdecomp.meganode import build_meganodes
from cfdecomp.netdecomp import compute_beta, sumcut_budget
from cfdecomp.spectral import mway_partition
from cfdecomp.topology import GainMatrix
from conftest import random_instance


def test_sinr_hand_example():
    gains = GainMatrix(np.array([[2.0, 0.5]]))
    p = Partition([0], [0, 1])
    # 1 * 2 / (1 * 0.5 + 2)
    assert user_sinr(0, p, gains, 1.0, 2.0) == pytest.approx(0.8)


def test_sinr_single_subnetwork_is_snr(rng):
    gains = random_instance(rng, max_K=3, min_N=4)
    sinr = user_sinrs(Partition.grand_coalition(gains.K, gains.N), gains, 3.0, 0.5)
    np.testing.assert_allclose(sinr, 3.0 * gains.values.max(axis=1) / 0.5)


def test_overloaded_subnetwork_gets_zero():
    gains = GainMatrix(np.array([[1.0, 0.5, 0.1], [0.4, 1.0, 0.2], [0.9, 0.3, 0.1]]))
    p = Partition([0, 0, 0], [0, 0, 1])
    assert zf_infeasible(p).all()
    np.testing.assert_array_equal(user_rates(p, gains, 1.0, 1.0), 0.0)


def test_rates_examples():
    assert user_rate(0.0) == 0.0
    assert user_rate(1.0) == 1.0
    assert user_rate(3.0) == 2.0
    np.testing.assert_array_equal(user_rate(np.array([0.0, 1.0, 3.0])), [0, 1, 2])


def test_p_off_half():
    gains = GainMatrix(np.array([[1.0, 0.1, 0.1, 0.1]]))
    m = partition_metrics(Partition([0], [0, 1, 2, 3]), gains, 1.0, 1.0)
    assert m.P_off == 0.75
    m = partition_metrics(Partition([0], [0, 0, 1, 1]), gains, 1.0, 1.0)
    assert m.P_off == 0.5 and m.C_max == 3 and m.M_star == 2


def test_jensen_bound_below_rate(rng):
    checked = 0
    for _ in range(200):
        gains = random_instance(rng)
        w = edge_weights(gains)
        part = mway_partition(build_meganodes(w), int(rng.integers(1, w.N + 1)), seed=1)
        if zf_infeasible(part).any():
            continue
        checked += 1
        P_t, s2 = float(rng.uniform(0.1, 10)), float(rng.uniform(0.01, 2))
        beta = compute_beta(gains, P_t, s2)
        assert per_user_rate(part, gains, P_t, s2) >= rate_lower_bound(part, w, beta) - 1e-9
    assert checked > 50


@given(st.integers(1, 200), st.floats(0.01, 12), st.floats(0, 5))
def test_budget_inverts_bound(K, R_th, beta):
    budget = sumcut_budget(K, R_th, beta)
    x = beta + budget / 2
    if x > 0:
        assert math.log2(1 + K / x) == pytest.approx(R_th, abs=1e-9)


def test_interference_lowers_sinr():
    gains = GainMatrix(np.array([[1.0, 0.3, 0.2]]))
    sep = user_sinr(0, Partition([0], [0, 1, 2]), gains, 1.0, 1.0)
    part = user_sinr(0, Partition([0], [0, 0, 1]), gains, 1.0, 1.0)
    whole = user_sinr(0, Partition([0], [0, 0, 0]), gains, 1.0, 1.0)
    assert sep < part < whole


def test_zero_noise_isolated_user_is_unbounded():
    gains = GainMatrix(np.array([[1.0, 0.2]]))
    assert user_sinr(0, Partition([0], [0, 0]), gains, 1.0, 0.0) == math.inf


def metrics(R):
    return RealizationMetrics(R, R / 2, 0.1, 3, 4, 0.25, 0.0)


def test_aggregate_exact_means():
    rep = aggregate([metrics(0.1)] * 10)
    assert rep.R_bar == 0.1 and rep.realizations == 10 and rep.M_star_bar == 3


def test_aggregate_drops_non_finite():
    with pytest.warns(RuntimeWarning):
        rep = aggregate([metrics(1.0), metrics(math.inf), metrics(3.0)])
    assert rep.realizations == 2 and rep.R_bar == 2.0


def test_aggregate_all_non_finite_fails():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(ValueError):
            aggregate([metrics(math.inf)])
