import math

import mpmath
import numpy as np
import pytest

from cfdecomp.topology import (
    DISC, Region, Topology, beam_directions, beamspace_gains, cellfree_gains, dft_beam_gain,
    generate_singlecell_topology, generate_topology, singlecell_gains,
)


def test_generate_in_unit_square():
    topo = generate_topology(7, Region(), L=2, K=3)
    assert topo.ap_positions.shape == (2, 2)
    assert topo.user_positions.shape == (3, 2)
    for pts in (topo.ap_positions, topo.user_positions):
        assert np.all((pts >= 0) & (pts <= 1))


def test_generate_is_deterministic():
    assert generate_topology(7, Region(), 2, 3) == generate_topology(7, Region(), 2, 3)


def test_different_seeds_differ():
    a = generate_topology(7, Region(), 2, 3)
    b = generate_topology(8, Region(), 2, 3)
    assert not np.array_equal(a.user_positions, b.user_positions)


@pytest.mark.parametrize("kwargs", [dict(L=0, K=3), dict(L=2, K=0)])
def test_generate_rejects_empty(kwargs):
    with pytest.raises(ValueError):
        generate_topology(1, Region(), **kwargs)


def test_zero_area_region_rejected():
    with pytest.raises(ValueError):
        Region("square", 0.0)


def test_disc_samples_inside():
    topo = generate_singlecell_topology(3, K=500, N=8, radius=2.0)
    assert np.all(topo.region.contains(topo.user_positions))
    assert np.array_equal(topo.ap_positions, [[0.0, 0.0]])


def test_topology_round_trip(tmp_path):
    topo = generate_topology(11, Region(DISC, 3.0), L=4, K=5, beams_per_ap=[1, 2, 3, 1])
    topo.save(tmp_path / "t.json")
    assert Topology.load(tmp_path / "t.json") == topo


def _topo(aps, users, beams=1, region=Region("square", 10.0)):
    return Topology(region, aps, users, np.broadcast_to(beams, (len(aps),)))


def test_cellfree_gain_values():
    topo = _topo([[0, 0], [3, 0]], [[1, 0]])
    g = cellfree_gains(topo, alpha=4.0)
    np.testing.assert_allclose(g.values, [[1.0, 0.0625]], rtol=1e-15)


def test_cellfree_alpha_zero():
    topo = generate_topology(1, Region(), 5, 4)
    np.testing.assert_array_equal(cellfree_gains(topo, 0.0).values, 1.0)


def test_cellfree_homogeneity():
    topo = _topo([[1, 1], [4, 2]], [[2, 3], [5, 5]])
    far = _topo(2 * topo.ap_positions, 2 * topo.user_positions, region=Region("square", 20.0))
    np.testing.assert_allclose(cellfree_gains(far, 2.0).values,
                               0.25 * cellfree_gains(topo, 2.0).values, rtol=1e-14)


def test_cellfree_decreasing_in_distance():
    users = np.column_stack([np.linspace(0.5, 5, 20), np.zeros(20)])
    g = cellfree_gains(_topo([[0, 0]], users), 3.0).values[:, 0]
    assert np.all(np.diff(g) < 0)


def test_cellfree_needs_single_beam_aps():
    with pytest.raises(ValueError):
        cellfree_gains(_topo([[0, 0]], [[1, 1]], beams=2), 2.0)


def test_dft_gain_at_beam_center():
    N = 8
    for n in range(1, N + 1):
        c = beam_directions(N)[n - 1]
        assert dft_beam_gain(c, n, N) == N


def test_dft_gain_limit_matches_high_precision():
    # independent evaluation of the raw ratio just off the singularity
    N, n = 16, 5
    mpmath.mp.dps = 50
    c = mpmath.mpf(2 * n - N - 1) / N + mpmath.mpf("1e-9")
    psi = (-(mpmath.mpf(N) + 1) / 2 + n) * mpmath.pi
    raw = mpmath.sin(N * mpmath.pi / 2 * c - psi) ** 2 / (N * mpmath.sin(mpmath.pi / 2 * c - psi / N) ** 2)
    assert float(raw) == pytest.approx(N, rel=1e-12)
    assert dft_beam_gain(float(c), n, N) == pytest.approx(float(raw), rel=1e-6)


def test_dft_gain_continuous_across_singularity():
    N, n = 32, 7
    c = beam_directions(N)[n - 1]
    assert abs(dft_beam_gain(c + 1e-6, n, N) - N) / N < 1e-3


def test_dft_single_element_is_omni():
    c = np.linspace(-1, 1, 101)
    np.testing.assert_allclose(dft_beam_gain(c, 1, 1), 1.0, rtol=1e-12)


def test_dft_beams_share_equal_average_gain():
    # the pattern has period 2 in cos(theta); a periodic midpoint grid integrates it exactly
    N, G = 16, 4096
    c = -1 + (np.arange(G) + 0.5) * 2 / G
    means = [dft_beam_gain(c, n, N).mean() for n in range(1, N + 1)]
    np.testing.assert_allclose(means, 1.0, rtol=1e-9)


def test_dft_rejects_bad_index():
    with pytest.raises(ValueError):
        dft_beam_gain(0.0, 0, 4)


def test_singlecell_same_angle_ratio():
    topo = Topology(Region(DISC, 1.0), [[0, 0]], [[0.2, 0.1], [0.4, 0.2]], [16])
    g = singlecell_gains(topo, alpha=2.7).values
    np.testing.assert_allclose(g[1], g[0] * 2 ** -2.7, rtol=1e-12)


def test_singlecell_best_beam_is_pattern_argmax():
    topo = generate_singlecell_topology(5, K=1, N=32)
    g = singlecell_gains(topo, 2.7).values[0]
    x, y = topo.user_positions[0]
    pattern = dft_beam_gain(x / math.hypot(x, y), np.arange(1, 33), 32)
    assert np.argmax(g) == np.argmax(pattern)


def test_singlecell_user_at_center_rejected():
    topo = Topology(Region(DISC, 1.0), [[0, 0]], [[0, 0]], [4])
    with pytest.raises(ValueError):
        singlecell_gains(topo, 2.0)


def test_gains_deterministic_and_positive_rows():
    topo = generate_topology(99, Region(), L=6, K=9, beams_per_ap=[1, 4, 2, 1, 1, 3])
    g1 = beamspace_gains(topo, 3.0).values
    g2 = beamspace_gains(generate_topology(99, Region(), 6, 9, [1, 4, 2, 1, 1, 3]), 3.0).values
    assert np.array_equal(g1, g2)
    assert np.all(g1.max(axis=1) > 0) and np.all(np.isfinite(g1))
