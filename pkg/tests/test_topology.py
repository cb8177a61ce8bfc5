"""Placement and mobility tests."""

import math

import numpy as np
import pytest

from d2dalloc.envs import pathloss_gain_table
from d2dalloc.channel import ChannelConfig
from d2dalloc.topology import (MobilityState, Position, concept_topology,
                               draw_duration, init_mobility, mobility_step,
                               place_receiver_near, place_uniform_disk,
                               random_topology)


def test_distance_symmetry():
    rng = np.random.default_rng(0)
    for _ in range(100):
        a = Position(*rng.uniform(-100, 100, 2))
        b = Position(*rng.uniform(-100, 100, 2))
        assert a.distance_to(b) == pytest.approx(b.distance_to(a), rel=1e-15)


def test_place_uniform_disk_statistics():
    rng = np.random.default_rng(1)
    pts = [place_uniform_disk(250.0, rng) for _ in range(100_000)]
    radii = np.array([p.radius() for p in pts])
    assert radii.max() <= 250.0
    # area ratio: an inner disk of half the radius holds a quarter of the mass
    assert (radii <= 125.0).mean() == pytest.approx(0.25, abs=0.01)
    assert abs(np.mean([p.x for p in pts])) < 3.0


def test_place_receiver_near():
    rng = np.random.default_rng(2)
    tx = Position(200.0, 0.0)
    pts = [place_receiver_near(tx, 50.0, 250.0, rng) for _ in range(100_000)]
    dists = np.array([tx.distance_to(p) for p in pts])
    assert dists.max() <= 50.0
    assert max(p.radius() for p in pts) <= 250.0
    # tx is deep inside the cell here, so the disk is untruncated
    assert dists.mean() == pytest.approx(2.0 / 3.0 * 50.0, abs=0.5)


def test_place_receiver_near_rejects_outside_tx():
    rng = np.random.default_rng(3)
    with pytest.raises(ValueError):
        place_receiver_near(Position(300.0, 0.0), 50.0, 250.0, rng)


def test_random_topology_containment():
    rng = np.random.default_rng(4)
    topo = random_topology(250.0, 10, 10, 50.0, rng)
    assert topo.n_c == 10 and topo.n_d == 10
    for p in topo.cu_positions + topo.d2d_tx + topo.d2d_rx:
        assert p.radius() <= 250.0
    for tx, rx in zip(topo.d2d_tx, topo.d2d_rx):
        assert tx.distance_to(rx) <= 50.0


def test_concept_topology_geometry():
    topo = concept_topology()
    for cu in topo.cu_positions:
        assert cu.radius() == pytest.approx(50.0, rel=1e-12)
    for tx in topo.d2d_tx:
        assert tx.radius() == pytest.approx(100.0, rel=1e-12)
    for tx, rx in zip(topo.d2d_tx, topo.d2d_rx):
        assert tx.distance_to(rx) == pytest.approx(17.43, abs=0.01)
    # chord identity for the 10 degree pair separation
    assert 2.0 * 100.0 * math.sin(math.radians(5.0)) == pytest.approx(17.431, abs=1e-3)


def test_concept_topology_equal_bs_powers():
    # equal CU radii mean equal received CU powers at the BS, and likewise
    # for the D2D transmitters
    topo = concept_topology()
    gains = pathloss_gain_table(topo, ChannelConfig(pathloss_model="powerlaw", alpha=2.0))
    assert np.allclose(gains.g_cb, gains.g_cb[0], rtol=1e-12)
    assert np.allclose(gains.g_db, gains.g_db[0], rtol=1e-12)


def test_draw_duration_mean():
    rng = np.random.default_rng(5)
    p = 1e-5
    draws = np.array([draw_duration(p, rng) for _ in range(10_000)])
    assert draws.mean() == pytest.approx((1 - p) / p, abs=3000)
    assert draws.min() >= 1
    with pytest.raises(ValueError):
        draw_duration(0.0, rng)


def test_mobility_step_displacement():
    rng = np.random.default_rng(6)
    state = MobilityState(Position(0.0, 0.0), 0.3, 1.0, 10)
    nxt = mobility_step(state, 250.0, 1e-5, rng)
    assert state.position.distance_to(nxt.position) == pytest.approx(1e-3, rel=1e-12)
    assert nxt.remaining_subframes == 9
    assert nxt.direction_rad == state.direction_rad


def test_mobility_speed_zero_fixed_point():
    rng = np.random.default_rng(7)
    state = init_mobility(Position(10.0, -5.0), 0.0, 1e-5, rng)
    for _ in range(50):
        state = mobility_step(state, 250.0, 1e-5, rng)
    assert state.position == Position(10.0, -5.0)


def test_mobility_p_one_changes_direction_every_subframe():
    rng = np.random.default_rng(8)
    state = init_mobility(Position(0.0, 0.0), 1.0, 1.0, rng)
    assert state.remaining_subframes == 1
    directions = set()
    for _ in range(20):
        state = mobility_step(state, 250.0, 1.0, rng)
        directions.add(state.direction_rad)
        assert state.remaining_subframes == 1
    assert len(directions) > 1


def test_mobility_containment_at_boundary():
    # a tiny cell with a fast walker hammers the boundary logic
    rng = np.random.default_rng(9)
    cell = 0.01
    state = init_mobility(Position(0.009, 0.0), 1.0, 1e-3, rng)
    for _ in range(100_000):
        state = mobility_step(state, cell, 1e-3, rng)
        assert state.position.radius() <= cell + 1e-12
