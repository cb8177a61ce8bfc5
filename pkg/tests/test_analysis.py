"""Oracle, exact-chain and resistance-tree tests on small instances."""

import itertools

import numpy as np
import pytest

from d2dalloc.analysis import (ExactDtmc, ResistanceGraph, UtilityMap,
                               brute_force_optimum, build_exact_dtmc,
                               class_graph, edge_resistance, max_path_logprob,
                               min_resistance_tree, stationary_distribution,
                               stochastic_potentials, stochastically_stable_set)
from d2dalloc.config import concept_preset
from d2dalloc.learning import (LearningParams, all_lists, frame_utility,
                               simulate_frame)
from d2dalloc.sim import (build_static_env, build_topology, calibrate_r_tgt,
                          make_params, tiny_game)


def concept_fixture():
    cfg = concept_preset()
    ss = np.random.SeedSequence(cfg.seed)
    topo_ss, calib_ss, env_ss, _ = ss.spawn(4)
    topo = build_topology(cfg, np.random.default_rng(topo_ss))
    r_tgt = calibrate_r_tgt(cfg, topo, env_ss, np.random.default_rng(calib_ss))
    env = build_static_env(cfg, topo)
    return env, make_params(cfg, r_tgt)


def naive_optimum(env, params):
    """Independent exhaustive enumerator, kept deliberately dumb."""
    actions = all_lists(params.n_c, params.list_len)
    best_w, best_profiles = -np.inf, []
    for joint in itertools.product(actions, repeat=params.n_d):
        rates, _ = simulate_frame(joint, env)
        u = [frame_utility(rates[d], params.normalization)
             for d in range(params.n_d)]
        if any(ud < t for ud, t in zip(u, params.r_tgt)):
            continue
        w = sum(u)
        if w > best_w + 1e-12:
            best_w, best_profiles = w, [joint]
        elif w >= best_w - 1e-12:
            best_profiles.append(joint)
    return best_w, best_profiles


def test_brute_force_concept_golden():
    env, params = concept_fixture()
    res = brute_force_optimum(env, params)
    assert res.feasible
    assert res.w_star_bps == pytest.approx(1.2241409639, abs=1e-9)
    assert set(res.optimal_allocation_profiles) == {(1, 2, 0), (2, 0, 1)}
    for u in res.utility_profiles:
        assert all(ud >= t for ud, t in zip(u, params.r_tgt))
        assert sum(u) == pytest.approx(res.w_star, rel=1e-12)


def test_brute_force_matches_naive_enumerator():
    env, params = tiny_game()
    res = brute_force_optimum(env, params)
    w, profiles = naive_optimum(env, params)
    assert res.w_star == pytest.approx(w, abs=1e-12)
    assert set(res.optimal_action_profiles) == set(profiles)
    env2, params2 = concept_fixture()
    res2 = brute_force_optimum(env2, params2)
    w2, profiles2 = naive_optimum(env2, params2)
    assert res2.w_star == pytest.approx(w2, abs=1e-12)
    assert set(res2.optimal_action_profiles) == set(profiles2)


def test_brute_force_infeasible_falls_back_to_unconstrained():
    env, params = tiny_game()
    hard = LearningParams(epsilon=params.epsilon, k=params.k, n_c=params.n_c,
                          n_d=params.n_d, list_len=params.list_len,
                          r_tgt=(0.999, 0.999), normalization=params.normalization)
    free = LearningParams(epsilon=params.epsilon, k=params.k, n_c=params.n_c,
                          n_d=params.n_d, list_len=params.list_len,
                          r_tgt=(0.0, 0.0), normalization=params.normalization)
    res = brute_force_optimum(env, hard)
    assert not res.feasible
    assert res.w_star == pytest.approx(brute_force_optimum(env, free).w_star, abs=1e-12)


def test_brute_force_budget():
    env, params = tiny_game()
    with pytest.raises(ValueError):
        brute_force_optimum(env, params, budget=2)


def test_exact_dtmc_invariants():
    env, params = tiny_game()
    dtmc = build_exact_dtmc(env, params, epsilon=0.2)
    umap = UtilityMap(env, params)
    rows = dtmc.P.sum(axis=1)
    assert np.max(np.abs(rows - 1.0)) < 1e-12
    assert dtmc.P.min() >= 0.0
    for s in dtmc.states:
        # utilities stored in the state are the image of its joint lists
        assert s.utilities == tuple(round(x, 12) for x in umap(s.lists))
        # a content player always meets its target (mood-state exclusion)
        for d, m in enumerate(s.moods):
            if m.name == "CONTENT":
                assert s.utilities[d] >= params.r_tgt[d]
    with pytest.raises(ValueError):
        build_exact_dtmc(env, params, epsilon=0.0)
    with pytest.raises(ValueError):
        build_exact_dtmc(env, params, epsilon=0.2, max_states=3)


def test_stationary_two_state_closed_form():
    P = np.array([[0.9, 0.1], [0.2, 0.8]])
    dtmc = ExactDtmc(states=["a", "b"], index={}, P=P, epsilon=0.1)
    pi = stationary_distribution(dtmc)
    assert pi == pytest.approx([2.0 / 3.0, 1.0 / 3.0], abs=1e-12)


def test_stationary_rejects_reducible_chain():
    dtmc = ExactDtmc(states=["a", "b"], index={}, P=np.eye(2), epsilon=0.1)
    with pytest.raises(ValueError):
        stationary_distribution(dtmc)


def test_tiny_game_stability_monotone_in_epsilon():
    env, params = tiny_game()
    oracle = brute_force_optimum(env, params)
    umap = UtilityMap(env, params)
    opt = set(oracle.optimal_action_profiles)
    dtmcs = [build_exact_dtmc(env, params, eps) for eps in (0.2, 0.1, 0.05)]
    masses = []
    for dtmc in dtmcs:
        pi = stationary_distribution(dtmc)
        mass = sum(pi[i] for i, s in enumerate(dtmc.states)
                   if s.all_content and s.lists in opt)
        masses.append(mass)
    assert masses == pytest.approx([0.91424, 0.98790, 0.99840], abs=1e-4)
    assert masses[0] < masses[1] < masses[2]
    assert masses[-1] > 0.5
    stable = stochastically_stable_set(dtmcs, oracle=oracle, umap=umap)
    assert {s.lists for s in stable} == opt
    assert all(s.all_content for s in stable)


def test_stable_set_input_validation():
    env, params = tiny_game()
    d1 = build_exact_dtmc(env, params, 0.2)
    d2 = build_exact_dtmc(env, params, 0.1)
    with pytest.raises(ValueError):
        stochastically_stable_set([d1, d2])
    d3 = build_exact_dtmc(env, params, 0.05)
    with pytest.raises(ValueError):
        stochastically_stable_set([d3, d2, d1])  # increasing epsilon


def test_escape_path_resistance_scales_like_k():
    # the cheapest escape from an optimal content state to all-discontent
    # costs one unilateral experiment, so log P_max ~ k log(eps)
    env, params = tiny_game()
    oracle = brute_force_optimum(env, params)
    opt = set(oracle.optimal_action_profiles)
    eps_grid = (0.2, 0.1, 0.05)
    logps = []
    for eps in eps_grid:
        dtmc = build_exact_dtmc(env, params, eps)
        sources = [i for i, s in enumerate(dtmc.states)
                   if s.all_content and s.lists in opt]
        targets = [i for i, s in enumerate(dtmc.states) if s.all_discontent]
        logps.append(max_path_logprob(dtmc, sources, targets))
    slope = np.polyfit(np.log(eps_grid), logps, 1)[0]
    assert abs(slope - params.k) / params.k < 0.10


def test_max_path_logprob_direct_hop():
    P = np.array([[0.7, 0.3], [0.0, 1.0]])
    dtmc = ExactDtmc(states=["a", "b"], index={}, P=P, epsilon=0.1)
    assert max_path_logprob(dtmc, [0], [1]) == pytest.approx(np.log(0.3))


def optimal_utilities():
    env, params = concept_fixture()
    return brute_force_optimum(env, params).utility_profiles[0], params.k


def test_edge_resistances_golden():
    u, k = optimal_utilities()
    assert edge_resistance("C->D", k, u) == 11.0
    assert edge_resistance("D->C", k, u) == pytest.approx(1.7759, abs=1e-3)
    assert edge_resistance("C->C", k, u) == pytest.approx(11.5911, abs=1e-3)
    with pytest.raises(ValueError):
        edge_resistance("D->D", k, u)
    with pytest.raises(ValueError):
        edge_resistance("C->D", k, (0.5, 1.0, 0.5))


def test_edge_resistance_vanishes_as_targets_saturate():
    u = (1.0 - 1e-9,) * 3
    assert edge_resistance("D->C", 11.0, u) == pytest.approx(0.0, abs=1e-8)
    assert edge_resistance("C->C", 11.0, u) == pytest.approx(11.0, abs=1e-8)


def test_min_resistance_trees_golden():
    u, k = optimal_utilities()
    g = class_graph(k, u)
    content_tree, content_res = min_resistance_tree(g, "z")
    assert content_tree == {("x", "z"), ("y", "x")}
    assert content_res == pytest.approx(12.7759, abs=1e-3)
    discontent_tree, discontent_res = min_resistance_tree(g, "x")
    assert discontent_tree == {("y", "x"), ("z", "x")}
    assert discontent_res == pytest.approx(22.0, abs=1e-12)
    assert content_res < discontent_res


def test_min_resistance_tree_validation():
    g = ResistanceGraph(["a", "b"])
    with pytest.raises(ValueError):
        min_resistance_tree(g, "c")
    with pytest.raises(ValueError):
        min_resistance_tree(g, "a")  # b has no outgoing edge
    g.add_edge("b", "a", 1.0)
    tree, res = min_resistance_tree(g, "a")
    assert tree == {("b", "a")} and res == 1.0
    with pytest.raises(ValueError):
        g.add_edge("a", "b", -1.0)


def test_stochastic_potentials_golden():
    u, k = optimal_utilities()
    gamma_c, gamma_d = stochastic_potentials(u, k, 2)
    assert gamma_c == pytest.approx(12.776, abs=1e-3)
    assert gamma_d == 22.0
    assert gamma_c < gamma_d


def test_stochastic_potentials_strict_inequality_random():
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        n = int(rng.integers(1, 8))
        u = rng.uniform(1e-6, 1.0 - 1e-6, n)
        k = n + float(rng.uniform(0.01, 10.0))
        m = int(rng.integers(1, 6))
        gamma_c, gamma_d = stochastic_potentials(u, k, m)
        assert gamma_c < gamma_d
