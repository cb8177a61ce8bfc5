"""Stability theory on small instances, made executable.

Part 1: exact perturbed chain of a 2-player game; the stationary mass on the
socially optimal all-content states grows as the perturbation shrinks.
Part 2: recurrence-class resistances and stochastic potentials for the
concept-scenario optimum; the content class wins the tree comparison.
"""

import numpy as np

from d2dalloc.analysis import (brute_force_optimum, build_exact_dtmc,
                               class_graph, min_resistance_tree,
                               stationary_distribution, stochastic_potentials,
                               stochastically_stable_set, UtilityMap)
from d2dalloc.config import concept_preset
from d2dalloc.sim import (build_static_env, build_topology, calibrate_r_tgt,
                          make_params, tiny_game)

print("--- exact chain of the 2-player, 3-CU game ---")
env, params = tiny_game()
oracle = brute_force_optimum(env, params)
umap = UtilityMap(env, params)
opt = set(oracle.optimal_action_profiles)
print(f"optimal joint actions: {sorted(opt)}, W* = {oracle.w_star:.4f}")

dtmcs = [build_exact_dtmc(env, params, eps) for eps in (0.2, 0.1, 0.05)]
print(f"reachable states: {len(dtmcs[0].states)}")
for d in dtmcs:
    pi = stationary_distribution(d)
    mass = sum(pi[i] for i, s in enumerate(d.states)
               if s.all_content and s.lists in opt)
    print(f"epsilon={d.epsilon:<5g} pi-mass on optimal content states: {mass:.5f}")
stable = stochastically_stable_set(dtmcs, oracle=oracle, umap=umap)
for s in stable:
    print(f"stochastically stable: lists={s.lists} "
          f"utilities={tuple(round(float(u), 4) for u in s.utilities)}")

print()
print("--- resistance trees for the concept-scenario optimum ---")
cfg = concept_preset()
ss = np.random.SeedSequence(cfg.seed)
topo_ss, calib_ss, env_ss, _ = ss.spawn(4)
topo = build_topology(cfg, np.random.default_rng(topo_ss))
r_tgt = calibrate_r_tgt(cfg, topo, env_ss, np.random.default_rng(calib_ss))
cparams = make_params(cfg, r_tgt)
copt = brute_force_optimum(build_static_env(cfg, topo), cparams)
u = copt.utility_profiles[0]
print(f"optimal utility profile: {tuple(round(float(x), 4) for x in u)}")

gamma_c, gamma_d = stochastic_potentials(u, cparams.k, 2)
print(f"stochastic potentials: gamma_C0 = {gamma_c:.4f}, gamma_D0 = {gamma_d:.4f}")

g = class_graph(cparams.k, u)
for root, label in (("z", "content class z"), ("x", "discontent class x")):
    tree, res = min_resistance_tree(g, root)
    print(f"min-resistance tree into {label}: {sorted(tree)} "
          f"(resistance {res:.4f})")
print("the content class has the lower potential, so it is the one observed "
      "as the perturbation vanishes")
