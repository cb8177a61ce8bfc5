"""Three-CU / three-pair concept scenario walkthrough.

Runs the learning dynamics on the semicircle layout, prints the headline
numbers and saves the per-epoch metrics CSV plus a learning-curve figure.
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from d2dalloc.analysis import brute_force_optimum
from d2dalloc.config import concept_preset
from d2dalloc.sim import (build_static_env, build_topology, calibrate_r_tgt,
                          make_params, run_experiment)

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

cfg = concept_preset()
print(f"scenario: {cfg.name}, {cfg.horizon} frames, epsilon={cfg.epsilon}, k={cfg.k}")

csv_path = os.path.join(OUT, "concept_metrics.csv")
records, summary = run_experiment(cfg, csv_path=csv_path)

# the exhaustive oracle for the same environment and targets
ss = np.random.SeedSequence(cfg.seed)
topo_ss, calib_ss, env_ss, _ = ss.spawn(4)
topo = build_topology(cfg, np.random.default_rng(topo_ss))
r_tgt = calibrate_r_tgt(cfg, topo, env_ss, np.random.default_rng(calib_ss))
params = make_params(cfg, r_tgt)
oracle = brute_force_optimum(build_static_env(cfg, topo), params)

print(f"target rates: {[round(t, 4) for t in r_tgt]}")
print(f"W* (oracle): {oracle.w_star_bps:.6f} bps, "
      f"{len(oracle.optimal_action_profiles)} optimal action profiles")
for a in oracle.optimal_allocation_profiles:
    print(f"  optimal allocation profile: {a}")
print(f"max social utility reached: {summary.max_social_bps:.6f} bps")
print(f"time-averaged social utility: {summary.time_avg_social_bps:.6f} bps")
print(f"final normalized mood: {summary.final_normalized_mood:.3f}")
print(f"csv: {csv_path}")

social = np.array([r.social_utility_bps for r in records])
mood = np.array([r.normalized_mood for r in records])
window = 100
kernel = np.ones(window) / window
smooth = np.convolve(social, kernel, mode="valid")

fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(8, 6), sharex=True)
ax1.plot(social, lw=0.3, alpha=0.4, label="per frame")
ax1.plot(np.arange(window - 1, len(social)), smooth, lw=1.2,
         label=f"{window}-frame average")
ax1.axhline(oracle.w_star_bps, color="k", ls="--", lw=0.8, label="W*")
ax1.set_ylabel("social utility (bps)")
ax1.legend(loc="lower right", fontsize=8)
ax2.plot(mood, lw=0.4)
ax2.set_ylabel("normalized mood")
ax2.set_xlabel("frame")
fig.tight_layout()
fig_path = os.path.join(OUT, "concept_learning_curve.png")
fig.savefig(fig_path, dpi=150)
print(f"figure: {fig_path}")
