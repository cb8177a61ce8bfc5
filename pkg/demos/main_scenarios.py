"""Cell-scale scenarios: 250 m cell, 10 CUs, 10 D2D pairs.

Runs the deterministic-pathloss variant and the shadowing/fast-fading/mobility
variant with the threshold-averaged utility, and prints throughput summaries.
"""

import os

from d2dalloc.config import main_fading_preset, main_pathloss_preset
from d2dalloc.sim import run_experiment

OUT = os.path.join(os.path.dirname(__file__), "out")
os.makedirs(OUT, exist_ok=True)

for make, seeds in ((main_pathloss_preset, (1,)), (main_fading_preset, (0, 1, 2))):
    cfg = make()
    print(f"--- {cfg.name} ({cfg.mode}, horizon {cfg.horizon}) ---")
    for seed in seeds:
        csv_path = os.path.join(OUT, f"{cfg.name}_seed{seed}.csv")
        records, summary = run_experiment(cfg, seed=seed, csv_path=csv_path)
        print(f"seed {seed}: time-avg {summary.time_avg_social_bps / 1e6:.2f} Mbps, "
              f"max {summary.max_social_bps / 1e6:.2f} Mbps, "
              f"final mood {summary.final_normalized_mood:.2f}  -> {csv_path}")
