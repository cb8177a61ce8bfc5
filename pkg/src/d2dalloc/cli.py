"""Command-line front end: run experiments, query the brute-force oracle,
analyse the tiny-game DTMC and emit calibrated target rates."""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import analysis, sim
from .config import PRESETS, load_config, preset


def _load_scenario(args) -> "ScenarioConfig":
    if args.config:
        return load_config(args.config)
    return preset(args.preset)


def _add_scenario_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--config", help="path to a scenario config file")
    g.add_argument("--preset", choices=sorted(PRESETS), help="built-in scenario")


def cmd_run(args) -> int:
    cfg = _load_scenario(args)
    os.makedirs(args.output_dir, exist_ok=True)
    seed = args.seed if args.seed is not None else cfg.seed
    csv_path = os.path.join(args.output_dir, f"{cfg.name}_seed{seed}.csv")
    records, summary = sim.run_experiment(cfg, seed=args.seed, horizon=args.horizon,
                                          csv_path=csv_path)
    print(f"scenario: {cfg.name}  mode: {cfg.mode}  seed: {seed}  epochs: {len(records)}")
    print(f"csv: {csv_path}")
    print(f"time-averaged social utility: {summary.time_avg_social_bps:.6g} bps")
    print(f"max social utility: {summary.max_social_bps:.6g} bps")
    print(f"final normalized mood: {summary.final_normalized_mood:.3f}")
    if summary.most_visited_social_bps is not None:
        print(f"most-visited profile (last half): ranks {summary.most_visited_ranks}, "
              f"social utility {summary.most_visited_social_bps:.6g} bps")
    return 0


def cmd_oracle(args) -> int:
    cfg = _load_scenario(args)
    if cfg.mode != "pathloss-frame":
        print("oracle requires a deterministic pathloss scenario", file=sys.stderr)
        return 2
    ss = np.random.SeedSequence(cfg.seed)
    topo_ss, calib_ss, env_ss, _ = ss.spawn(4)
    topo = sim.build_topology(cfg, np.random.default_rng(topo_ss))
    r_tgt = sim.calibrate_r_tgt(cfg, topo, env_ss, np.random.default_rng(calib_ss))
    params = sim.make_params(cfg, r_tgt)
    env = sim.build_static_env(cfg, topo)
    result = analysis.brute_force_optimum(env, params, budget=args.budget)
    print(f"scenario: {cfg.name}")
    print(f"feasible: {result.feasible}")
    print(f"W*: {result.w_star:.6f} (normalized), {result.w_star_bps:.6g} bps")
    print(f"optimal action profiles: {len(result.optimal_action_profiles)}")
    for a in result.optimal_allocation_profiles:
        print(f"  allocation profile: {a}")
    return 0


def cmd_dtmc(args) -> int:
    env, params = sim.tiny_game()
    epsilons = sorted((float(x) for x in args.epsilons.split(",")), reverse=True)
    oracle = analysis.brute_force_optimum(env, params)
    umap = analysis.UtilityMap(env, params)
    dtmcs = [analysis.build_exact_dtmc(env, params, e) for e in epsilons]
    print(f"tiny game: {params.n_d} players, {params.n_c} CUs, K={params.list_len}, "
          f"{len(dtmcs[0].states)} reachable states")
    opt = set(oracle.optimal_action_profiles)
    for d in dtmcs:
        pi = analysis.stationary_distribution(d)
        mass = sum(pi[i] for i, s in enumerate(d.states)
                   if s.all_content and s.lists in opt)
        print(f"epsilon={d.epsilon:g}: pi-mass on optimal content states = {mass:.4f}")
    stable = analysis.stochastically_stable_set(dtmcs, oracle=oracle, umap=umap)
    print(f"stochastically stable states: {len(stable)}")
    for s in stable:
        print(f"  lists={s.lists} utilities={tuple(round(float(u), 4) for u in s.utilities)}")
    return 0


def cmd_calibrate(args) -> int:
    cfg = _load_scenario(args)
    ss = np.random.SeedSequence(cfg.seed if args.seed is None else args.seed)
    topo_ss, calib_ss, env_ss, _ = ss.spawn(4)
    topo = sim.build_topology(cfg, np.random.default_rng(topo_ss))
    r_tgt = sim.calibrate_r_tgt(cfg, topo, env_ss, np.random.default_rng(calib_ss))
    for d, t in enumerate(r_tgt):
        print(f"r_tgt[{d}] = {t!r}")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="d2dalloc",
                                     description="D2D underlay resource-allocation "
                                                 "simulator and analysis toolkit")
    subs = parser.add_subparsers(dest="command", required=True)

    p_run = subs.add_parser("run", help="run a scenario and export metrics CSV")
    _add_scenario_args(p_run)
    p_run.add_argument("--seed", type=int, help="override the scenario seed")
    p_run.add_argument("--horizon", type=int, help="override the epoch count")
    p_run.add_argument("--output-dir", default=".", help="directory for the CSV")
    p_run.set_defaults(func=cmd_run)

    p_or = subs.add_parser("oracle", help="brute-force social optimum of a scenario")
    _add_scenario_args(p_or)
    p_or.add_argument("--budget", type=int, default=2_000_000,
                      help="max number of enumerated action profiles")
    p_or.set_defaults(func=cmd_oracle)

    p_dt = subs.add_parser("dtmc", help="exact stability analysis of the tiny game")
    p_dt.add_argument("--epsilons", default="0.2,0.1,0.05",
                      help="comma-separated perturbation values")
    p_dt.set_defaults(func=cmd_dtmc)

    p_cal = subs.add_parser("calibrate", help="emit calibrated target rates")
    _add_scenario_args(p_cal)
    p_cal.add_argument("--seed", type=int, help="override the scenario seed")
    p_cal.set_defaults(func=cmd_calibrate)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
