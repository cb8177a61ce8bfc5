"""Experiment driver: deterministic seeding, target-rate calibration, the
frame/superframe loops, metrics records and CSV export."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .allocator import alloc_bs, rr_sequence
from .analysis import UtilityMap
from .channel import UTILITY_CLAMP
from .config import ScenarioConfig
from .envs import FadingEnv, StaticRateEnv
from .learning import (LearningParams, Mood, PlayerState, all_lists,
                       clamp_utility, frame_utility, initial_states, rank_list,
                       run_frame, select_list, simulate_frame, unrank_list,
                       update_mood)
from .threshold import ThresholdState, mc_update, record_first_frame, superframe_utility
from .topology import Topology, concept_topology, random_topology


@dataclass
class MetricsRecord:
    epoch: int
    social_utility_bps: float
    social_utility_norm: float
    normalized_mood: float
    utilities: tuple[float, ...]
    moods: tuple[int, ...]                 # 1 = content, 0 = discontent
    list_ranks: tuple[int, ...]
    alloc: tuple[Optional[int], ...]       # first-subframe CU assignment


@dataclass
class RunSummary:
    time_avg_social_bps: float
    max_social_bps: float
    final_normalized_mood: float
    most_visited_ranks: tuple[int, ...]    # over the last half of the run
    most_visited_social_bps: Optional[float]
    r_tgt: tuple[float, ...]


def build_topology(cfg: ScenarioConfig, rng: np.random.Generator) -> Topology:
    if cfg.topology_kind == "concept":
        return concept_topology(cfg.concept_r1_m, cfg.concept_r2_m,
                                cfg.concept_angles_deg, cfg.concept_pair_angle_deg)
    return random_topology(cfg.cell_radius_m, cfg.n_c, cfg.n_d,
                           cfg.pair_range_m, rng)


def build_static_env(cfg: ScenarioConfig, topo: Topology) -> StaticRateEnv:
    return StaticRateEnv.from_topology(topo, cfg.channel, cfg.power,
                                       cfg.gamma_tgt_db,
                                       test_enabled=cfg.allocation_test_enabled)


def build_fading_env(cfg: ScenarioConfig, topo: Topology,
                     rng: np.random.Generator) -> FadingEnv:
    return FadingEnv(topo, cfg.channel, cfg.power, cfg.gamma_tgt_db, rng,
                     cu_speed_m_s=cfg.cu_speed_m_s,
                     direction_change_p=cfg.direction_change_p,
                     mobility=cfg.mobility,
                     test_enabled=cfg.allocation_test_enabled)


def make_params(cfg: ScenarioConfig, r_tgt: Sequence[float]) -> LearningParams:
    return LearningParams(epsilon=cfg.epsilon, k=cfg.k, n_c=cfg.eff_n_c,
                          n_d=cfg.eff_n_d, list_len=cfg.list_len, r_tgt=tuple(r_tgt),
                          normalization=cfg.normalization_bps)


def calibrate_r_tgt(cfg: ScenarioConfig, topo: Topology,
                    env_seed: np.random.SeedSequence,
                    calib_rng: np.random.Generator) -> tuple[float, ...]:
    """Target rates as a fraction of a baseline epoch's utilities.

    Concept layout: the baseline is the identity allocation profile
    (player d on CU d, every subframe). Random layouts: one epoch with
    uniformly drawn lists in the initial positions, using a throwaway copy of
    the environment stream so the main run is unaffected.
    """
    n_d = cfg.eff_n_d
    if cfg.topology_kind == "concept":
        env = build_static_env(cfg, topo)
        base = [clamp_utility(env.rate(d, d) / cfg.normalization_bps)
                for d in range(n_d)]
        return tuple(cfg.r_tgt_fraction * u for u in base)

    params = make_params(cfg, [0.0] * n_d)
    L = params.num_lists
    lists = tuple(unrank_list(int(calib_rng.integers(L)), params.n_c, params.list_len)
                  for _ in range(n_d))
    if cfg.mode == "pathloss-frame":
        env = build_static_env(cfg, topo)
        rates, _ = simulate_frame(lists, env)
        base = [frame_utility(rates[d], cfg.normalization_bps) for d in range(n_d)]
    else:
        env = build_fading_env(cfg, topo, np.random.default_rng(env_seed))
        states = [ThresholdState(cfg.eff_n_c, n_d, cfg.delta) for _ in range(n_d)]
        base = _superframe_pass(lists, env, params, states)
    return tuple(cfg.r_tgt_fraction * u for u in base)


def _superframe_pass(lists, env: FadingEnv, params: LearningParams,
                     tstates: list[ThresholdState]) -> list[float]:
    """Run the N_D frames of one superframe and return the threshold-based
    utilities committed at its boundary."""
    n_d = params.n_d
    test = env.allocation_test if env.test_enabled else None
    for frame in range(n_d):
        for j in range(1, n_d + 1):
            env.begin_subframe(j)
            profile = alloc_bs(lists, rr_sequence(j, n_d), test=test)
            for d in range(n_d):
                c = profile.transmitting_cu(d)
                if frame == 0:
                    record_first_frame(tstates[d], j - 1, c)
                if c is not None:
                    rate_norm = clamp_utility(env.rate(d, c) / params.normalization)
                    mc_update(tstates[d], c, rate_norm)
    return [superframe_utility(tstates[d]) for d in range(n_d)]


def run_experiment(cfg: ScenarioConfig, seed: Optional[int] = None,
                   horizon: Optional[int] = None,
                   csv_path: Optional[str] = None
                   ) -> tuple[list[MetricsRecord], RunSummary]:
    """Run one scenario. Fully deterministic in (config, seed): the seed fans
    out into independent streams for topology, calibration, the environment
    and the learning dynamics, consumed in a fixed order."""
    seed = cfg.seed if seed is None else seed
    horizon = cfg.horizon if horizon is None else horizon
    ss = np.random.SeedSequence(seed)
    topo_ss, calib_ss, env_ss, learn_ss = ss.spawn(4)

    topo = build_topology(cfg, np.random.default_rng(topo_ss))
    r_tgt = calibrate_r_tgt(cfg, topo, env_ss, np.random.default_rng(calib_ss))
    params = make_params(cfg, r_tgt)
    rng = np.random.default_rng(learn_ss)
    n_d = params.n_d

    records: list[MetricsRecord] = []
    states = initial_states(params)
    if cfg.mode == "pathloss-frame":
        env = build_static_env(cfg, topo)
        cache: dict = {}
        for epoch in range(1, horizon + 1):
            res = run_frame(states, env, params, rng, utility_cache=cache)
            states = res.states
            records.append(_record(epoch, res.social_utility_bps,
                                   res.social_utility_norm, res.normalized_mood,
                                   states, params, res.profiles[0].assigned))
    else:
        env = build_fading_env(cfg, topo, np.random.default_rng(env_ss))
        tstates = [ThresholdState(params.n_c, n_d, cfg.delta) for _ in range(n_d)]
        for epoch in range(1, horizon + 1):
            lists = tuple(select_list(s, params, rng) for s in states)
            utilities, first_alloc = _superframe_epoch(lists, env, params, tstates)
            new_states = []
            for d, prev in enumerate(states):
                mood = update_mood(prev, lists[d], utilities[d], params.r_tgt[d],
                                   params.epsilon, rng)
                new_states.append(PlayerState(lists[d], utilities[d], mood))
            states = new_states
            social = float(sum(utilities))
            mood_norm = sum(1 for s in states if s.mood is Mood.CONTENT) / n_d
            records.append(_record(epoch, social * params.normalization, social,
                                   mood_norm, states, params, first_alloc))

    summary = _summarize(cfg, topo, params, records)
    if csv_path is not None:
        export_csv(records, csv_path)
    return records, summary


def _superframe_epoch(lists, env: FadingEnv, params: LearningParams,
                      tstates: list[ThresholdState]):
    n_d = params.n_d
    test = env.allocation_test if env.test_enabled else None
    first_alloc: tuple[Optional[int], ...] = ()
    for frame in range(n_d):
        for j in range(1, n_d + 1):
            env.begin_subframe(j)
            profile = alloc_bs(lists, rr_sequence(j, n_d), test=test)
            if frame == 0 and j == 1:
                first_alloc = tuple(profile.assigned)
            for d in range(n_d):
                c = profile.transmitting_cu(d)
                if frame == 0:
                    record_first_frame(tstates[d], j - 1, c)
                if c is not None:
                    rate_norm = clamp_utility(env.rate(d, c) / params.normalization)
                    mc_update(tstates[d], c, rate_norm)
    utilities = tuple(superframe_utility(tstates[d]) for d in range(n_d))
    return utilities, first_alloc


def _record(epoch, social_bps, social_norm, mood_norm, states, params, alloc):
    return MetricsRecord(
        epoch=epoch,
        social_utility_bps=social_bps,
        social_utility_norm=social_norm,
        normalized_mood=mood_norm,
        utilities=tuple(s.utility for s in states),
        moods=tuple(1 if s.mood is Mood.CONTENT else 0 for s in states),
        list_ranks=tuple(rank_list(s.list, params.n_c) for s in states),
        alloc=tuple(alloc),
    )


def _summarize(cfg: ScenarioConfig, topo: Topology, params: LearningParams,
               records: list[MetricsRecord]) -> RunSummary:
    social = np.array([r.social_utility_bps for r in records])
    tail = records[len(records) // 2:]
    counts = Counter(r.list_ranks for r in tail)
    most_ranks, _ = counts.most_common(1)[0]
    most_bps = None
    if cfg.mode == "pathloss-frame":
        env = build_static_env(cfg, topo)
        umap = UtilityMap(env, params)
        lists = tuple(unrank_list(r, params.n_c, params.list_len) for r in most_ranks)
        most_bps = sum(umap(lists)) * params.normalization
    return RunSummary(
        time_avg_social_bps=float(social.mean()),
        max_social_bps=float(social.max()),
        final_normalized_mood=records[-1].normalized_mood,
        most_visited_ranks=most_ranks,
        most_visited_social_bps=most_bps,
        r_tgt=tuple(params.r_tgt),
    )


# --- CSV schema: header, one record per epoch, repr-exact floats ---

def _fmt(x: float) -> str:
    return repr(float(x))


def export_csv(records: Sequence[MetricsRecord], path: str) -> None:
    n_d = len(records[0].utilities) if records else 0
    cols = ["epoch", "social_utility_bps", "social_utility_norm", "normalized_mood"]
    for d in range(n_d):
        cols += [f"p{d}_utility", f"p{d}_mood", f"p{d}_list_rank"]
    lines = [",".join(cols)]
    for r in records:
        row = [str(r.epoch), _fmt(r.social_utility_bps), _fmt(r.social_utility_norm),
               _fmt(r.normalized_mood)]
        for d in range(n_d):
            row += [_fmt(r.utilities[d]), str(r.moods[d]), str(r.list_ranks[d])]
        lines.append(",".join(row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def parse_csv(path: str) -> list[MetricsRecord]:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        n_d = (len(header) - 4) // 3
        out = []
        for line in fh:
            f = line.strip().split(",")
            out.append(MetricsRecord(
                epoch=int(f[0]),
                social_utility_bps=float(f[1]),
                social_utility_norm=float(f[2]),
                normalized_mood=float(f[3]),
                utilities=tuple(float(f[4 + 3 * d]) for d in range(n_d)),
                moods=tuple(int(f[5 + 3 * d]) for d in range(n_d)),
                list_ranks=tuple(int(f[6 + 3 * d]) for d in range(n_d)),
                alloc=(),
            ))
    return out


# --- fixed small instances used by the analysis tooling ---

def tiny_game() -> tuple[StaticRateEnv, LearningParams]:
    """2-player, 3-CU, K=1 pathloss game, small enough to build the exact
    perturbed chain. CU 0 sits near the first receiver and CU 1 near the
    second, so each player has one strongly preferred (far) CU and the target
    rates leave exactly one feasible joint action."""
    from .channel import ChannelConfig, PowerConfig
    cfg = ChannelConfig(pathloss_model="powerlaw", alpha=2.0, bandwidth_hz=1.0,
                        explicit_noise_mw=1e-3)
    powers = PowerConfig(10.0, 10.0)
    topo = concept_topology(r1_m=85.0, r2_m=100.0, angles_deg=(0.0, 180.0, 90.0),
                            pair_angle_deg=10.0)
    # keep CU placement, drop the third D2D pair
    topo.d2d_tx = topo.d2d_tx[:2]
    topo.d2d_rx = topo.d2d_rx[:2]
    env = StaticRateEnv.from_topology(topo, cfg, powers, gamma_tgt_db=0.0,
                                      test_enabled=False)
    norm = 1.05 * float(env.rate_matrix.max())
    # best response of each player is the CU across the cell; gate the targets
    # just below those utilities so only the jointly-best profile is feasible
    u_best = [env.rate(0, 1) / norm, env.rate(1, 0) / norm]
    r_tgt = tuple(0.95 * u for u in u_best)
    params = LearningParams(epsilon=0.2, k=3.0, n_c=3, n_d=2, list_len=1,
                            r_tgt=r_tgt, normalization=norm)
    return env, params


def random_scenario(seed: int) -> tuple[StaticRateEnv, LearningParams]:
    """Random 3-player, 4-CU pathloss instance for oracle-agreement runs."""
    from .channel import ChannelConfig, PowerConfig
    rng = np.random.default_rng(np.random.SeedSequence(entropy=0xD2D, spawn_key=(seed,)))
    cfg = ChannelConfig(pathloss_model="powerlaw", alpha=3.0, bandwidth_hz=1.0,
                        explicit_noise_mw=1e-5)
    powers = PowerConfig(10.0, 10.0)
    topo = random_topology(cell_radius_m=250.0, n_c=4, n_d=3, pair_range_m=40.0,
                           rng=rng)
    env = StaticRateEnv.from_topology(topo, cfg, powers, gamma_tgt_db=0.0,
                                      test_enabled=False)
    norm = 1.05 * float(env.rate_matrix.max())
    # gate the targets just below the utilities of the unconstrained social
    # optimum so that every feasible profile is near-optimal
    from .analysis import brute_force_optimum
    free = LearningParams(epsilon=0.25, k=6.0, n_c=4, n_d=3, list_len=1,
                          r_tgt=(0.0, 0.0, 0.0), normalization=norm)
    best = brute_force_optimum(env, free)
    u_star = max(best.utility_profiles, key=sum)
    params = LearningParams(epsilon=0.25, k=6.0, n_c=4, n_d=3, list_len=1,
                            r_tgt=tuple(0.995 * u for u in u_star),
                            normalization=norm)
    return env, params


def run_static_game(env: StaticRateEnv, params: LearningParams, horizon: int,
                    seed: int) -> tuple[list[tuple[int, ...]], list[float]]:
    """Bare learning loop over a prebuilt static environment; returns the
    per-frame joint list ranks and social utilities (normalized)."""
    rng = np.random.default_rng(seed)
    states = initial_states(params)
    cache: dict = {}
    ranks: list[tuple[int, ...]] = []
    social: list[float] = []
    for _ in range(horizon):
        res = run_frame(states, env, params, rng, utility_cache=cache)
        states = res.states
        ranks.append(tuple(rank_list(s.list, params.n_c) for s in states))
        social.append(res.social_utility_norm)
    return ranks, social
