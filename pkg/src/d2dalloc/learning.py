"""Mood-driven distributed learning: list selection, frame utility, mood
update, and the per-frame orchestration against a BS environment.

A player's state is (list, normalized utility, mood). Utilities are clamped
into the open interval (0, 1) so that the epsilon^(1-r) mood probabilities
and the stochastic-potential sums stay well defined.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Protocol, Sequence

import numpy as np

from .allocator import AllocationProfile, D2dList, alloc_bs, rr_sequence
from .channel import UTILITY_CLAMP


class Mood(enum.Enum):
    CONTENT = "C"
    DISCONTENT = "D"


@dataclass(frozen=True)
class PlayerState:
    list: D2dList
    utility: float
    mood: Mood


@dataclass
class LearningParams:
    epsilon: float
    k: float
    n_c: int
    n_d: int
    list_len: int
    r_tgt: Sequence[float]
    normalization: float = 1.0

    def __post_init__(self):
        # epsilon = 0 is allowed only to emulate the unperturbed process P^0
        if not 0 <= self.epsilon < 1:
            raise ValueError(f"epsilon must be in [0, 1), got {self.epsilon}")
        if self.k <= self.n_d:
            raise ValueError(f"k must exceed the number of players ({self.n_d}), got {self.k}")
        if not 1 <= self.list_len <= self.n_c:
            raise ValueError("list length must be between 1 and the number of CUs")
        if self.num_lists < 2:
            raise ValueError("the action set must contain at least 2 lists")
        if len(self.r_tgt) != self.n_d:
            raise ValueError("r_tgt must have one entry per player")
        if self.normalization <= 0:
            raise ValueError("normalization must be positive")

    @property
    def num_lists(self) -> int:
        return num_lists(self.n_c, self.list_len)


# --- action set: lexicographically ranked K-permutations of the CU indices ---

def num_lists(n_c: int, k: int) -> int:
    """Size of the action set, L = P(n_c, k)."""
    if not 1 <= k <= n_c:
        raise ValueError(f"list length {k} out of range for {n_c} CUs")
    return math.perm(n_c, k)


def unrank_list(rank: int, n_c: int, k: int) -> D2dList:
    """rank -> K-permutation, lexicographic over CU indices 0..n_c-1."""
    total = num_lists(n_c, k)
    if not 0 <= rank < total:
        raise ValueError(f"rank {rank} out of range 0..{total - 1}")
    available = list(range(n_c))
    out = []
    for pos in range(k):
        block = math.perm(n_c - 1 - pos, k - 1 - pos)
        idx, rank = divmod(rank, block)
        out.append(available.pop(idx))
    return tuple(out)


def rank_list(lst: D2dList, n_c: int) -> int:
    """K-permutation -> lexicographic rank (inverse of unrank_list)."""
    k = len(lst)
    available = list(range(n_c))
    rank = 0
    for pos, c in enumerate(lst):
        idx = available.index(c)
        rank += idx * math.perm(n_c - 1 - pos, k - 1 - pos)
        available.pop(idx)
    return rank


def all_lists(n_c: int, k: int) -> list[D2dList]:
    return [unrank_list(i, n_c, k) for i in range(num_lists(n_c, k))]


# --- per-frame player logic ---

def select_list(prev: PlayerState, params: LearningParams,
                rng: np.random.Generator) -> D2dList:
    """Frame-start list selection.

    Content: retain w.p. 1 - eps^k, otherwise uniform over the other L-1
    lists. Discontent: uniform over all L lists.
    """
    L = params.num_lists
    if prev.mood is Mood.CONTENT:
        if rng.random() < 1.0 - params.epsilon ** params.k:
            return prev.list
        prev_rank = rank_list(prev.list, params.n_c)
        r = int(rng.integers(L - 1))
        if r >= prev_rank:
            r += 1
        return unrank_list(r, params.n_c, params.list_len)
    return unrank_list(int(rng.integers(L)), params.n_c, params.list_len)


def frame_utility(subframe_rates: Sequence[float], normalization: float,
                  n_d: Optional[int] = None) -> float:
    """Frame utility: frame-average rate, normalized and clamped into (0, 1)."""
    expected = n_d if n_d is not None else len(subframe_rates)
    if len(subframe_rates) != expected:
        raise ValueError(f"expected {expected} subframe rates, got {len(subframe_rates)}")
    raw = sum(subframe_rates) / expected / normalization
    return clamp_utility(raw)


def clamp_utility(u: float) -> float:
    return min(max(u, UTILITY_CLAMP), 1.0 - UTILITY_CLAMP)


def utilities_equal(a: float, b: float) -> bool:
    """Configuration comparison for the mood rule.

    Pathloss-only utilities of an unchanged profile are recomputed bit-exactly,
    so this is effectively exact equality; the tolerance only matters for the
    threshold-based utilities, which move in quantized (> delta) steps.
    """
    return math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-12)


def update_mood(prev: PlayerState, new_list: D2dList, new_utility: float,
                r_tgt: float, epsilon: float, rng: np.random.Generator) -> Mood:
    if (prev.mood is Mood.CONTENT and new_list == prev.list
            and utilities_equal(new_utility, prev.utility)):
        return Mood.CONTENT
    if new_utility >= r_tgt:
        if rng.random() < epsilon ** (1.0 - new_utility):
            return Mood.CONTENT
    return Mood.DISCONTENT


# --- the BS/channel environment a frame runs against ---

class Environment(Protocol):
    n_c: int
    n_d: int
    test_enabled: bool

    def begin_subframe(self, subframe_in_frame: int) -> None: ...
    def allocation_test(self, cu: int, player: int) -> bool: ...
    def rate(self, player: int, cu: int) -> float: ...


def simulate_frame(lists: Sequence[D2dList], env: Environment
                   ) -> tuple[np.ndarray, list[AllocationProfile]]:
    """Run one frame of N_D subframes; returns per-player per-subframe raw
    rates (N_D players x N_D subframes) and the allocation trace."""
    n_d = env.n_d
    rates = np.zeros((n_d, n_d))
    profiles = []
    test = env.allocation_test if env.test_enabled else None
    for j in range(1, n_d + 1):
        env.begin_subframe(j)
        profile = alloc_bs(lists, rr_sequence(j, n_d), test=test)
        profiles.append(profile)
        for d in range(n_d):
            c = profile.transmitting_cu(d)
            if c is not None:
                rates[d, j - 1] = env.rate(d, c)
    return rates, profiles


@dataclass
class FrameResult:
    states: list[PlayerState]
    social_utility_norm: float      # sum of normalized utilities
    social_utility_bps: float       # same, scaled back to bits/s
    normalized_mood: float          # mean of content indicators
    profiles: list[AllocationProfile]


def run_frame(states: Sequence[PlayerState], env: Environment,
              params: LearningParams, rng: np.random.Generator,
              utility_cache: Optional[dict] = None) -> FrameResult:
    """One full epoch of the learning dynamics.

    RNG consumption order is fixed (selection per player in index order, then
    the environment during the subframes, then moods in index order) so runs
    are bit-reproducible under a seed. utility_cache, keyed by the joint list
    profile, short-circuits the frame simulation for static environments.
    """
    new_lists = [select_list(s, params, rng) for s in states]
    key = tuple(new_lists)
    if utility_cache is not None and key in utility_cache:
        utilities, profiles = utility_cache[key]
    else:
        rates, profiles = simulate_frame(new_lists, env)
        utilities = tuple(frame_utility(rates[d], params.normalization)
                          for d in range(env.n_d))
        if utility_cache is not None:
            utility_cache[key] = (utilities, profiles)
    new_states = []
    for d, prev in enumerate(states):
        mood = update_mood(prev, new_lists[d], utilities[d], params.r_tgt[d],
                           params.epsilon, rng)
        new_states.append(PlayerState(new_lists[d], utilities[d], mood))
    social_norm = float(sum(utilities))
    content = sum(1 for s in new_states if s.mood is Mood.CONTENT)
    return FrameResult(new_states, social_norm, social_norm * params.normalization,
                       content / env.n_d, profiles)


def initial_states(params: LearningParams) -> list[PlayerState]:
    """All players discontent on the first list, utility at the clamp floor."""
    first = unrank_list(0, params.n_c, params.list_len)
    return [PlayerState(first, UTILITY_CLAMP, Mood.DISCONTENT)
            for _ in range(params.n_d)]
