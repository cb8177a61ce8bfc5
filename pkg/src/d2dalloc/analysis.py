"""Executable stability theory for small instances.

Brute-force social-optimum oracle, exact construction of the perturbed
learning DTMC for tiny games, stationary/stochastic-stability analysis, and
resistance-tree computations on the content/discontent class graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .envs import StaticRateEnv
from .learning import (LearningParams, Mood, all_lists, frame_utility,
                       simulate_frame)

D2dList = tuple[int, ...]
JointLists = tuple[D2dList, ...]

# digits kept when hashing utilities into DTMC state identities; deterministic
# pathloss utilities are finitely many, this makes that operational in floats
UTILITY_QUANT = 12


class UtilityMap:
    """Deterministic joint-lists -> utility-profile map over a static env."""

    def __init__(self, env: StaticRateEnv, params: LearningParams):
        self.env = env
        self.params = params
        self._cache: dict[JointLists, tuple[float, ...]] = {}

    def __call__(self, lists: JointLists) -> tuple[float, ...]:
        u = self._cache.get(lists)
        if u is None:
            rates, _ = simulate_frame(lists, self.env)
            u = tuple(frame_utility(rates[d], self.params.normalization)
                      for d in range(self.env.n_d))
            self._cache[lists] = u
        return u

    def allocation_profile(self, lists: JointLists) -> tuple[Optional[int], ...]:
        """First-subframe CU assignment under this action profile."""
        _, profiles = simulate_frame(lists, self.env)
        return tuple(profiles[0].assigned)


@dataclass
class BruteForceResult:
    w_star: float                                   # max feasible social utility (normalized)
    w_star_bps: float
    optimal_action_profiles: list[JointLists]
    optimal_allocation_profiles: list[tuple[Optional[int], ...]]
    utility_profiles: list[tuple[float, ...]]
    feasible: bool


def brute_force_optimum(env: StaticRateEnv, params: LearningParams,
                        budget: int = 2_000_000, tie_tol: float = 1e-12
                        ) -> BruteForceResult:
    """Exhaustive maximization of the social utility over all action profiles,
    subject to every player meeting its target rate.

    Raises if the profile count exceeds `budget`. When no profile is feasible
    the result carries feasible=False and the unconstrained optimum.
    """
    actions = all_lists(params.n_c, params.list_len)
    total = len(actions) ** params.n_d
    if total > budget:
        raise ValueError(f"{total} profiles exceed the enumeration budget {budget}")
    umap = UtilityMap(env, params)
    r_tgt = np.asarray(params.r_tgt, dtype=float)

    best: dict[bool, tuple[float, list[JointLists], list[tuple[float, ...]]]] = {
        True: (-np.inf, [], []), False: (-np.inf, [], [])}
    for joint in itertools.product(actions, repeat=params.n_d):
        u = umap(joint)
        w = sum(u)
        feasible = all(ud >= t for ud, t in zip(u, r_tgt))
        w_best, profs, us = best[feasible]
        if w > w_best + tie_tol:
            best[feasible] = (w, [joint], [u])
        elif w >= w_best - tie_tol:
            profs.append(joint)
            us.append(u)

    feasible = np.isfinite(best[True][0])
    w, profs, us = best[True] if feasible else best[False]
    allocs = []
    for joint in profs:
        a = umap.allocation_profile(joint)
        if a not in allocs:
            allocs.append(a)
    return BruteForceResult(w, w * params.normalization, profs, allocs, us, feasible)


# --- exact perturbed DTMC for tiny games ---

@dataclass(frozen=True)
class SystemState:
    lists: JointLists
    utilities: tuple[float, ...]    # quantized, always the image of `lists`
    moods: tuple[Mood, ...]

    @property
    def all_content(self) -> bool:
        return all(m is Mood.CONTENT for m in self.moods)

    @property
    def all_discontent(self) -> bool:
        return all(m is Mood.DISCONTENT for m in self.moods)


@dataclass
class ExactDtmc:
    states: list[SystemState]
    index: dict[SystemState, int]
    P: np.ndarray
    epsilon: float


def _quantize(u: Iterable[float]) -> tuple[float, ...]:
    return tuple(round(x, UTILITY_QUANT) for x in u)


def _selection_dist(lst: D2dList, mood: Mood, actions: Sequence[D2dList],
                    epsilon: float, k: float) -> list[tuple[D2dList, float]]:
    L = len(actions)
    if mood is Mood.DISCONTENT:
        return [(a, 1.0 / L) for a in actions]
    ek = epsilon ** k
    out = []
    for a in actions:
        out.append((a, 1.0 - ek if a == lst else ek / (L - 1)))
    return [(a, p) for a, p in out if p > 0.0]


def _mood_dist(prev_mood: Mood, prev_list: D2dList, prev_u: float,
               new_list: D2dList, new_u: float, r_tgt: float,
               epsilon: float) -> list[tuple[Mood, float]]:
    if prev_mood is Mood.CONTENT and new_list == prev_list and new_u == prev_u:
        return [(Mood.CONTENT, 1.0)]
    if new_u >= r_tgt:
        q = epsilon ** (1.0 - new_u)
        return [(m, p) for m, p in ((Mood.CONTENT, q), (Mood.DISCONTENT, 1.0 - q))
                if p > 0.0]
    return [(Mood.DISCONTENT, 1.0)]


def build_exact_dtmc(env: StaticRateEnv, params: LearningParams, epsilon: float,
                     max_states: int = 5000,
                     initial: Optional[SystemState] = None) -> ExactDtmc:
    """Breadth-first closure of the learning chain from an all-discontent
    start, with transition probabilities composed exactly from the selection,
    utility and mood rules."""
    if not 0 < epsilon < 1:
        raise ValueError("the perturbed chain needs epsilon in (0, 1)")
    n_d = params.n_d
    actions = all_lists(params.n_c, params.list_len)
    umap = UtilityMap(env, params)

    def make_state(lists: JointLists, moods: tuple[Mood, ...]) -> SystemState:
        return SystemState(lists, _quantize(umap(lists)), moods)

    if initial is None:
        first: JointLists = tuple(actions[0] for _ in range(n_d))
        initial = make_state(first, tuple(Mood.DISCONTENT for _ in range(n_d)))

    states = [initial]
    index = {initial: 0}
    rows: list[dict[int, float]] = []
    frontier = [initial]
    while frontier:
        next_frontier = []
        for s in frontier:
            row: dict[int, float] = {}
            sel = [_selection_dist(s.lists[d], s.moods[d], actions, epsilon, params.k)
                   for d in range(n_d)]
            for combo in itertools.product(*sel):
                new_lists = tuple(a for a, _ in combo)
                p_lists = float(np.prod([p for _, p in combo]))
                new_u = _quantize(umap(new_lists))
                mdists = [_mood_dist(s.moods[d], s.lists[d], s.utilities[d],
                                     new_lists[d], new_u[d], params.r_tgt[d], epsilon)
                          for d in range(n_d)]
                for mcombo in itertools.product(*mdists):
                    moods = tuple(m for m, _ in mcombo)
                    p = p_lists * float(np.prod([q for _, q in mcombo]))
                    if p == 0.0:
                        continue
                    t = SystemState(new_lists, new_u, moods)
                    j = index.get(t)
                    if j is None:
                        j = len(states)
                        if j >= max_states:
                            raise ValueError("reachable state space exceeds max_states")
                        index[t] = j
                        states.append(t)
                        next_frontier.append(t)
                    row[j] = row.get(j, 0.0) + p
            rows.append(row)
        frontier = next_frontier

    n = len(states)
    P = np.zeros((n, n))
    for i, row in enumerate(rows):
        for j, p in row.items():
            P[i, j] = p
    return ExactDtmc(states, index, P, epsilon)


def stationary_distribution(dtmc: ExactDtmc, residual_tol: float = 1e-10) -> np.ndarray:
    """Unique stationary vector of an irreducible, aperiodic chain."""
    P = dtmc.P
    n = P.shape[0]
    n_comp, _ = connected_components(csr_matrix(P > 0), connection="strong")
    if n_comp != 1:
        raise ValueError(f"chain is reducible ({n_comp} strongly connected components)")
    # solve pi (P - I) = 0 with sum(pi) = 1
    A = (P.T - np.eye(n))
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    pi = np.linalg.solve(A, b)
    pi = np.clip(pi, 0.0, None)
    pi /= pi.sum()
    residual = np.max(np.abs(pi @ P - pi))
    if residual > residual_tol:
        raise RuntimeError(f"stationary solve residual {residual} above {residual_tol}")
    return pi


def stochastically_stable_set(dtmcs: Sequence[ExactDtmc],
                              oracle: Optional[BruteForceResult] = None,
                              umap: Optional[UtilityMap] = None,
                              mass_floor: float = 0.01) -> list[SystemState]:
    """States whose stationary mass clears `mass_floor` and grows as the
    perturbation shrinks, over a family of chains with decreasing epsilon.

    With an oracle and utility map supplied, the result is cross-checked
    against the three stability conditions (content moods, utility alignment,
    social-utility maximality).
    """
    if len(dtmcs) < 3:
        raise ValueError("need stationary solves for at least 3 epsilon values")
    eps = [d.epsilon for d in dtmcs]
    if sorted(eps, reverse=True) != eps:
        raise ValueError("dtmcs must be ordered by decreasing epsilon")
    base = dtmcs[0]
    if any(d.states != base.states for d in dtmcs[1:]):
        raise ValueError("dtmc family members have inconsistent state spaces")
    pis = [stationary_distribution(d) for d in dtmcs]
    stable = []
    for i, s in enumerate(base.states):
        masses = [pi[i] for pi in pis]
        if masses[-1] >= mass_floor and all(
                b >= a - 1e-12 for a, b in zip(masses, masses[1:])):
            stable.append(s)
    if oracle is not None and umap is not None:
        opt = set(oracle.optimal_action_profiles)
        for s in stable:
            if not s.all_content:
                raise ValueError(f"stable state {s} has a discontent player")
            if s.utilities != _quantize(umap(s.lists)):
                raise ValueError(f"stable state {s} has misaligned utilities")
            if s.lists not in opt:
                raise ValueError(f"stable state {s} is not socially optimal")
    return stable


def max_path_logprob(dtmc: ExactDtmc, sources: Sequence[int], targets: Sequence[int],
                     max_steps: int = 6) -> float:
    """log of the most probable path (up to max_steps hops) from any source
    state to any target state; used to check resistance scaling in epsilon."""
    with np.errstate(divide="ignore"):
        logP = np.log(dtmc.P)
    v = np.full(dtmc.P.shape[0], -np.inf)
    v[list(sources)] = 0.0
    best = -np.inf
    for _ in range(max_steps):
        v = np.max(v[:, None] + logP, axis=0)
        cand = np.max(v[list(targets)])
        best = max(best, cand)
    return float(best)


# --- resistance trees and stochastic potentials ---

@dataclass
class ResistanceGraph:
    vertices: list
    edges: dict[tuple, float] = field(default_factory=dict)

    def add_edge(self, u, v, resistance: float) -> None:
        if resistance < 0:
            raise ValueError("resistances must be >= 0")
        self.edges[(u, v)] = resistance


def edge_resistance(kind: str, k: float, utilities: Sequence[float]) -> float:
    """Minimum transition resistance between recurrence classes.

    kind is one of "C->D", "D->C", "C->C"; utilities are the (normalized)
    player utilities of the destination profile.
    """
    u = np.asarray(utilities, dtype=float)
    if np.any(u <= 0) or np.any(u >= 1):
        raise ValueError("utilities must lie strictly in (0, 1)")
    if kind == "C->D":
        return float(k)
    if kind == "D->C":
        return float(np.sum(1.0 - u))
    if kind == "C->C":
        return float(k + np.min(1.0 - u))
    raise ValueError(f"unknown transition kind {kind!r}")


def class_graph(k: float, utilities: Sequence[float]) -> ResistanceGraph:
    """Three-vertex recurrence-class graph: x the all-discontent class, y and
    z two all-content classes, with the three canonical edge resistances."""
    g = ResistanceGraph(["x", "y", "z"])
    for c in ("y", "z"):
        g.add_edge("x", c, edge_resistance("D->C", k, utilities))
        g.add_edge(c, "x", edge_resistance("C->D", k, utilities))
    g.add_edge("y", "z", edge_resistance("C->C", k, utilities))
    g.add_edge("z", "y", edge_resistance("C->C", k, utilities))
    return g


def min_resistance_tree(graph: ResistanceGraph, root) -> tuple[set[tuple], float]:
    """Exhaustive minimum-resistance spanning i-tree (arborescence into root).

    Every non-root vertex contributes exactly one outgoing edge and must reach
    the root through them. Exact, intended for graphs of <= 8 vertices.
    """
    if root not in graph.vertices:
        raise ValueError(f"{root!r} is not a vertex")
    others = [v for v in graph.vertices if v != root]
    if len(graph.vertices) > 8:
        raise ValueError("exhaustive i-tree enumeration is limited to 8 vertices")
    if not others:
        return set(), 0.0
    out_edges = {v: [e for e in graph.edges if e[0] == v] for v in others}
    if any(not es for es in out_edges.values()):
        raise ValueError("some vertex has no outgoing edge; root unreachable")
    best_tree, best_res = None, np.inf
    for combo in itertools.product(*(out_edges[v] for v in others)):
        parent = {e[0]: e[1] for e in combo}
        ok = True
        for v in others:
            seen = set()
            cur = v
            while cur != root:
                if cur in seen or cur not in parent:
                    ok = False
                    break
                seen.add(cur)
                cur = parent[cur]
            if not ok:
                break
        if not ok:
            continue
        res = sum(graph.edges[e] for e in combo)
        if res < best_res:
            best_res = res
            best_tree = set(combo)
    if best_tree is None:
        raise ValueError("no spanning i-tree reaches the root")
    return best_tree, float(best_res)


def stochastic_potentials(utilities: Sequence[float], k: float,
                          num_content_classes: int) -> tuple[float, float]:
    """(gamma_C0, gamma_D0) of the content/discontent recurrence classes:
    k(|C0|-1) + sum_d(1 - r_d) and k|C0|."""
    u = np.asarray(utilities, dtype=float)
    if np.any(u <= 0) or np.any(u >= 1):
        raise ValueError("utilities must lie strictly in (0, 1)")
    if num_content_classes < 1:
        raise ValueError("need at least one content class")
    gamma_c = k * (num_content_classes - 1) + float(np.sum(1.0 - u))
    gamma_d = k * num_content_classes
    return gamma_c, gamma_d
