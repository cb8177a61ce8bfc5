"""Threshold-gated, Monte-Carlo-averaged utility for fading/mobility runs.

A frame is repeated N_D times to form a superframe; list selection and mood
updates then happen on superframe boundaries. During the first frame of each
superframe the player records which CU it got in each subframe; throughout
the superframe it keeps running-average rates per CU, and at the boundary it
commits averages into u_d only when uncommitted or the change exceeds delta.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import UTILITY_CLAMP
from .learning import clamp_utility

# a_d entry for a subframe with no (passing) allocation
UNALLOCATED = -1


@dataclass
class ThresholdState:
    """Per-player bookkeeping for the threshold utility (vectors a_d, n_d,
    r_a, u_d of the scheme)."""
    n_c: int
    n_d: int
    delta: float
    first_frame_cus: np.ndarray = field(init=False)   # a_d, length N_D
    counts: np.ndarray = field(init=False)            # n_d, length N_C
    running_avg: np.ndarray = field(init=False)       # r_a, length N_C
    committed: np.ndarray = field(init=False)         # u_d, length N_C

    def __post_init__(self):
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        self.first_frame_cus = np.full(self.n_d, UNALLOCATED, dtype=int)
        self.counts = np.zeros(self.n_c, dtype=int)
        self.running_avg = np.zeros(self.n_c)
        self.committed = np.zeros(self.n_c)   # 0 marks "never committed"


@dataclass
class SuperframeClock:
    """Subframe bookkeeping; a superframe spans n_d^2 subframes."""
    n_d: int
    subframe: int = 0   # global 1-based index of the last completed subframe

    def tick(self) -> int:
        self.subframe += 1
        return self.subframe

    @property
    def in_first_frame(self) -> bool:
        return (self.subframe - 1) % (self.n_d ** 2) < self.n_d

    @property
    def slot_in_frame(self) -> int:
        return (self.subframe - 1) % self.n_d

    @property
    def at_superframe_end(self) -> bool:
        return self.subframe % (self.n_d ** 2) == 0


def record_first_frame(state: ThresholdState, slot: int, cu: int | None) -> None:
    """Store the CU allocated in slot `slot` (0-based) of the superframe's
    first frame; unallocated or failed-test subframes record a sentinel."""
    if not 0 <= slot < state.n_d:
        raise ValueError(f"slot {slot} outside the first frame")
    state.first_frame_cus[slot] = UNALLOCATED if cu is None else cu


def mc_update(state: ThresholdState, cu: int, rate_norm: float) -> None:
    """Fold one observed (normalized) rate into CU `cu`'s running mean."""
    state.counts[cu] += 1
    n = state.counts[cu]
    state.running_avg[cu] += (rate_norm - state.running_avg[cu]) / n


def superframe_utility(state: ThresholdState) -> float:
    """Superframe-boundary commit and readout.

    Each CU's committed value is refreshed when it was never committed or the
    running average moved by more than delta; the utility is the mean of the
    committed values over the first-frame allocation sequence, with sentinel
    slots contributing the clamp floor.
    """
    refresh = (state.committed == 0.0) | (
        np.abs(state.committed - state.running_avg) > state.delta)
    state.committed[refresh] = state.running_avg[refresh]
    total = 0.0
    for c in state.first_frame_cus:
        total += UTILITY_CLAMP if c == UNALLOCATED else state.committed[c]
    return clamp_utility(total / state.n_d)
