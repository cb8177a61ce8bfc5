"""Node placement and CU mobility.

The BS sits at the origin. CUs and D2D transmitters are dropped uniformly in
a disk cell; each D2D receiver is dropped uniformly in a small disk around
its transmitter. The concept layout is a fixed symmetric semicircle geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np


@dataclass(frozen=True)
class Position:
    x: float
    y: float

    def distance_to(self, other: "Position") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def radius(self) -> float:
        return math.hypot(self.x, self.y)


def _from_polar(r_m: float, angle_rad: float) -> Position:
    return Position(r_m * math.cos(angle_rad), r_m * math.sin(angle_rad))


@dataclass
class Topology:
    cu_positions: list[Position]
    d2d_tx: list[Position]
    d2d_rx: list[Position]
    cell_radius_m: float
    bs: Position = Position(0.0, 0.0)

    @property
    def n_c(self) -> int:
        return len(self.cu_positions)

    @property
    def n_d(self) -> int:
        return len(self.d2d_tx)


def place_uniform_disk(radius_m: float, rng: np.random.Generator,
                       center: Position = Position(0.0, 0.0)) -> Position:
    """Uniform point in a disk: radial coordinate R*sqrt(u), uniform angle."""
    if radius_m <= 0:
        raise ValueError("radius must be positive")
    r = radius_m * math.sqrt(rng.random())
    theta = rng.random() * 2.0 * math.pi
    return Position(center.x + r * math.cos(theta), center.y + r * math.sin(theta))


def place_receiver_near(tx: Position, range_m: float, cell_radius_m: float,
                        rng: np.random.Generator) -> Position:
    """Receiver uniform in a disk around its transmitter, resampled into the cell."""
    if tx.radius() > cell_radius_m:
        raise ValueError("transmitter lies outside the cell")
    while True:
        rx = place_uniform_disk(range_m, rng, center=tx)
        if rx.radius() <= cell_radius_m:
            return rx


def random_topology(cell_radius_m: float, n_c: int, n_d: int, pair_range_m: float,
                    rng: np.random.Generator) -> Topology:
    cus = [place_uniform_disk(cell_radius_m, rng) for _ in range(n_c)]
    txs = [place_uniform_disk(cell_radius_m, rng) for _ in range(n_d)]
    rxs = [place_receiver_near(tx, pair_range_m, cell_radius_m, rng) for tx in txs]
    return Topology(cus, txs, rxs, cell_radius_m)


def concept_topology(r1_m: float = 50.0, r2_m: float = 100.0,
                     angles_deg: tuple[float, float, float] = (0.0, 90.0, 180.0),
                     pair_angle_deg: float = 10.0) -> Topology:
    """Fixed three-CU / three-pair semicircle layout.

    CU i sits at radius r1 on angle angles_deg[i]; receiver i at radius r2 on
    the same angle; transmitter i at radius r2 offset by pair_angle_deg, so
    each pair subtends pair_angle_deg at the BS and the tx-rx separation is
    2*r2*sin(pair_angle_deg/2) = 17.43 m for the defaults.

    The angle triple is configurable; the default mirror-symmetric layout
    makes the two cyclic allocation profiles exactly co-optimal.
    """
    cus, txs, rxs = [], [], []
    for a in angles_deg:
        ar = math.radians(a)
        cus.append(_from_polar(r1_m, ar))
        rxs.append(_from_polar(r2_m, ar))
        txs.append(_from_polar(r2_m, ar + math.radians(pair_angle_deg)))
    return Topology(cus, txs, rxs, cell_radius_m=2.0 * r2_m)


@dataclass
class MobilityState:
    """Per-CU random-direction walk state, sampled once per 1 ms subframe."""
    position: Position
    direction_rad: float
    speed_m_s: float
    remaining_subframes: int


def draw_duration(p: float, rng: np.random.Generator) -> int:
    """Number of subframes until the next direction change, mean (1-p)/p.

    Clamped below at 1 so that p -> 1 degenerates to a direction change in
    every subframe rather than a zero-length leg.
    """
    if not 0 < p <= 1:
        raise ValueError("p must be in (0, 1]")
    return max(int(rng.geometric(p)) - 1, 1)


def init_mobility(position: Position, speed_m_s: float, p: float,
                  rng: np.random.Generator) -> MobilityState:
    direction = rng.random() * 2.0 * math.pi
    return MobilityState(position, direction, speed_m_s, draw_duration(p, rng))


def mobility_step(state: MobilityState, cell_radius_m: float, p: float,
                  rng: np.random.Generator) -> MobilityState:
    """Advance one subframe (1 ms).

    If the full-millisecond step would leave the cell, the position is held at
    the last in-cell sample (the fractional travel is truncated) and a new
    direction is drawn from the angles that keep the next step inside.
    """
    step = state.speed_m_s * 1e-3
    cand = Position(state.position.x + step * math.cos(state.direction_rad),
                    state.position.y + step * math.sin(state.direction_rad))
    if cand.radius() > cell_radius_m:
        # boundary hit: stay put, redirect inward, restart the leg
        direction = _inward_direction(state.position, step, cell_radius_m, rng)
        return MobilityState(state.position, direction, state.speed_m_s,
                             draw_duration(p, rng))
    remaining = state.remaining_subframes - 1
    if remaining <= 0:
        direction = rng.random() * 2.0 * math.pi
        return MobilityState(cand, direction, state.speed_m_s, draw_duration(p, rng))
    return replace(state, position=cand, remaining_subframes=remaining)


def _inward_direction(pos: Position, step: float, cell_radius_m: float,
                      rng: np.random.Generator) -> float:
    while True:
        theta = rng.random() * 2.0 * math.pi
        nxt = Position(pos.x + step * math.cos(theta), pos.y + step * math.sin(theta))
        if nxt.radius() <= cell_radius_m:
            return theta
