"""Concrete BS/channel environments the frame engine runs against.

StaticRateEnv is the deterministic pathloss-only world (rates precomputable
per player/CU pair). FadingEnv adds static lognormal shadowing, per-subframe
exponential fast fading and CU mobility.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import channel as ch
from .channel import ChannelConfig, LinkGainTable, PowerConfig
from .topology import MobilityState, Topology, init_mobility, mobility_step


def _distances(points_a, points_b) -> np.ndarray:
    """Pairwise distances, shape (len(a), len(b))."""
    ax = np.array([[p.x, p.y] for p in points_a])
    bx = np.array([[p.x, p.y] for p in points_b])
    diff = ax[:, None, :] - bx[None, :, :]
    return np.sqrt((diff ** 2).sum(axis=2))


def _pathloss(cfg: ChannelConfig, dist_m: np.ndarray) -> np.ndarray:
    if cfg.pathloss_model == "powerlaw":
        return dist_m ** (-cfg.alpha)
    pl_db = 128.1 + 37.6 * np.log10(dist_m / 1000.0)
    return 10.0 ** (-pl_db / 10.0)


def pathloss_gain_table(topo: Topology, cfg: ChannelConfig) -> LinkGainTable:
    """Pathloss-only link gains for a frozen topology."""
    bs = [topo.bs]
    g_cb = _pathloss(cfg, _distances(topo.cu_positions, bs))[:, 0]
    g_db = _pathloss(cfg, _distances(topo.d2d_tx, bs))[:, 0]
    d_pair = np.array([tx.distance_to(rx) for tx, rx in zip(topo.d2d_tx, topo.d2d_rx)])
    g_d = _pathloss(cfg, d_pair)
    g_cd = _pathloss(cfg, _distances(topo.cu_positions, topo.d2d_rx))
    return LinkGainTable(g_cb, g_db, g_d, g_cd)


@dataclass
class StaticRateEnv:
    """Deterministic environment: fixed rate and test-verdict matrices."""
    rate_matrix: np.ndarray    # (n_d, n_c) raw bits/s
    test_matrix: np.ndarray    # (n_d, n_c) bool
    test_enabled: bool = True

    @property
    def n_d(self) -> int:
        return self.rate_matrix.shape[0]

    @property
    def n_c(self) -> int:
        return self.rate_matrix.shape[1]

    def begin_subframe(self, subframe_in_frame: int) -> None:
        pass

    def allocation_test(self, cu: int, player: int) -> bool:
        return bool(self.test_matrix[player, cu])

    def rate(self, player: int, cu: int) -> float:
        return float(self.rate_matrix[player, cu])

    @classmethod
    def from_topology(cls, topo: Topology, cfg: ChannelConfig, powers: PowerConfig,
                      gamma_tgt_db: float, test_enabled: bool = True) -> "StaticRateEnv":
        gains = pathloss_gain_table(topo, cfg)
        n0_ue = cfg.noise_ue_mw()
        n0_bs = cfg.noise_bs_mw()
        rate = np.empty((topo.n_d, topo.n_c))
        for d in range(topo.n_d):
            for c in range(topo.n_c):
                rate[d, c] = ch.d2d_rate(cfg.bandwidth_hz, powers.p_d_mw, gains.g_d[d],
                                         powers.p_c_mw, gains.g_cd[c, d], n0_ue)
        gamma_lin = ch.db_to_linear(gamma_tgt_db)
        test = np.empty((topo.n_d, topo.n_c), dtype=bool)
        for d in range(topo.n_d):
            for c in range(topo.n_c):
                sinr = ch.cu_sinr(powers.p_c_mw, gains.g_cb[c], powers.p_d_mw,
                                  gains.g_db[d], n0_bs)
                test[d, c] = sinr >= gamma_lin
        return cls(rate, test, test_enabled)


class FadingEnv:
    """Stochastic environment: shadowing (static per link), fast fading (fresh
    per link per subframe) and CU mobility (one step per 1 ms subframe).

    The environment owns its RNG stream; draw order per subframe is fixed
    (mobility per CU in index order, then the four fading blocks).
    """

    def __init__(self, topo: Topology, cfg: ChannelConfig, powers: PowerConfig,
                 gamma_tgt_db: float, rng: np.random.Generator,
                 cu_speed_m_s: float = 1.0, direction_change_p: float = 1e-5,
                 mobility: bool = True, test_enabled: bool = True):
        self.topo = topo
        self.cfg = cfg
        self.powers = powers
        self.gamma_lin = ch.db_to_linear(gamma_tgt_db)
        self.rng = rng
        self.mobility = mobility
        self.direction_change_p = direction_change_p
        self.test_enabled = test_enabled
        self.n_c = topo.n_c
        self.n_d = topo.n_d
        self.n0_ue = cfg.noise_ue_mw()
        self.n0_bs = cfg.noise_bs_mw()

        sigma = cfg.shadowing_sigma_db
        self.shad_cb = np.array([ch.sample_shadowing(sigma, rng) for _ in range(self.n_c)])
        self.shad_db = np.array([ch.sample_shadowing(sigma, rng) for _ in range(self.n_d)])
        self.shad_d = np.array([ch.sample_shadowing(sigma, rng) for _ in range(self.n_d)])
        self.shad_cd = np.array([[ch.sample_shadowing(sigma, rng) for _ in range(self.n_d)]
                                 for _ in range(self.n_c)])

        if mobility:
            self.cu_states = [init_mobility(p, cu_speed_m_s, direction_change_p, rng)
                              for p in topo.cu_positions]
        else:
            self.cu_states = None

        # static-geometry pieces
        bs = [topo.bs]
        self._pl_db = _pathloss(cfg, _distances(topo.d2d_tx, bs))[:, 0]
        d_pair = np.array([tx.distance_to(rx) for tx, rx in zip(topo.d2d_tx, topo.d2d_rx)])
        self._pl_d = _pathloss(cfg, d_pair)
        self._rx_xy = np.array([[p.x, p.y] for p in topo.d2d_rx])
        self._refresh_cu_geometry()
        self._draw_fading()

    def _cu_xy(self) -> np.ndarray:
        if self.cu_states is not None:
            return np.array([[s.position.x, s.position.y] for s in self.cu_states])
        return np.array([[p.x, p.y] for p in self.topo.cu_positions])

    def _refresh_cu_geometry(self) -> None:
        xy = self._cu_xy()
        self._pl_cb = _pathloss(self.cfg, np.sqrt((xy ** 2).sum(axis=1)))
        diff = xy[:, None, :] - self._rx_xy[None, :, :]
        self._pl_cd = _pathloss(self.cfg, np.sqrt((diff ** 2).sum(axis=2)))

    def _draw_fading(self) -> None:
        if self.cfg.fast_fading:
            self.f_cb = self.rng.exponential(1.0, self.n_c)
            self.f_db = self.rng.exponential(1.0, self.n_d)
            self.f_d = self.rng.exponential(1.0, self.n_d)
            self.f_cd = self.rng.exponential(1.0, (self.n_c, self.n_d))
        else:
            self.f_cb = np.ones(self.n_c)
            self.f_db = np.ones(self.n_d)
            self.f_d = np.ones(self.n_d)
            self.f_cd = np.ones((self.n_c, self.n_d))

    def begin_subframe(self, subframe_in_frame: int) -> None:
        if self.cu_states is not None:
            self.cu_states = [mobility_step(s, self.topo.cell_radius_m,
                                            self.direction_change_p, self.rng)
                              for s in self.cu_states]
            self._refresh_cu_geometry()
        self._draw_fading()

    def gains(self) -> LinkGainTable:
        """Current effective gains (mainly for tracing/tests)."""
        return LinkGainTable(self._pl_cb * self.shad_cb * self.f_cb,
                             self._pl_db * self.shad_db * self.f_db,
                             self._pl_d * self.shad_d * self.f_d,
                             self._pl_cd * self.shad_cd * self.f_cd)

    def allocation_test(self, cu: int, player: int) -> bool:
        g_cb = self._pl_cb[cu] * self.shad_cb[cu] * self.f_cb[cu]
        g_db = self._pl_db[player] * self.shad_db[player] * self.f_db[player]
        sinr = ch.cu_sinr(self.powers.p_c_mw, g_cb, self.powers.p_d_mw, g_db, self.n0_bs)
        return sinr >= self.gamma_lin

    def rate(self, player: int, cu: int) -> float:
        g_d = self._pl_d[player] * self.shad_d[player] * self.f_d[player]
        g_cd = self._pl_cd[cu, player] * self.shad_cd[cu, player] * self.f_cd[cu, player]
        return ch.d2d_rate(self.cfg.bandwidth_hz, self.powers.p_d_mw, g_d,
                           self.powers.p_c_mw, g_cd, self.n0_ue)
