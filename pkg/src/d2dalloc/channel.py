"""Link-level channel model: pathloss, shadowing, fast fading, noise, SINR and rate.

All internal arithmetic is in linear units (mW for powers, unitless gains).
dB shows up only at configuration and reporting boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Floor used when clamping normalized utilities into the open interval (0, 1).
UTILITY_CLAMP = 1e-9


def db_to_linear(x_db: float) -> float:
    return 10.0 ** (x_db / 10.0)


def linear_to_db(x: float) -> float:
    if x <= 0:
        raise ValueError(f"cannot convert non-positive value {x} to dB")
    return 10.0 * math.log10(x)


def pathloss_gain(distance_m: float, alpha: float) -> float:
    """Power-law pathloss gain 1/d^alpha."""
    if distance_m <= 0:
        raise ValueError(f"distance must be positive, got {distance_m}")
    return distance_m ** (-alpha)


def lte_pathloss_db(distance_km: float) -> float:
    """LTE uplink pathloss 128.1 + 37.6 log10(d) with d in kilometers."""
    if distance_km <= 0:
        raise ValueError(f"distance must be positive, got {distance_km}")
    return 128.1 + 37.6 * math.log10(distance_km)


def lte_pathloss_gain(distance_m: float) -> float:
    return db_to_linear(-lte_pathloss_db(distance_m / 1000.0))


def noise_power_dbm(density_dbm_hz: float, bandwidth_hz: float, noise_figure_db: float) -> float:
    """Thermal noise power over a bandwidth, including the receiver noise figure."""
    if bandwidth_hz <= 0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz}")
    return density_dbm_hz + 10.0 * math.log10(bandwidth_hz) + noise_figure_db


def noise_power_mw(density_dbm_hz: float, bandwidth_hz: float, noise_figure_db: float) -> float:
    return db_to_linear(noise_power_dbm(density_dbm_hz, bandwidth_hz, noise_figure_db))


def sample_shadowing(sigma_db: float, rng: np.random.Generator) -> float:
    """Lognormal shadowing multiplier, 10^(X/10) with X ~ N(0, sigma_db^2).

    sigma_db = 0 returns exactly 1 (and consumes no randomness).
    """
    if sigma_db < 0:
        raise ValueError(f"shadowing sigma must be >= 0, got {sigma_db}")
    if sigma_db == 0:
        return 1.0
    return db_to_linear(rng.normal(0.0, sigma_db))


def sample_fast_fading(rng: np.random.Generator) -> float:
    """Fast-fading power multiplier, exponential with mean 1."""
    return rng.exponential(1.0)


def effective_gain(base_gain: float, shadow: float = 1.0, fading: float = 1.0) -> float:
    """Composite link gain: pathloss x shadowing x fast fading."""
    return base_gain * shadow * fading


def cu_sinr(p_c_mw: float, g_cb: float, p_d_mw: float, g_db: float, n0_mw: float) -> float:
    """Uplink SINR of a CU at the BS under reuse by one D2D transmitter.

    Pass p_d_mw * g_db = 0 for the interference-free (no reuse) case.
    """
    return (p_c_mw * g_cb) / (p_d_mw * g_db + n0_mw)


def d2d_rate(b_hz: float, p_d_mw: float, g_d: float, p_c_mw: float, g_cd: float,
             n0_mw: float) -> float:
    """Achievable D2D rate in bits/s, Shannon form B*log2(1 + SINR)."""
    sinr = (p_d_mw * g_d) / (p_c_mw * g_cd + n0_mw)
    return b_hz * math.log2(1.0 + sinr)


@dataclass
class PowerConfig:
    """Fixed transmit powers (no power control)."""
    p_c_mw: float
    p_d_mw: float

    def __post_init__(self):
        if self.p_c_mw <= 0 or self.p_d_mw <= 0:
            raise ValueError("transmit powers must be positive")


@dataclass
class ChannelConfig:
    """Channel model knobs.

    pathloss_model is "powerlaw" (uses alpha) or "lte" (128.1 + 37.6 log10 d_km).
    explicit_noise_mw, when set, overrides the density-based noise at both
    receivers (used by the concept scenario where N0 = 0.1 mW).
    """
    pathloss_model: str = "lte"
    alpha: float = 2.0
    shadowing_sigma_db: float = 0.0
    fast_fading: bool = False
    noise_density_dbm_hz: float = -174.0
    bandwidth_hz: float = 360e3
    ue_noise_figure_db: float = 9.0
    bs_noise_figure_db: float = 5.0
    explicit_noise_mw: float | None = None

    def __post_init__(self):
        if self.pathloss_model not in ("powerlaw", "lte"):
            raise ValueError(f"unknown pathloss model {self.pathloss_model!r}")
        if self.alpha <= 0:
            raise ValueError("pathloss exponent must be positive")
        if self.bandwidth_hz <= 0:
            raise ValueError("bandwidth must be positive")
        if self.shadowing_sigma_db < 0:
            raise ValueError("shadowing sigma must be >= 0")

    def pathloss(self, distance_m: float) -> float:
        if self.pathloss_model == "powerlaw":
            return pathloss_gain(distance_m, self.alpha)
        return lte_pathloss_gain(distance_m)

    def noise_bs_mw(self) -> float:
        """Noise power at the BS receiver (enters the CU SINR)."""
        if self.explicit_noise_mw is not None:
            return self.explicit_noise_mw
        return noise_power_mw(self.noise_density_dbm_hz, self.bandwidth_hz,
                              self.bs_noise_figure_db)

    def noise_ue_mw(self) -> float:
        """Noise power at a D2D receiver (a UE)."""
        if self.explicit_noise_mw is not None:
            return self.explicit_noise_mw
        return noise_power_mw(self.noise_density_dbm_hz, self.bandwidth_hz,
                              self.ue_noise_figure_db)


@dataclass
class LinkGainTable:
    """All link gains in one place, with the partial-CSI knowledge split.

    g_cb and g_db are measurable at the BS; g_d and g_cd are not and are only
    ever used on the D2D side of the simulation.
    """
    g_cb: np.ndarray          # (N_C,) CU -> BS
    g_db: np.ndarray          # (N_D,) D2D tx -> BS
    g_d: np.ndarray           # (N_D,) D2D tx -> its rx
    g_cd: np.ndarray          # (N_C, N_D) CU -> D2D rx
    known_at_bs_cb: bool = True
    known_at_bs_db: bool = True

    def __post_init__(self):
        self.g_cb = np.asarray(self.g_cb, dtype=float)
        self.g_db = np.asarray(self.g_db, dtype=float)
        self.g_d = np.asarray(self.g_d, dtype=float)
        self.g_cd = np.asarray(self.g_cd, dtype=float)
        n_c, n_d = self.g_cb.shape[0], self.g_db.shape[0]
        if self.g_d.shape != (n_d,) or self.g_cd.shape != (n_c, n_d):
            raise ValueError("gain table dimensions are inconsistent")
        for name, arr in (("g_cb", self.g_cb), ("g_db", self.g_db),
                          ("g_d", self.g_d), ("g_cd", self.g_cd)):
            if not np.all(arr > 0):
                raise ValueError(f"all {name} gains must be positive")

    @property
    def n_c(self) -> int:
        return self.g_cb.shape[0]

    @property
    def n_d(self) -> int:
        return self.g_db.shape[0]
