"""Scenario configuration: presets mirroring the two reference experiments,
plus an INI-style config file loader (key = value under sections, unknown
keys rejected)."""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace

from .channel import ChannelConfig, PowerConfig

MODES = ("pathloss-frame", "fading-superframe")
TOPOLOGY_KINDS = ("concept", "random")


@dataclass
class ScenarioConfig:
    name: str = "custom"
    mode: str = "pathloss-frame"
    horizon: int = 1000                  # frames or superframes, per mode
    seed: int = 0
    allocation_test_enabled: bool = True

    topology_kind: str = "random"
    cell_radius_m: float = 250.0
    n_c: int = 10
    n_d: int = 10
    pair_range_m: float = 50.0
    # concept layout knobs
    concept_r1_m: float = 50.0
    concept_r2_m: float = 100.0
    concept_angles_deg: tuple[float, float, float] = (0.0, 90.0, 180.0)
    concept_pair_angle_deg: float = 10.0

    channel: ChannelConfig = field(default_factory=ChannelConfig)
    power: PowerConfig = field(default_factory=lambda: PowerConfig(250.0, 1.0))

    epsilon: float = 0.7
    k: float = 23.0
    list_len: int = 3
    normalization_bps: float = 10e6
    gamma_tgt_db: float = 0.0
    r_tgt_fraction: float = 0.5
    delta: float = 0.01                  # threshold-utility hysteresis

    cu_speed_m_s: float = 1.0
    direction_change_p: float = 1e-5
    mobility: bool = False

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.topology_kind not in TOPOLOGY_KINDS:
            raise ValueError(f"topology kind must be one of {TOPOLOGY_KINDS}")
        if self.horizon < 1:
            raise ValueError("horizon must be >= 1")
        if not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must be in (0, 1), got {self.epsilon}")
        n_d = 3 if self.topology_kind == "concept" else self.n_d
        if self.k <= n_d:
            raise ValueError(f"k must exceed the number of players ({n_d}), got {self.k}")
        n_c = 3 if self.topology_kind == "concept" else self.n_c
        if not 1 <= self.list_len <= n_c:
            raise ValueError("list length must be between 1 and the number of CUs")
        if self.normalization_bps <= 0:
            raise ValueError("normalization must be positive")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if not 0 < self.r_tgt_fraction < 1:
            raise ValueError("r_tgt fraction must be in (0, 1)")

    @property
    def eff_n_c(self) -> int:
        return 3 if self.topology_kind == "concept" else self.n_c

    @property
    def eff_n_d(self) -> int:
        return 3 if self.topology_kind == "concept" else self.n_d


def concept_preset() -> ScenarioConfig:
    """Three-CU / three-pair semicircle scenario (unit bandwidth, explicit
    0.1 mW noise, allocation test bypassed)."""
    return ScenarioConfig(
        name="concept",
        mode="pathloss-frame",
        horizon=10_000,
        seed=7,
        allocation_test_enabled=False,
        topology_kind="concept",
        channel=ChannelConfig(pathloss_model="powerlaw", alpha=2.0,
                              bandwidth_hz=1.0, explicit_noise_mw=0.1),
        power=PowerConfig(10.0, 10.0),
        epsilon=0.5, k=11.0, list_len=2,
        normalization_bps=1.0, gamma_tgt_db=0.0,
    )


def main_pathloss_preset() -> ScenarioConfig:
    """250 m cell, 10 CUs / 10 pairs, LTE pathloss, no fading or mobility."""
    return ScenarioConfig(
        name="main-pathloss",
        mode="pathloss-frame",
        horizon=2_000,
        seed=1,
        topology_kind="random",
        cell_radius_m=250.0, n_c=10, n_d=10, pair_range_m=50.0,
        channel=ChannelConfig(pathloss_model="lte", bandwidth_hz=180e3),
        power=PowerConfig(250.0, 1.0),
        epsilon=0.7, k=23.0, list_len=3,
        normalization_bps=10e6, gamma_tgt_db=0.0,
    )


def main_fading_preset() -> ScenarioConfig:
    """main-pathloss plus 8 dB lognormal shadowing, unit-mean exponential fast
    fading and 1 m/s CU mobility; threshold utility over superframes."""
    cfg = main_pathloss_preset()
    return replace(cfg,
                   name="main-fading",
                   mode="fading-superframe",
                   horizon=800,
                   seed=1,
                   channel=replace(cfg.channel, shadowing_sigma_db=8.0,
                                   fast_fading=True),
                   epsilon=0.7, k=31.0, delta=0.01, mobility=True)


PRESETS = {
    "concept": concept_preset,
    "main-pathloss": main_pathloss_preset,
    "main-fading": main_fading_preset,
}


def preset(name: str) -> ScenarioConfig:
    try:
        return PRESETS[name]()
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; have {sorted(PRESETS)}") from None


# --- config file parsing ---

_SCHEMA: dict[str, dict[str, type]] = {
    "scenario": {"name": str, "mode": str, "horizon": int, "seed": int,
                 "allocation_test_enabled": bool},
    "topology": {"kind": str, "cell_radius_m": float, "n_c": int, "n_d": int,
                 "pair_range_m": float, "r1_m": float, "r2_m": float,
                 "angles_deg": str, "pair_angle_deg": float},
    "channel": {"pathloss_model": str, "alpha": float, "shadowing_sigma_db": float,
                "fast_fading": bool, "noise_density_dbm_hz": float,
                "bandwidth_hz": float, "ue_noise_figure_db": float,
                "bs_noise_figure_db": float, "explicit_noise_mw": float},
    "power": {"p_c_mw": float, "p_d_mw": float},
    "learning": {"epsilon": float, "k": float, "list_len": int,
                 "normalization_bps": float, "gamma_tgt_db": float,
                 "r_tgt_fraction": float, "delta": float},
    "mobility": {"enabled": bool, "cu_speed_m_s": float,
                 "direction_change_p": float},
}


def _convert(section: str, key: str, raw: str):
    typ = _SCHEMA[section][key]
    try:
        if typ is bool:
            low = raw.strip().lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(raw)
        return typ(raw)
    except ValueError:
        raise ValueError(f"[{section}] {key}: cannot parse {raw!r} as {typ.__name__}")


def load_config(path: str) -> ScenarioConfig:
    """Parse and validate a scenario config file; unknown sections or keys
    are rejected by name."""
    parser = configparser.ConfigParser()
    with open(path) as fh:
        parser.read_file(fh)
    values: dict[str, dict] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ValueError(f"unknown config section [{section}]")
        values[section] = {}
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ValueError(f"unknown key {key!r} in section [{section}]")
            values[section][key] = _convert(section, key, raw)

    sc = values.get("scenario", {})
    topo = values.get("topology", {})
    chan = values.get("channel", {})
    power = values.get("power", {})
    learn = values.get("learning", {})
    mob = values.get("mobility", {})

    kwargs: dict = {}
    for k in ("name", "mode", "horizon", "seed", "allocation_test_enabled"):
        if k in sc:
            kwargs[k] = sc[k]
    if "kind" in topo:
        kwargs["topology_kind"] = topo["kind"]
    for src, dst in (("cell_radius_m", "cell_radius_m"), ("n_c", "n_c"),
                     ("n_d", "n_d"), ("pair_range_m", "pair_range_m"),
                     ("r1_m", "concept_r1_m"), ("r2_m", "concept_r2_m"),
                     ("pair_angle_deg", "concept_pair_angle_deg")):
        if src in topo:
            kwargs[dst] = topo[src]
    if "angles_deg" in topo:
        parts = [float(x) for x in topo["angles_deg"].split(",")]
        if len(parts) != 3:
            raise ValueError("[topology] angles_deg needs exactly 3 comma-separated values")
        kwargs["concept_angles_deg"] = tuple(parts)
    if chan:
        kwargs["channel"] = ChannelConfig(**chan)
    if power:
        kwargs["power"] = PowerConfig(**power)
    for k in ("epsilon", "k", "list_len", "normalization_bps", "gamma_tgt_db",
              "r_tgt_fraction", "delta"):
        if k in learn:
            kwargs[k] = learn[k]
    if "enabled" in mob:
        kwargs["mobility"] = mob["enabled"]
    for k in ("cu_speed_m_s", "direction_change_p"):
        if k in mob:
            kwargs[k] = mob[k]
    return ScenarioConfig(**kwargs)
