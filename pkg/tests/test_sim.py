"""End-to-end simulator tests: presets, config files, CSV schema, determinism
and the command-line entry point."""

import numpy as np
import pytest

from d2dalloc.cli import main
from d2dalloc.config import (ScenarioConfig, concept_preset, load_config,
                             main_fading_preset, main_pathloss_preset, preset)
from d2dalloc.sim import (MetricsRecord, build_static_env, build_topology,
                          calibrate_r_tgt, export_csv, parse_csv,
                          run_experiment)


def test_concept_preset_fields():
    cfg = concept_preset()
    assert cfg.mode == "pathloss-frame"
    assert cfg.horizon == 10_000 and cfg.seed == 7
    assert not cfg.allocation_test_enabled
    assert cfg.topology_kind == "concept"
    assert cfg.channel.pathloss_model == "powerlaw" and cfg.channel.alpha == 2.0
    assert cfg.channel.explicit_noise_mw == 0.1
    assert cfg.power.p_c_mw == 10.0 and cfg.power.p_d_mw == 10.0
    assert cfg.epsilon == 0.5 and cfg.k == 11.0 and cfg.list_len == 2
    assert cfg.normalization_bps == 1.0


def test_main_preset_fields():
    cfg = main_pathloss_preset()
    assert cfg.mode == "pathloss-frame"
    assert cfg.n_c == 10 and cfg.n_d == 10 and cfg.cell_radius_m == 250.0
    assert cfg.channel.pathloss_model == "lte"
    assert cfg.channel.bandwidth_hz == 180e3
    assert cfg.power.p_c_mw == 250.0 and cfg.power.p_d_mw == 1.0
    assert cfg.epsilon == 0.7 and cfg.k == 23.0 and cfg.list_len == 3
    assert cfg.normalization_bps == 10e6
    assert cfg.allocation_test_enabled and not cfg.mobility

    fad = main_fading_preset()
    assert fad.mode == "fading-superframe"
    assert fad.channel.shadowing_sigma_db == 8.0 and fad.channel.fast_fading
    assert fad.mobility and fad.cu_speed_m_s == 1.0
    assert fad.direction_change_p == 1e-5
    assert fad.k == 31.0 and fad.delta == 0.01

    with pytest.raises(ValueError):
        preset("nonexistent")


def test_scenario_config_validation():
    with pytest.raises(ValueError, match="k must exceed"):
        ScenarioConfig(k=5.0, n_d=10)
    with pytest.raises(ValueError):
        ScenarioConfig(mode="continuous")
    with pytest.raises(ValueError):
        ScenarioConfig(epsilon=0.0)
    with pytest.raises(ValueError):
        ScenarioConfig(list_len=11, n_c=10)
    with pytest.raises(ValueError):
        ScenarioConfig(r_tgt_fraction=1.0)


VALID_CFG = """\
[scenario]
name = custom-test
mode = pathloss-frame
horizon = 50
seed = 3

[topology]
kind = random
cell_radius_m = 200
n_c = 4
n_d = 3
pair_range_m = 30

[channel]
pathloss_model = powerlaw
alpha = 3.0
explicit_noise_mw = 1e-5

[power]
p_c_mw = 10
p_d_mw = 10

[learning]
epsilon = 0.4
k = 7
list_len = 2
normalization_bps = 2.0
"""


def write_cfg(tmp_path, text, name="scenario.ini"):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_load_config_valid(tmp_path):
    cfg = load_config(write_cfg(tmp_path, VALID_CFG))
    assert cfg.name == "custom-test" and cfg.horizon == 50 and cfg.seed == 3
    assert cfg.n_c == 4 and cfg.n_d == 3 and cfg.cell_radius_m == 200.0
    assert cfg.channel.alpha == 3.0 and cfg.channel.explicit_noise_mw == 1e-5
    assert cfg.epsilon == 0.4 and cfg.k == 7.0 and cfg.list_len == 2
    # and the resulting scenario actually runs
    records, summary = run_experiment(cfg)
    assert len(records) == 50
    assert summary.max_social_bps == max(r.social_utility_bps for r in records)


def test_load_config_rejects_unknown_section(tmp_path):
    with pytest.raises(ValueError, match=r"unknown config section \[antenna\]"):
        load_config(write_cfg(tmp_path, VALID_CFG + "\n[antenna]\ngain = 3\n"))


def test_load_config_rejects_unknown_key(tmp_path):
    bad = VALID_CFG.replace("alpha = 3.0", "alpha = 3.0\nfoo = 1")
    with pytest.raises(ValueError, match="unknown key 'foo'"):
        load_config(write_cfg(tmp_path, bad))


def test_load_config_rejects_bad_type(tmp_path):
    bad = VALID_CFG.replace("horizon = 50", "horizon = soon")
    with pytest.raises(ValueError, match="cannot parse"):
        load_config(write_cfg(tmp_path, bad))


def test_load_config_rejects_small_k(tmp_path):
    bad = VALID_CFG.replace("k = 7", "k = 2")
    with pytest.raises(ValueError, match="k must exceed"):
        load_config(write_cfg(tmp_path, bad))


def test_load_config_angles_need_three_values(tmp_path):
    bad = VALID_CFG.replace("kind = random",
                            "kind = concept\nangles_deg = 0, 90")
    with pytest.raises(ValueError, match="angles_deg"):
        load_config(write_cfg(tmp_path, bad))


def test_export_csv_empty(tmp_path):
    path = str(tmp_path / "empty.csv")
    export_csv([], path)
    with open(path) as fh:
        lines = fh.read().splitlines()
    assert lines == ["epoch,social_utility_bps,social_utility_norm,normalized_mood"]
    assert parse_csv(path) == []


def test_export_csv_three_epochs(tmp_path):
    recs = [MetricsRecord(epoch=i, social_utility_bps=float(i),
                          social_utility_norm=float(i) / 10.0,
                          normalized_mood=1.0, utilities=(0.1, 0.2),
                          moods=(1, 0), list_ranks=(3, 4), alloc=(0, 1))
            for i in (1, 2, 3)]
    path = str(tmp_path / "three.csv")
    export_csv(recs, path)
    with open(path) as fh:
        lines = fh.read().splitlines()
    assert len(lines) == 4
    assert lines[0].split(",")[:6] == ["epoch", "social_utility_bps",
                                       "social_utility_norm", "normalized_mood",
                                       "p0_utility", "p0_mood"]


def test_csv_round_trip_exact(tmp_path):
    cfg = concept_preset()
    path = str(tmp_path / "run.csv")
    records, _ = run_experiment(cfg, horizon=100, csv_path=path)
    parsed = parse_csv(path)
    assert len(parsed) == 100
    for a, b in zip(records, parsed):
        assert a.epoch == b.epoch
        assert a.social_utility_bps == b.social_utility_bps   # repr-exact floats
        assert a.social_utility_norm == b.social_utility_norm
        assert a.normalized_mood == b.normalized_mood
        assert a.utilities == b.utilities
        assert a.moods == b.moods and a.list_ranks == b.list_ranks


def test_rerun_byte_identical(tmp_path):
    cfg = concept_preset()
    p1, p2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    run_experiment(cfg, horizon=300, csv_path=p1)
    run_experiment(cfg, horizon=300, csv_path=p2)
    assert open(p1, "rb").read() == open(p2, "rb").read()


def test_rerun_byte_identical_fading(tmp_path):
    cfg = main_fading_preset()
    p1, p2 = str(tmp_path / "a.csv"), str(tmp_path / "b.csv")
    run_experiment(cfg, horizon=5, csv_path=p1)
    run_experiment(cfg, horizon=5, csv_path=p2)
    assert open(p1, "rb").read() == open(p2, "rb").read()


def test_normalized_mood_consistent_with_player_moods():
    cfg = concept_preset()
    records, _ = run_experiment(cfg, horizon=500)
    for r in records:
        assert r.normalized_mood == pytest.approx(sum(r.moods) / len(r.moods))
        assert (r.normalized_mood == 1.0) == all(m == 1 for m in r.moods)


def test_calibrate_concept_targets():
    cfg = concept_preset()
    ss = np.random.SeedSequence(cfg.seed)
    topo_ss, calib_ss, env_ss, _ = ss.spawn(4)
    topo = build_topology(cfg, np.random.default_rng(topo_ss))
    r_tgt = calibrate_r_tgt(cfg, topo, env_ss, np.random.default_rng(calib_ss))
    env = build_static_env(cfg, topo)
    # half the rate each player gets on its own-index CU in every subframe
    for d in range(3):
        assert r_tgt[d] == pytest.approx(
            0.5 * env.rate(d, d) / cfg.normalization_bps, rel=1e-12)


def test_cli_run_and_outputs(tmp_path, capsys):
    out = str(tmp_path / "out")
    rc = main(["run", "--preset", "concept", "--horizon", "50",
               "--output-dir", out])
    assert rc == 0
    captured = capsys.readouterr().out
    assert "concept_seed7.csv" in captured
    assert len(parse_csv(str(tmp_path / "out" / "concept_seed7.csv"))) == 50
    rc = main(["run", "--preset", "concept", "--horizon", "10", "--seed", "2",
               "--output-dir", out])
    assert rc == 0
    assert (tmp_path / "out" / "concept_seed2.csv").exists()


def test_cli_oracle(capsys):
    assert main(["oracle", "--preset", "concept"]) == 0
    out = capsys.readouterr().out
    assert "feasible: True" in out and "W*:" in out
    # the oracle needs a deterministic channel
    assert main(["oracle", "--preset", "main-fading"]) == 2


def test_cli_dtmc(capsys):
    assert main(["dtmc"]) == 0
    out = capsys.readouterr().out
    assert "stochastically stable states" in out


def test_cli_calibrate(capsys):
    assert main(["calibrate", "--preset", "concept"]) == 0
    out = capsys.readouterr().out
    assert "r_tgt[2]" in out


def test_cli_errors(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "missing.ini"),
                 "--output-dir", str(tmp_path)]) == 1
    assert "error:" in capsys.readouterr().err
    bad = tmp_path / "bad.ini"
    bad.write_text("[antenna]\ngain = 3\n")
    assert main(["oracle", "--config", str(bad)]) == 1
