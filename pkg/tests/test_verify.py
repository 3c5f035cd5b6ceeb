"""Verification battery: config handling, determinism, report contents."""

import json

import pytest

from hyperwalk.errors import ParameterError
from hyperwalk.verify import (
    Bands,
    ExperimentConfig,
    GridPoint,
    McSettings,
    avg_target_csv,
    config_from_dict,
    gap_csv,
    report_json,
    run_verification,
)


def _small_config(**overrides):
    base = dict(
        grid=(GridPoint(n=24, d=3, degree_c=5.0),),
        seeds=(1, 2, 3),
        bands=Bands(kappa_pairs=6),
        mc=McSettings(),
    )
    base.update(overrides)
    return ExperimentConfig(**base)


def test_grid_point_p_resolution():
    assert GridPoint(n=100, d=3, p=0.01).resolve_p() == 0.01
    rule = GridPoint(n=100, d=3, degree_c=10.0)
    assert 0.0 < rule.resolve_p() < 1.0
    with pytest.raises(ParameterError):
        GridPoint(n=100, d=3).resolve_p()
    with pytest.raises(ParameterError):
        GridPoint(n=100, d=3, p=0.5, degree_c=1.0).resolve_p()
    with pytest.raises(ParameterError):
        GridPoint(n=100, d=3, p=0.0).resolve_p()


def test_config_from_dict_seed_forms():
    doc = {"grid": [{"n": 20, "d": 3, "p": 0.1}], "seeds": {"count": 3, "base": 5}}
    cfg = config_from_dict(doc)
    assert cfg.seeds == (5, 6, 7)
    doc["seeds"] = [9, 11]
    assert config_from_dict(doc).seeds == (9, 11)


def test_config_rejects_empty_seeds_and_grid():
    with pytest.raises(ParameterError):
        config_from_dict({"grid": [{"n": 20, "d": 3, "p": 0.1}], "seeds": []})
    with pytest.raises(ParameterError):
        config_from_dict({"grid": [], "seeds": [1]})
    with pytest.raises(ParameterError):
        config_from_dict({"grid": [{"n": 2, "d": 3, "p": 0.1}], "seeds": [1]})


def test_report_is_byte_identical_across_runs():
    cfg = _small_config()
    a = report_json(run_verification(cfg))
    b = report_json(run_verification(cfg))
    assert a == b


def test_report_structure_and_status():
    cfg = _small_config(mc=McSettings(hitting_pairs=2, hitting_trials=150,
                                      cover_trials=50, max_steps=10**6))
    report = run_verification(cfg)
    assert report["status"]["deterministic_ok"] is True
    assert len(report["instances"]) == 3
    for inst in report["instances"]:
        assert inst["deterministic_ok"]
        assert "max_avg_target_dev" in inst["measures"]
        assert inst["mc"] and "cover" in inst["mc"]
    names = set(report["theorems"])
    assert {"avg_target_near_n", "avg_start_band", "commute_band",
            "spectral_deviation_bound", "gap_corollary", "degree_concentration",
            "avg_target_trend", "mc_consistency", "mc_cover"} <= names
    assert report["notes"]
    assert report["config_hash"]


def test_zero_tolerance_fails_statistically():
    cfg = _small_config(bands=Bands(eps=0.0, kappa_pairs=4))
    report = run_verification(cfg)
    assert report["status"]["deterministic_ok"] is True
    assert report["status"]["statistical_ok"] is False


def test_csvs_contain_only_report_values():
    cfg = _small_config()
    report = run_verification(cfg)
    csv = avg_target_csv(report)
    lines = csv.strip().split("\n")
    assert lines[0] == "n,d,p,seed,max_avg_target_dev,mean_avg_target_dev"
    assert len(lines) == 1 + len(report["instances"])
    for line, inst in zip(lines[1:], report["instances"]):
        fields = line.split(",")
        assert int(fields[0]) == inst["n"]
        assert float(fields[4]) == inst["measures"]["max_avg_target_dev"]
    gcsv = gap_csv(report).strip().split("\n")
    assert gcsv[0] == "n,d,p,seed,gap,lambda_bar,deviation_bound"
    for line, inst in zip(gcsv[1:], report["instances"]):
        assert float(line.split(",")[4]) == inst["gap"]


def test_trend_aggregation_spans_sizes():
    cfg = ExperimentConfig(
        grid=(GridPoint(n=18, d=3, degree_c=4.0), GridPoint(n=36, d=3, degree_c=4.0)),
        seeds=(1, 2),
        bands=Bands(kappa_pairs=4, trend_slack=50.0),  # huge slack: structure test
    )
    report = run_verification(cfg)
    steps = report["theorems"]["avg_target_trend"]["per_step"]
    assert len(steps) == 1
    assert steps[0]["n_from"] == 18 and steps[0]["n_to"] == 36
    assert report["theorems"]["avg_target_trend"]["passed"]


def test_full_density_point_has_vacuous_bound_statements():
    """p = 1 has no deviation bound; bound statements must not fail on it."""
    cfg = ExperimentConfig(
        grid=(GridPoint(n=8, d=2, p=1.0),),  # complete graph
        seeds=(1,),
        bands=Bands(kappa_pairs=3),
    )
    report = run_verification(cfg)
    for name in ("spectral_deviation_bound", "gap_corollary"):
        point = report["theorems"][name]["per_point"][0]
        assert point["fraction"] is None and point["passed"]
    assert report["status"]["deterministic_ok"]


def test_trend_skips_explicit_p_points():
    """Fixed explicit p at two sizes is not one density family."""
    cfg = ExperimentConfig(
        grid=(GridPoint(n=16, d=3, p=0.03), GridPoint(n=32, d=3, p=0.03),
              GridPoint(n=16, d=3, degree_c=4.0)),
        seeds=(1, 2),
        bands=Bands(kappa_pairs=4),
    )
    report = run_verification(cfg)
    assert report["theorems"]["avg_target_trend"]["per_step"] == []
    assert report["theorems"]["avg_target_trend"]["passed"]


def test_report_json_round_trips():
    report = run_verification(_small_config())
    text = report_json(report)
    assert json.loads(text) == report


def test_bundled_configs_parse_and_run_trimmed():
    """The shipped configs load; a 2-seed slice of each runs clean."""
    from pathlib import Path

    configs = Path(__file__).resolve().parents[1] / "configs"
    for name in ("desk.json", "regime.json"):
        doc = json.loads((configs / name).read_text())
        cfg = config_from_dict(doc)
        assert len(cfg.seeds) == 10
        trimmed = ExperimentConfig(
            grid=(min(cfg.grid, key=lambda g: g.n),),
            seeds=cfg.seeds[:2],
            bands=cfg.bands,
            mc=cfg.mc,
            max_resamples=cfg.max_resamples,
        )
        report = run_verification(trimmed)
        assert report["status"]["deterministic_ok"]
