import csv
import io
import math

import pytest

import semsel


def small_config(**overrides):
    text = "num_classes=8\nfeature_dim=16\nkey_dim=8\nnum_sensors=6\ntrials=40\ncalibration_samples=2000\n"
    text += "sweep_values=-10,10\nbound_trials=200\noracle_instances=10\n"
    text += "".join(f"{k}={v}\n" for k, v in overrides.items())
    return semsel.ExperimentConfig.from_text(text)


def test_model_round_trip():
    params = semsel.ModelParams()
    params.num_classes, params.feature_dim = 5, 7
    model = semsel.build_model(params, 3)
    again = semsel.GmModel.from_text(model.to_text())
    assert again.to_text() == model.to_text()
    assert model.g_min() > 0 and model.delta_max() > 0


def test_posterior_is_monotone_probability():
    stats = semsel.CalibrationStats()
    stats.alpha_bar, stats.phi_bar, stats.sigma2_bar, stats.prior = 2.0, 1.0, 1.5, 0.4
    values = [semsel.posterior_estimate(stats, s) for s in (-5, 0, 1, 2, 8)]
    assert all(0.0 <= v <= 1.0 for v in values)
    assert values == sorted(values)
    assert values[2] == pytest.approx(0.4)


def test_bound_formula():
    q = 0.5 * math.erfc(2.0 / math.sqrt(2.0))
    assert semsel.conditional_accuracy_lb(16.0, 3.0, 1.0, 1.0, 5) == pytest.approx(1 - 4 * q)


def test_selection_respects_inputs():
    cfg = small_config()
    env = semsel.prepare_environment(cfg)
    scores = [5.0, -3.0, 4.0, 0.0, 6.0, -1.0]
    rates = [2e6, 1e6, 3e6, 5e5, 1e6, 2e6]
    d = semsel.select(env, cfg, "proposed-random", scores, rates, snr_db=10.0)
    assert set(d["sensors"]) <= set(range(6))
    assert len(d["feature_dims"]) == d["num_features"]
    assert len(d["time_alloc"]) == len(d["sensors"])


def test_sweep_is_deterministic_and_well_formed():
    cfg = small_config()
    a = semsel.sweep_csv(semsel.prepare_environment(cfg), cfg, "random")
    b = semsel.sweep_csv(semsel.prepare_environment(cfg), cfg, "random")
    assert a == b
    rows = list(csv.DictReader(io.StringIO(a)))
    assert len(rows) == 2 * 6
    assert all(0.0 <= float(r["accuracy"]) <= 1.0 for r in rows)


def test_bound_and_oracle_outputs():
    cfg = small_config()
    env = semsel.prepare_environment(cfg)
    bound = list(csv.DictReader(io.StringIO(semsel.validate_bound_csv(env, cfg, "importance"))))
    assert [int(r["k"]) for r in bound] == list(range(1, 7))
    gaps = list(csv.DictReader(io.StringIO(semsel.oracle_gap_csv(env, cfg, "random"))))
    assert len(gaps) == 10
    assert all(float(r["gap"]) >= -1e-9 for r in gaps)


def test_bad_config_raises():
    with pytest.raises(semsel.ConfigError):
        semsel.ExperimentConfig.from_text("num_classes=1\n")


def test_selftest_passes():
    assert all(passed for _, passed, _ in semsel.selftest(small_config()))
