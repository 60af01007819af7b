import math

import pytest

import mmnoma


def small_config(runs=2):
    cfg = mmnoma.default_config()
    cfg["experiment"].update(
        {"users": 4, "rf_chains": 2, "ap_antennas": 12, "runs": runs, "scheme": "both", "base_seed": 3}
    )
    return cfg


def test_path_loss_golden():
    assert mmnoma.path_loss(10.0, 2.25) == pytest.approx(8.9029e-10, abs=1e-13)


def test_array_response_broadside():
    assert mmnoma.array_response(math.pi / 2, 4) == [1, 1, 1, 1]


def test_schedule_count():
    assert mmnoma.count_schedules(8, 2, 2) == 630


def test_simulate_rows_and_metadata():
    rows, meta = mmnoma.simulate(small_config())
    assert len(rows) == 4
    assert {r["scheme"] for r in rows} == {"noma", "oma"}
    assert all(r["sum_rate"] >= 0 for r in rows)
    assert meta["config"]["experiment"]["users"] == 4
    assert len(meta["summary"]) == 2


def test_simulate_is_deterministic():
    assert mmnoma.simulate(small_config()) == mmnoma.simulate(small_config())


def test_bad_config_raises():
    cfg = small_config()
    cfg["experiment"]["users"] = 0
    with pytest.raises(mmnoma.ConfigError):
        mmnoma.simulate(cfg)
    cfg = small_config()
    cfg["experiment"]["unknown_key"] = 1
    with pytest.raises(ValueError):
        mmnoma.simulate(cfg)
