import math

import numpy as np
import pytest

import kuramoto_rc as krc


def test_order_parameter_examples():
    assert krc.kuramoto_r([0.0, 0.0, 0.0]) == pytest.approx(1.0)
    assert krc.kuramoto_r([0.0, math.pi]) == pytest.approx(0.0, abs=1e-12)
    shifted = krc.kuramoto_r([0.3 + 1.1, 1.7 + 1.1, 2.0 + 1.1])
    assert shifted == pytest.approx(krc.kuramoto_r([0.3, 1.7, 2.0]))
    locked = np.ones((600, 4))
    assert krc.variance_r(locked) == pytest.approx(1.0)


def test_graphs():
    g = krc.complete_graph(5)
    assert g.is_complete and g.degrees() == [5.0] * 5
    er = krc.erdos_renyi(300, 6.0, 1)
    assert er.size == 300
    assert 4.5 < er.mean_degree < 7.5
    with pytest.raises(ValueError):
        krc.complete_graph(1)


def test_signals_and_targets():
    x = krc.lorenz_series(200.0, 0.1, 3)
    v = x.values[:, 0]
    assert abs(v.mean()) < 1e-6 and abs(v.var() - 1.0) < 1e-6
    ts = krc.TimeSeries(0.0, 1.0, np.arange(1.0, 5.0).reshape(-1, 1))
    y = krc.task1_target(ts, 2, 1.0, 0.5, 0.25)
    # x(t-1) = 2, x(t-2) = 1 at t = 2: (1/2)(2 + 2 + 2 + 1 + 0.5 + 0.25).
    assert y.at(2.0) == pytest.approx(3.875)
    with pytest.raises(IndexError):
        krc.task1_target(ts, 10, 1.0, 0.5, 0.25)


def test_solve_ridge_matches_normal_equations():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(40, 6))
    y = rng.normal(size=(40, 1))
    w = krc.solve_ridge(x, y, 1e-3)
    ref = np.linalg.solve(x.T @ x + 40 * 1e-3 * np.eye(6), x.T @ y)
    assert np.allclose(w, ref, rtol=1e-8, atol=1e-12)


def test_config_round_trip_and_run():
    c = krc.Config()
    c.model = "es"
    c.n = 30
    c.split = (120, 150)
    c.m = 2
    back = krc.Config.from_text(c.to_text())
    assert back.to_text() == c.to_text()
    report = krc.run(c, 1, 3.0)
    assert report["n_train"] > 0 and math.isfinite(report["test_mse"])
    assert krc.run(c, 1, 3.0) == report


def test_order_sweep_rows():
    c = krc.Config()
    c.n = 20
    c.lambda_grid = [0.0, 1.0, 2.0]
    rows = krc.order_sweep(c, 1, backward=True)
    assert [r["direction"] for r in rows] == ["forward"] * 3 + ["backward"] * 3
    assert all(0.0 <= r["r"] <= 1.0 and 0.0 <= r["r_var"] <= 1.0 for r in rows)
