import pytest

import stablets

MINIMAL = """
policy = stable_ts
horizon = 100
replications = 10
seed = 1
levels = 0.9, 0.95
arm = 1.0, 1.0
arm = 0.0, 1.0
"""


def test_normal_functions():
    assert stablets.normal_quantile(0.975) == pytest.approx(1.9599639845400542, abs=1e-14)
    assert stablets.normal_cdf(1.0) == pytest.approx(0.8413447460685429, abs=1e-15)
    with pytest.raises(ValueError):
        stablets.normal_quantile(1.5)


def test_gamma_and_bounds():
    assert stablets.gamma_value(10000) == pytest.approx(9.72232788040435, rel=1e-13)
    lo, tail, hi = stablets.mills_ratio_bounds(1.0)
    assert lo <= tail <= hi
    p = stablets.selection_probability(0.3, 40, 60, 100, 2.0)
    q = stablets.selection_probability(-0.3, 40, 60, 100, 2.0)
    assert p + q == pytest.approx(1.0, abs=1e-12)
    assert stablets.expected_pulls_bound(10000, 1.0, stablets.gamma_value(10000)) > 0


def test_episode_counts():
    ep = stablets.run_episode([1.0, 0.0], policy="ts", horizon=200, seed=3)
    assert sum(ep["counts"]) == 200
    assert ep["arms"][:2] == [0, 1]
    assert len(ep["rewards"]) == 200
    again = stablets.run_episode([1.0, 0.0], policy="ts", horizon=200, seed=3)
    assert again["rewards"] == ep["rewards"]


def test_simulate_is_deterministic_across_workers():
    a = stablets.simulate(MINIMAL, workers=1)
    b = stablets.simulate(MINIMAL, workers=4)
    assert a["replication_csv"] == b["replication_csv"]
    assert len(a["pulls"]) == 10
    assert all(sum(row) == 100 for row in a["pulls"])
    levels = sorted({round(r["level"], 9) for r in a["coverage"]})
    assert levels == [0.9, 0.95]


def test_simulate_rejects_bad_config():
    with pytest.raises(ValueError, match="T < K"):
        stablets.simulate(MINIMAL.replace("horizon = 100", "horizon = 1"))
    with pytest.raises(stablets.ParseError):
        stablets.simulate("bogus = 1\n")


def test_ks_statistic():
    xs = [(i + 0.5) / 1000 for i in range(1000)]
    assert stablets.ks_statistic(xs, "uniform") == pytest.approx(0.0005, abs=1e-12)
    zs = [stablets.normal_quantile((i + 0.5) / 200) for i in range(200)]
    assert stablets.ks_statistic(zs) == pytest.approx(0.0025, abs=1e-9)
    with pytest.raises(ValueError):
        stablets.ks_statistic([], "normal")


def test_verify_theory_small():
    checks = stablets.verify_theory(lil_replications=50, sandwich_replications=10)
    assert all(c["verdict"] != "FAIL" for c in checks)


def test_reproduce_figure(tmp_path):
    report = stablets.reproduce_figure(4, tmp_path, replications=20, horizon=200)
    assert report["figure"] == 4
    assert (tmp_path / "fig4_coverage.csv").exists()

def test_version():
    assert stablets.__version__ == "0.1.0"
