from dataclasses import replace

import numpy as np
import pytest

from logitprior.exceptions import DomainError
from logitprior.simulation import (
    CONFIG_KEYS,
    ScenarioSpec,
    generate_scenario,
    mse,
    parse_config_text,
    run_study,
    scenario1,
    scenario23,
    spec_from_config,
)

FAST = dict(chains=2, iterations=1500, burnin=500)


def test_mse():
    assert mse([2.0, 2.0], 2.0) == 0.0
    assert mse([1.0, 3.0], 2.0) == 1.0
    assert mse([1.0, 3.0], [1.0, 3.0]) == 0.0
    with pytest.raises(DomainError):
        mse([1.0, 2.0], [1.0, 2.0, 3.0])
    with pytest.raises(DomainError):
        mse([], 0.0)


def test_spec_validation():
    with pytest.raises(DomainError):
        scenario1(n=2)
    with pytest.raises(DomainError):
        scenario1(replicates=0)
    with pytest.raises(DomainError):
        ScenarioSpec("scenario9", 10, (0.0, 1.0), ((1.0, 1.0),))


def test_generate_scenario1():
    spec = scenario1(master_seed=3)
    d = generate_scenario(spec, 4)
    assert d.X.shape == (15, 1) and set(np.unique(d.y)) <= {0.0, 1.0}
    assert d.X.mean() == pytest.approx(0.0, abs=1e-10) and d.X.std(ddof=1) == pytest.approx(1.0)
    again = generate_scenario(spec, 4)
    assert np.array_equal(d.X, again.X) and np.array_equal(d.y, again.y)
    assert not np.array_equal(d.X, generate_scenario(spec, 5).X)


def test_scenario23_defaults_and_theta_band():
    spec = scenario23()
    assert spec.true_betas[0] == 1.5 and spec.priors == ("vague", "logistic", "weighted")
    assert scenario23(intercept=1.1).true_betas[0] == 1.1
    for i in range(5):
        d = generate_scenario(spec, i)
        theta = 1 / (1 + np.exp(-(1.5 + d.X @ np.array(spec.true_betas[1:]))))
        assert theta.min() > 0.25 and theta.max() < 0.97


@pytest.mark.xfail(strict=True, reason="skewed Gamma covariates reach theta ~ 0.15 at n = 1e4")
def test_scenario23_theta_band_large_n():
    spec = scenario23(n=10_000)
    big = generate_scenario(spec, 0)
    theta = 1 / (1 + np.exp(-(1.5 + big.X @ np.array(spec.true_betas[1:]))))
    assert 0 < theta.min() and theta.max() < 1
    assert theta.min() > 0.25 and theta.max() < 0.97


def test_single_replicate_report():
    rep = run_study(scenario1(replicates=1, master_seed=2, **FAST))
    for kind in ("vague", "logistic"):
        assert set(rep.coverage[kind]) <= {0.0, 1.0}
        assert np.all(rep.mse[kind] >= 0)
    cols, rows = rep.table_rows()
    assert cols == ["Parameter", "Truth", "MSE*_vague", "MSE_vague", "Cov_vague", "MSE*_logistic", "MSE_logistic", "Cov_logistic"]
    assert [r[0] for r in rows] == ["beta0", "beta1"]


def test_determinism_and_workers():
    spec = scenario1(replicates=4, master_seed=9, **FAST)
    a = run_study(spec)
    b = run_study(spec, workers=2)
    assert a.to_csv() == b.to_csv()
    assert a.to_json() == b.to_json()


def test_mse_star_of_mle_is_zero():
    rep = run_study(scenario1(replicates=3, master_seed=1, **FAST))
    mles = np.stack([r.mle for r in rep.per_replicate])
    ok = np.array([r.mle_converged for r in rep.per_replicate])
    assert mse(mles[ok, 0], mles[ok, 0]) == 0.0


def test_config_parsing(tmp_path):
    text = "# study\nscenario = scenario23\nn = 30\nintercept = 1.1\npriors = vague, weighted\nreplicates = 5\n"
    spec = spec_from_config(parse_config_text(text))
    assert spec.n == 30 and spec.true_betas[0] == 1.1 and spec.priors == ("vague", "weighted")
    with pytest.raises(DomainError, match="unknown key"):
        parse_config_text("sample_size = 3\n")
    s1 = spec_from_config(parse_config_text("covariates = 3:5\ngamma_param = scale\n"))
    assert s1.covariates == ((3.0, 5.0),) and s1.gamma_param == "scale"
    assert {"scenario", "n", "priors", "master_seed"} <= set(CONFIG_KEYS)


@pytest.mark.slow
def test_calibration_under_generating_prior():
    spec = scenario1(n=50, replicates=400, master_seed=5, priors=("logistic",), draw_truth_from="logistic",
                     chains=2, iterations=3000, burnin=1000)
    rep = run_study(spec)
    assert np.all(np.abs(rep.coverage["logistic"] - 0.95) <= 0.05)
