import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from logitprior.distributions import BetaShape
from logitprior.eta_moments import eta_mean_var_analytic
from logitprior.exceptions import DomainError
from logitprior.priors import (
    PriorSpec,
    beta_matched_priors,
    beta_shapes_from_mean_cv,
    logistic_matched_priors,
    vague_priors,
    weighted_priors,
)

TARGET = BetaShape(2.633, 1.129)


def test_shapes_from_mean_cv():
    s = beta_shapes_from_mean_cv(0.7, 0.3)
    assert (s.alpha, s.beta) == pytest.approx((2.6333, 1.1286), abs=1e-3)
    u = beta_shapes_from_mean_cv(0.5, math.sqrt(1 / 12) / 0.5)
    assert (u.alpha, u.beta) == pytest.approx((1.0, 1.0), abs=1e-12)
    # v = (m cv)^2 = 2.5e-5, so alpha = 0.5 (0.25 / v - 1)
    t = beta_shapes_from_mean_cv(0.5, 0.01)
    assert t.alpha == pytest.approx(4999.5) and t.alpha == pytest.approx(t.beta)


def test_infeasible_cv_message():
    with pytest.raises(DomainError, match="cv < 0.654654"):
        beta_shapes_from_mean_cv(0.7, 0.9)


@given(st.floats(0.01, 0.99), st.floats(0.01, 1.0))
def test_mean_cv_round_trip(m, frac):
    cv = frac * math.sqrt((1 - m) / m) * 0.999
    s = beta_shapes_from_mean_cv(m, cv)
    mean = s.alpha / (s.alpha + s.beta)
    var = s.alpha * s.beta / ((s.alpha + s.beta) ** 2 * (s.alpha + s.beta + 1))
    assert mean == pytest.approx(m, abs=1e-10)
    assert math.sqrt(var) / mean == pytest.approx(cv, rel=1e-9)


def test_logistic_matched():
    assert logistic_matched_priors(0).variances[0] == pytest.approx(math.pi**2 / 3, abs=1e-12)
    assert logistic_matched_priors(0).sds[0] == pytest.approx(1.8138, abs=1e-4)
    assert np.allclose(logistic_matched_priors(1).sds, 1.283, atol=1e-3)
    assert np.allclose(logistic_matched_priors(3).sds, 0.907, atol=1e-3)
    with pytest.raises(DomainError):
        logistic_matched_priors(-1)


def test_beta_matched():
    assert beta_matched_priors(0, (1, 1)).variances[0] == pytest.approx(math.pi**2 / 3)
    spec = beta_matched_priors(3, TARGET)
    assert spec.means[0] == pytest.approx(1.150, abs=2e-3)
    assert np.allclose(spec.variances, 1.843 / 4, atol=1e-3)
    for p in (1, 2, 3, 10):
        s = beta_matched_priors(p, TARGET)
        assert s.total_variance == pytest.approx(eta_mean_var_analytic(TARGET).var_eta, abs=1e-10)


def test_weighted():
    spec = weighted_priors(3, TARGET, k=0.4)
    assert spec.variances[0] == pytest.approx(0.7372, abs=1e-3)
    assert np.allclose(spec.variances[1:], 0.3686, atol=1e-3)
    assert spec.means[0] == pytest.approx(1.150, abs=2e-3)
    var_eta = eta_mean_var_analytic(TARGET).var_eta
    assert spec.variances[0] == pytest.approx(0.4 * var_eta, abs=1e-12)
    assert spec.total_variance == pytest.approx(var_eta, abs=1e-12)
    ks = [weighted_priors(3, TARGET, k=k).variances[0] for k in (0.1, 0.3, 0.6, 0.9)]
    assert all(a < b for a, b in zip(ks, ks[1:]))
    for bad in (0.0, 1.0, 1.5):
        with pytest.raises(DomainError, match="open interval"):
            weighted_priors(3, TARGET, k=bad)
    with pytest.raises(DomainError):
        weighted_priors(0, TARGET)


def test_weighted_via_mean_cv():
    a = weighted_priors(3, mean=0.7, cv=0.3)
    assert a.target.alpha == pytest.approx(2.6333, abs=1e-3)


def test_vague():
    assert np.all(vague_priors(1).variances == 1e6)
    assert np.all(vague_priors(3, 40).variances == 1600)
    assert vague_priors(3, 1.65).variances[0] == pytest.approx(2.7225)


@pytest.mark.parametrize("p", [1, 2, 3, 10])
def test_eta_identities(p):
    e = eta_mean_var_analytic(TARGET)
    for spec in (beta_matched_priors(p, TARGET), weighted_priors(p, TARGET, 0.3)):
        assert spec.means[0] == pytest.approx(e.mu_eta, abs=1e-10)
        assert np.all(spec.means[1:] == 0)
        assert spec.total_variance == pytest.approx(e.var_eta, abs=1e-10)
    assert logistic_matched_priors(p).total_variance == pytest.approx(math.pi**2 / 3, abs=1e-10)


def test_json_round_trip():
    spec = weighted_priors(3, TARGET, k=0.4)
    back = PriorSpec.from_json(spec.to_json())
    assert back == spec
    d = spec.to_dict()
    assert set(d) == {"kind", "p", "k", "target", "coefficients"}
    assert logistic_matched_priors(2).to_dict().keys() == {"kind", "p", "coefficients"}


def test_spec_validation_and_sampling(rng):
    with pytest.raises(DomainError):
        PriorSpec(1, logistic_matched_priors(2).coeff_priors, "logistic")
    with pytest.raises(DomainError):
        PriorSpec(2, logistic_matched_priors(2).coeff_priors, "uniform")
    s = logistic_matched_priors(2)
    draws = s.sample(rng, 50_000)
    assert draws.shape == (50_000, 3)
    assert np.allclose(draws.var(axis=0), s.variances, rtol=0.03)
    assert s.log_density(np.zeros((4, 3))).shape == (4,)
