"""The twelve acceptance criteria, one test each.

Each test records a PASS/FAIL line that is printed in the terminal summary
(and immediately, visible with ``-s``).
"""

import math
import time
from contextlib import contextmanager

import numpy as np
import pytest
from scipy import stats
from scipy.special import expit

from conftest import ACCEPTANCE_LINES
from logitprior.distributions import BetaShape, LogisticParams
from logitprior.eta_moments import eta_mean_var, eta_mean_var_analytic
from logitprior.genfunc import half_logistic_laplace, mgf_derivative_numeric, sample_root_logistic
from logitprior.induced import PushforwardSpec, pushforward_sample
from logitprior.inference import Dataset, grid_posterior_means, mh_sample, standardize, summarize
from logitprior.occupancy import fit_occupancy, induced_occupancy_priors, simulate_occupancy
from logitprior.priors import WIDE_SD, beta_shapes_from_mean_cv, logistic_matched_priors, vague_priors, weighted_priors
from logitprior.simulation import generate_scenario, run_study, scenario1, scenario23

# fixed before any study was run: the seed used in the simulate example
MASTER_SEED = 11
TARGET = BetaShape(2.633, 1.129)


@contextmanager
def criterion(k: int, title: str):
    details: list[str] = []
    try:
        yield details
    except BaseException:
        line = f"FAIL criterion {k:2d}: {title} | " + "; ".join(details)
        ACCEPTANCE_LINES[k] = line
        print(line)
        raise
    line = f"PASS criterion {k:2d}: {title} | " + "; ".join(details)
    ACCEPTANCE_LINES[k] = line
    print(line)


def test_01_beta_shapes():
    with criterion(1, "Beta shapes from mean 0.7, cv 0.3") as d:
        s = beta_shapes_from_mean_cv(0.7, 0.3)
        d.append(f"alpha={s.alpha:.5f} beta={s.beta:.5f}")
        assert abs(s.alpha - 2.6333) <= 1e-3 and abs(s.beta - 1.1286) <= 1e-3


def test_02_eta_moments():
    with criterion(2, "eta moments for Beta(2.633, 1.129)") as d:
        q = eta_mean_var(TARGET)
        o = eta_mean_var_analytic(TARGET)
        gap = max(abs(q.mu_eta - o.mu_eta), abs(q.var_eta - o.var_eta))
        d.append(f"quadrature=({q.mu_eta:.5f}, {q.var_eta:.5f}) oracle gap={gap:.1e}")
        assert abs(q.mu_eta - 1.150) <= 0.003 and abs(q.var_eta - 1.843) <= 0.003
        assert gap <= 1e-6
        # the other published pair (1.146, 1.785) is superseded by the oracle
        assert abs(o.var_eta - 1.785) > 0.05


def test_03_exact_identities():
    with criterion(3, "uniform target and logistic-matched variances") as d:
        m = eta_mean_var(BetaShape(1, 1))
        d.append(f"eta(1,1)=({m.mu_eta:.1e}, {m.var_eta:.10f})")
        assert abs(m.mu_eta) <= 1e-8 and abs(m.var_eta - math.pi**2 / 3) <= 1e-8
        for p, target in ((0, math.pi**2 / 3), (1, 1.283**2), (3, 0.907**2)):
            v = logistic_matched_priors(p).variances
            d.append(f"p={p} var={v[0]:.6f}")
            assert np.allclose(v, math.pi**2 / (3 * (p + 1)), atol=1e-6)
            # the printed two- and three-decimal sds match to their precision
            assert abs(math.sqrt(v[0]) - math.sqrt(target)) < 5e-4


def test_04_weighted_prior():
    with criterion(4, "weighted prior, k = 0.4, p = 3") as d:
        v = weighted_priors(3, TARGET, k=0.4).variances
        d.append(f"intercept={v[0]:.5f} slopes={v[1]:.5f}")
        assert abs(v[0] - 0.7372) <= 1e-3 and np.all(np.abs(v[1:] - 0.3686) <= 1e-3)


def test_05_laplace():
    with criterion(5, "half-logistic Laplace transform at t = 0.1, mu = 3, s = 5") as d:
        p = LogisticParams(3.0, 5.0)
        full = half_logistic_laplace(0.1, p)
        half = half_logistic_laplace(0.1, p, doubled=False)
        d.append(f"doubled={full:.6f} undoubled={half:.6f}")
        assert abs(full - 0.673972) <= 1e-4 and abs(half - 0.336986) <= 1e-4


def test_06_mgf_derivative():
    with criterion(6, "numeric MGF derivative, mu = 7, s = 3") as d:
        v = mgf_derivative_numeric(LogisticParams(7.0, 3.0), 1e-4)
        d.append(f"value={v:.6f}")
        assert abs(v - 7.0) <= 0.01


def test_07_convolution_closure():
    with criterion(7, "sums of 4 root-logistic draws are Logistic(0,1)") as d:
        t0 = time.perf_counter()
        draws = sample_root_logistic(3, 80_000, seed=7)
        sums = draws.reshape(20_000, 4).sum(axis=1)
        ks = stats.kstest(sums, "logistic")
        ratio = draws.var(ddof=1) / (math.pi**2 / 12)
        elapsed = time.perf_counter() - t0
        d.append(f"KS p={ks.pvalue:.3f} var ratio={ratio:.4f} {elapsed:.1f}s")
        assert ks.pvalue > 0.01 and abs(ratio - 1) <= 0.02 and elapsed < 60


def test_08_induced_uniformity():
    with criterion(8, "theta induced by logistic-matched priors, p = 3") as d:
        X = generate_scenario(scenario23(n=1000, master_seed=MASTER_SEED), 0).X
        prior = logistic_matched_priors(3)
        samplers = {f"b{j}": (lambda m, s: lambda rng, n: m + s * rng.standard_normal(n))(prior.means[j], prior.sds[j]) for j in range(4)}
        samplers["row"] = lambda rng, n: rng.integers(0, X.shape[0], n).astype(float)

        def transform(v):
            r = X[v["row"].astype(int)]
            return expit(v["b0"] + v["b1"] * r[:, 0] + v["b2"] * r[:, 1] + v["b3"] * r[:, 2])

        res = pushforward_sample(PushforwardSpec(samplers, transform, n=100_000), seed=8, range=(0, 1))
        th = res.draws
        ks = stats.kstest(th, "uniform").statistic
        d.append(f"mean={th.mean():.4f} var*12={12 * th.var():.4f} KS D={ks:.4f}")
        assert abs(th.mean() - 0.5) <= 0.01 and abs(th.var() * 12 - 1) <= 0.05 and ks < 0.05


def test_09_grid_oracle():
    with criterion(9, "MH posterior means vs dense-grid quadrature, n = 10, p = 1") as d:
        t0 = time.perf_counter()
        x = np.array([-1.6, -1.2, -0.9, -0.5, -0.2, 0.1, 0.4, 0.8, 1.3, 1.8])
        y = np.array([0, 1, 0, 0, 1, 1, 0, 1, 1, 1.0])
        X, _ = standardize(x)
        data = Dataset(X, y, standardized=True)
        worst = 0.0
        for name, prior in (("vague", vague_priors(1)), ("logistic", logistic_matched_priors(1))):
            grid = grid_posterior_means(data, prior)
            mh = summarize(mh_sample(data, prior, chains=4, iterations=100_000, burnin=5000, seed=9)).mean
            err = float(np.max(np.abs(mh - grid)))
            worst = max(worst, err)
            d.append(f"{name} max|diff|={err:.4f}")
        elapsed = time.perf_counter() - t0
        d.append(f"{elapsed:.1f}s")
        assert worst <= 0.02 and elapsed < 60


_STUDIES: dict[int, object] = {}


def _study(n: int):
    if n not in _STUDIES:
        _STUDIES[n] = run_study(scenario1(n=n, replicates=100, master_seed=MASTER_SEED), workers=4)
    return _STUDIES[n]


@pytest.mark.slow
def test_10_scenario1_ordering():
    with criterion(10, f"scenario 1, n = 15, 100 replicates, master seed {MASTER_SEED}") as d:
        t0 = time.perf_counter()
        rep = _study(15)
        elapsed = time.perf_counter() - t0
        mse_l, mse_v = rep.mse["logistic"], rep.mse["vague"]
        cov_l, cov_v = rep.coverage["logistic"], rep.coverage["vague"]
        d.append(f"MSE logistic={np.round(mse_l, 3).tolist()} vague={np.round(mse_v, 3).tolist()}")
        d.append(f"Cov logistic={cov_l.tolist()} vague={cov_v.tolist()} {elapsed:.0f}s")
        assert np.all(mse_l < mse_v)
        assert np.all(cov_l >= 0.90)
        assert cov_v[1] <= 0.88
        assert elapsed < 300


@pytest.mark.slow
def test_11_large_n_trend():
    with criterion(11, "MSE gap shrinks over n = 15, 50, 100") as d:
        gaps = [_study(n).mse_gap("vague", "logistic") for n in (15, 50, 100)]
        d.append("gaps=" + ", ".join(f"{g:.4g}" for g in gaps))
        assert gaps[0] > gaps[1] > gaps[2]


def test_12_occupancy():
    with criterion(12, "occupancy reduction and wide-prior bathtub") as d:
        data = simulate_occupancy([0.3, 0.5, -0.4, 0.2], [30.0], 200, 3, seed=12)
        prior = logistic_matched_priors(3)
        fit = fit_occupancy(data, prior, None, iterations=20_000, burnin=2000, seed=12, fixed_detection=1.0)
        # with detection certain, presence equals the detections, so this is plain logistic regression
        assert np.array_equal(data.detected.astype(float), data.z_true)
        diffs = []
        for ref_seed in (12, 1012):  # matched seed, then an independent one
            ref = summarize(mh_sample(Dataset(data.W, data.z_true), prior, iterations=20_000, burnin=2000, seed=ref_seed))
            diffs.append(float(np.max(np.abs(fit.psi_summary.mean - ref.mean))))
        diff = max(diffs)
        d.append(f"max|diff| matched={diffs[0]:.2e} independent={diffs[1]:.2e}")
        wide = vague_priors(3, WIDE_SD)
        ipsi, _ = induced_occupancy_priors(wide, vague_priors(data.r, WIDE_SD), data.W, data.V.reshape(data.sites * data.visits, data.r), 100_000, seed=12)
        mass = ipsi.mass_in(0, 0.05) + ipsi.mass_in(0.95, 1)
        d.append(f"bathtub mass={mass:.3f}")
        assert diff <= 0.02 and mass >= 0.6
