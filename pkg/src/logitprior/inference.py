"""Bayesian logistic regression with independent Normal coefficient priors.

The sampler is an adaptive random-walk Metropolis run on all chains at once:
state arrays have shape ``(chains, p + 1)`` and each chain owns a generator
derived from ``(seed, chain)``. All proposal noise and acceptance uniforms are
drawn up front from those per-chain generators, so a chain's trajectory does
not depend on how many other chains run beside it.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from ._random import chain_streams
from .exceptions import DomainError, PreconditionError
from .io import write_csv
from .priors import PriorSpec

__all__ = [
    "Dataset",
    "Standardization",
    "standardize",
    "MLEResult",
    "logistic_mle",
    "log_likelihood",
    "log_posterior",
    "Chains",
    "mh_sample",
    "RandomWalk",
    "PosteriorSummary",
    "summarize",
    "split_rhat",
    "histogram_map",
    "grid_posterior_means",
]

log = logging.getLogger(__name__)


# -- data -------------------------------------------------------------------------------


@dataclass(frozen=True)
class Standardization:
    means: np.ndarray
    sds: np.ndarray

    def apply(self, X_raw) -> np.ndarray:
        return (np.asarray(X_raw, dtype=float) - self.means) / self.sds

    def invert(self, X_std) -> np.ndarray:
        return np.asarray(X_std, dtype=float) * self.sds + self.means


def standardize(X_raw) -> tuple[np.ndarray, Standardization]:
    """Center each column and scale it to unit sample sd (denominator n - 1)."""
    X = np.asarray(X_raw, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.shape[0] < 2:
        raise DomainError("standardizing needs at least two rows")
    means = X.mean(axis=0)
    sds = X.std(axis=0, ddof=1)
    for j, sd in enumerate(sds):
        if not sd > 0:
            raise DomainError(f"covariate column {j} is constant and cannot be standardized")
    st = Standardization(means, sds)
    return st.apply(X), st


@dataclass(frozen=True)
class Dataset:
    """Covariates ``X`` (n x p, no intercept column) and binary responses ``y``."""

    X: np.ndarray
    y: np.ndarray
    truth: np.ndarray | None = None
    seed: int | None = None
    standardized: bool = False

    def __post_init__(self):
        X = np.asarray(self.X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        y = np.asarray(self.y, dtype=float)
        if X.shape[0] != y.shape[0]:
            raise DomainError(f"X has {X.shape[0]} rows but y has {y.shape[0]} entries")
        if not np.all((y == 0) | (y == 1)):
            raise DomainError("responses must be 0 or 1")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if self.truth is not None:
            object.__setattr__(self, "truth", np.asarray(self.truth, dtype=float))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @cached_property
    def design(self) -> np.ndarray:
        return np.column_stack([np.ones(self.n), self.X])

    @classmethod
    def empty(cls, p: int) -> "Dataset":
        return cls(np.zeros((0, p)), np.zeros(0))


# -- likelihood --------------------------------------------------------------------------


def log_likelihood(beta, data: Dataset) -> np.ndarray:
    """Bernoulli-logit log-likelihood; ``beta`` may carry leading batch axes."""
    b = np.asarray(beta, dtype=float)
    if b.shape[-1] != data.p + 1:
        raise DomainError(f"beta has {b.shape[-1]} entries, model has {data.p + 1}")
    if data.n == 0:
        return np.zeros(b.shape[:-1])
    eta = b @ data.design.T
    return np.sum(data.y * eta - np.logaddexp(0.0, eta), axis=-1)


def log_posterior(beta, data: Dataset, prior: PriorSpec):
    if prior.dim != data.p + 1:
        raise DomainError(f"prior has {prior.dim} coefficients, model has {data.p + 1}")
    out = log_likelihood(beta, data) + prior.log_density(beta)
    return float(out) if np.ndim(out) == 0 else out


# -- maximum likelihood ---------------------------------------------------------------------


@dataclass(frozen=True)
class MLEResult:
    coef: np.ndarray
    converged: bool
    gradient_norm: float
    iterations: int


def logistic_mle(data: Dataset, tol: float = 1e-8, max_iter: int = 50, bound: float = 30.0) -> MLEResult:
    """Newton-Raphson with step halving.

    Separated or nearly separated data drive coefficients off to infinity;
    once any ``|coef|`` exceeds ``bound`` the fit stops and is returned
    flagged as not converged. A fit that reproduces every response to
    within 1e-6 is complete separation stopped short of ``bound`` by the
    gradient tolerance, and is flagged too.
    """
    Z = data.design
    y = data.y
    beta = np.zeros(Z.shape[1])
    ll = float(log_likelihood(beta, data))
    grad_norm = math.inf
    for it in range(1, max_iter + 1):
        eta = Z @ beta
        mu = 1.0 / (1.0 + np.exp(-eta))
        grad = Z.T @ (y - mu)
        grad_norm = float(np.max(np.abs(grad)))
        if grad_norm < tol:
            separated = data.n > 0 and float(np.max(np.abs(y - mu))) < 1e-6
            return MLEResult(beta, not separated, grad_norm, it - 1)
        w = mu * (1.0 - mu)
        H = Z.T @ (Z * w[:, None])
        try:
            step = np.linalg.solve(H, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, grad, rcond=None)[0]
        t = 1.0
        while t > 1e-10:
            cand = beta + t * step
            cand_ll = float(log_likelihood(cand, data))
            if cand_ll >= ll - 1e-12:
                break
            t *= 0.5
        beta, ll = cand, cand_ll
        if np.max(np.abs(beta)) > bound:
            return MLEResult(beta, False, grad_norm, it)
    eta = Z @ beta
    grad_norm = float(np.max(np.abs(Z.T @ (y - 1.0 / (1.0 + np.exp(-eta))))))
    return MLEResult(beta, grad_norm < tol, grad_norm, max_iter)


# -- random-walk Metropolis --------------------------------------------------------------------


class RandomWalk:
    """Vectorized adaptive random-walk Metropolis over a batch of chains.

    Proposals are ``x + exp(log_scale) * diag * z`` with ``z`` standard
    normal. During burn-in ``log_scale`` moves after every batch of 50
    iterations toward 30% acceptance, and ``diag`` is re-estimated from each
    chain's own history at a quarter and at half of burn-in; both are frozen
    afterwards, so post-burn-in draws come from a fixed symmetric kernel.

    The caller supplies ``logpost`` at each step, which lets a Gibbs sampler
    change the target between steps.
    """

    batch = 50

    def __init__(self, init: np.ndarray, diag: np.ndarray, streams, iterations: int, burnin: int):
        self.x = np.array(init, dtype=float)
        chains, dim = self.x.shape
        self.diag = np.array(np.broadcast_to(diag, (chains, dim)), dtype=float)
        self.log_scale = np.full(chains, math.log(2.38 / math.sqrt(dim)))
        self.noise = np.stack([g.standard_normal((iterations, dim)) for g in streams])
        self.log_u = np.stack([np.log(g.random(iterations)) for g in streams])
        self.iterations = iterations
        self.burnin = burnin
        self.accepted = np.zeros(chains, dtype=np.int64)
        self._batch_acc = np.zeros(chains)
        self._batches = 0
        self._window_acc = np.zeros(chains)
        self.current_lp: np.ndarray | None = None
        self.history = np.empty((chains, iterations, dim))

    def step(self, i: int, logpost: Callable[[np.ndarray], np.ndarray], recompute: bool = False) -> np.ndarray:
        if recompute or self.current_lp is None:
            self.current_lp = logpost(self.x)
        step = np.exp(self.log_scale)[:, None] * self.diag * self.noise[:, i, :]
        prop = self.x + step
        prop_lp = logpost(prop)
        with np.errstate(invalid="ignore"):
            accept = self.log_u[:, i] < prop_lp - self.current_lp
        self.x = np.where(accept[:, None], prop, self.x)
        self.current_lp = np.where(accept, prop_lp, self.current_lp)
        self.history[:, i, :] = self.x
        if i < self.burnin:
            self._batch_acc += accept
            if (i + 1) % self.batch == 0:
                self._adapt(i)
        else:
            self.accepted += accept
        return self.x

    def _adapt(self, i: int) -> None:
        rate = self._batch_acc / self.batch
        self._batches += 1
        # step proportional to the distance from 30% acceptance, shrinking
        # since the last reshape so the frozen scale is not one noisy batch
        # full gain while a chain is far off (stuck or sliding), so it recovers fast
        gain = np.where((rate < 0.05) | (rate > 0.8), 1.0, 1.0 / math.sqrt(self._batches))
        self.log_scale += gain * np.clip(3.0 * (rate - 0.3), -1.0, 1.0)
        self._window_acc += self._batch_acc
        self._batch_acc[:] = 0
        done = i + 1
        quarter = (self.burnin // 4) // self.batch * self.batch
        if quarter >= 100 and done in (quarter, 2 * quarter):
            # reshape from the preceding quarter of burn-in
            sd = self.history[:, done - quarter : done, :].std(axis=1)
            base = math.log(2.38 / math.sqrt(self.diag.shape[1]))
            # chains that barely moved in the window, and coordinates with no
            # spread, keep their current effective step
            kept_step = self.diag * np.exp(self.log_scale - base)[:, None]
            moved = (self._window_acc >= 20)[:, None] & (sd > 0)
            self.diag = np.where(moved, sd, kept_step)
            self.log_scale[:] = base
            self._batches = 0
            self._window_acc[:] = 0

    @property
    def acceptance_rate(self) -> np.ndarray:
        kept = self.iterations - self.burnin
        return self.accepted / kept if kept > 0 else np.zeros_like(self.accepted, dtype=float)


@dataclass
class Chains:
    """All iterations of all chains, burn-in included."""

    draws: np.ndarray
    burnin: int
    seed: int | None = None
    acceptance: np.ndarray | None = None
    names: list[str] | None = None

    def __post_init__(self):
        if self.draws.ndim != 3:
            raise DomainError("draws must have shape (chains, iterations, dim)")
        if not self.draws.shape[1] > self.burnin:
            raise DomainError("need more iterations than burn-in")

    @property
    def kept(self) -> np.ndarray:
        return self.draws[:, self.burnin :, :]

    @property
    def pooled(self) -> np.ndarray:
        k = self.kept
        return k.reshape(-1, k.shape[2])

    @property
    def dim(self) -> int:
        return self.draws.shape[2]

    def coef_names(self) -> list[str]:
        return self.names or [f"beta{j}" for j in range(self.dim)]

    def to_csv(self, path, provenance: str | None = None, include_burnin: bool = False) -> None:
        d = self.draws if include_burnin else self.kept
        start = 0 if include_burnin else self.burnin
        rows = []
        for c in range(d.shape[0]):
            for i in range(d.shape[1]):
                rows.append([c, start + i, *d[c, i]])
        write_csv(path, ["chain", "iteration", *self.coef_names()], rows, provenance)

    def histograms(self, bins: int = 50) -> dict[str, tuple[np.ndarray, np.ndarray]]:
        out = {}
        for j, name in enumerate(self.coef_names()):
            dens, edges = np.histogram(self.pooled[:, j], bins=bins, density=True)
            out[name] = (0.5 * (edges[1:] + edges[:-1]), dens)
        return out


def mh_sample(
    data: Dataset,
    prior: PriorSpec,
    chains: int = 4,
    iterations: int = 5000,
    burnin: int = 2000,
    seed=0,
) -> Chains:
    """Random-walk Metropolis draws from the posterior, chains started from the prior."""
    if not iterations > burnin >= 0:
        raise DomainError("need iterations > burnin >= 0")
    if chains < 1:
        raise DomainError("need at least one chain")
    if prior.dim != data.p + 1:
        raise DomainError(f"prior has {prior.dim} coefficients, model has {data.p + 1}")
    streams = chain_streams(seed, chains)
    init = np.stack([prior.sample(g) for g in streams])
    rw = RandomWalk(init, _initial_diag(prior), streams, iterations, burnin)
    target = lambda b: log_posterior(b, data, prior)
    for i in range(iterations):
        rw.step(i, target)
    return Chains(rw.history, burnin, seed if isinstance(seed, int) else None, rw.acceptance_rate)


def _initial_diag(prior: PriorSpec) -> np.ndarray:
    return np.minimum(prior.sds, 1.0)


# -- summaries ------------------------------------------------------------------------------


def split_rhat(x: np.ndarray) -> float:
    """Split-chain potential scale reduction for ``x`` of shape (chains, draws)."""
    chains, n = x.shape
    half = n // 2
    if half < 2:
        return math.nan
    parts = np.concatenate([x[:, :half], x[:, n - half :]], axis=0)
    W = parts.var(axis=1, ddof=1).mean()
    if W == 0:
        return 1.0
    B_over_n = parts.mean(axis=1).var(ddof=1)
    var_plus = (half - 1) / half * W + B_over_n
    return float(math.sqrt(var_plus / W))


def histogram_map(x: np.ndarray) -> float:
    """Midpoint of the fullest Freedman-Diaconis histogram bin."""
    x = np.asarray(x, dtype=float)
    if np.ptp(x) == 0:
        return float(x[0])
    edges = np.histogram_bin_edges(x, bins="fd")
    # fd degenerates to a single bin when the IQR is zero
    if edges.size < 3:
        edges = np.histogram_bin_edges(x, bins="sturges")
    counts, edges = np.histogram(x, bins=edges)
    j = int(np.argmax(counts))
    return float(0.5 * (edges[j] + edges[j + 1]))


@dataclass
class PosteriorSummary:
    names: list[str]
    mean: np.ndarray
    ci_low: np.ndarray
    ci_high: np.ndarray
    map: np.ndarray
    rhat: np.ndarray
    extra: dict = field(default_factory=dict)

    def covers(self, truth) -> np.ndarray:
        t = np.asarray(truth, dtype=float)
        return (self.ci_low <= t) & (t <= self.ci_high)

    def rows(self):
        for j, name in enumerate(self.names):
            yield [name, self.mean[j], self.ci_low[j], self.ci_high[j], self.map[j], self.rhat[j]]

    def to_csv(self, path, provenance: str | None = None) -> None:
        write_csv(path, ["parameter", "mean", "ci_low", "ci_high", "map", "rhat"], list(self.rows()), provenance)

    def to_dict(self) -> dict:
        return {
            name: {"mean": m, "ci_low": lo, "ci_high": hi, "map": mp, "rhat": r}
            for name, m, lo, hi, mp, r in self.rows()
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    def table(self) -> str:
        lines = [f"{'parameter':>10} {'mean':>9} {'2.5%':>9} {'97.5%':>9} {'MAP':>9} {'Rhat':>6}"]
        for name, m, lo, hi, mp, r in self.rows():
            lines.append(f"{name:>10} {m:9.4f} {lo:9.4f} {hi:9.4f} {mp:9.4f} {r:6.3f}")
        return "\n".join(lines)


def summarize(chains: Chains, min_draws: int = 1000) -> PosteriorSummary:
    kept = chains.kept
    if kept.shape[1] < min_draws:
        raise DomainError(
            f"summaries need at least {min_draws} post-burn-in draws per chain, got {kept.shape[1]}"
        )
    pooled = chains.pooled
    mean = pooled.mean(axis=0)
    lo, hi = np.quantile(pooled, [0.025, 0.975], axis=0)
    maps = np.array([histogram_map(pooled[:, j]) for j in range(chains.dim)])
    rhat = np.array([split_rhat(kept[:, :, j]) for j in range(chains.dim)])
    return PosteriorSummary(chains.coef_names(), mean, lo, hi, maps, rhat)


# -- grid oracle ----------------------------------------------------------------------------------


def grid_posterior_means(
    data: Dataset, prior: PriorSpec, points: int = 201, width: float = 6.0, edge_tol: float = 1e-12
) -> np.ndarray:
    """Posterior means by brute-force summation on a dense 2-D grid (p = 1 only).

    The grid spans ``prior mean +- width * prior sd`` when that is narrow
    enough to resolve the posterior. Under diffuse priors the box is first
    shrunk to ``MLE +- 10`` standard errors and then widened until the
    unnormalized posterior on its boundary is below ``edge_tol`` times the peak.
    """
    if data.p != 1:
        raise PreconditionError("the grid oracle handles exactly one covariate")
    lo = prior.means - width * prior.sds
    hi = prior.means + width * prior.sds
    fit = logistic_mle(data)
    if fit.converged:
        Z = data.design
        w = 1.0 / (1.0 + np.exp(-(Z @ fit.coef)))
        cov = np.linalg.inv(Z.T @ (Z * (w * (1 - w))[:, None]) + np.diag(1.0 / prior.variances))
        se = np.sqrt(np.diag(cov))
        lo = np.maximum(lo, fit.coef - 10 * se)
        hi = np.minimum(hi, fit.coef + 10 * se)
    full_lo = prior.means - width * prior.sds
    full_hi = prior.means + width * prior.sds
    while True:
        axes = [np.linspace(a, b, points) for a, b in zip(lo, hi)]
        B0, B1 = np.meshgrid(*axes, indexing="ij")
        lp = log_posterior(np.stack([B0, B1], axis=-1), data, prior)
        wts = np.exp(lp - lp.max())
        edge = max(wts[0].max(), wts[-1].max(), wts[:, 0].max(), wts[:, -1].max())
        if edge < edge_tol or (np.all(lo <= full_lo) and np.all(hi >= full_hi)):
            break
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        lo = np.maximum(full_lo, mid - 1.5 * half)
        hi = np.minimum(full_hi, mid + 1.5 * half)
    wts /= wts.sum()
    return np.array([(wts * B0).sum(), (wts * B1).sum()])
