"""Change of variables between coefficient space and probability space.

``induce_theta_density`` maps a prior on the logit scale to the density it
implies for ``theta = expit(beta)``; ``induce_beta_density`` goes the other
way. :func:`pushforward_sample` handles everything without a closed form by
Monte Carlo: draw parameters, push them through a transform, histogram.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np
from scipy import stats
from scipy.special import expit, logit

from . import distributions as D
from ._random import substream
from .exceptions import DomainError
from .io import write_csv

__all__ = [
    "DensityFn",
    "PushforwardSpec",
    "PushforwardResult",
    "logistic_density",
    "normal_density",
    "beta_density",
    "uniform_density",
    "induce_theta_density",
    "induce_beta_density",
    "pushforward_sample",
    "normal_sampler",
    "positive_normal_sampler",
    "constant_sampler",
    "ricker_model_a_spec",
]


@dataclass(frozen=True)
class DensityFn:
    """A vectorized density together with the interval it lives on."""

    fn: Callable[[np.ndarray], np.ndarray]
    support: tuple[float, float] = (-math.inf, math.inf)
    name: str = ""

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        lo, hi = self.support
        inside = (xa >= lo) & (xa <= hi)
        with np.errstate(all="ignore"):
            val = np.where(inside, self.fn(np.where(inside, xa, 0.5 * (max(lo, -1) + min(hi, 1)))), 0.0)
        return float(val) if np.ndim(x) == 0 else val


def logistic_density(params: D.LogisticParams = D.LogisticParams()) -> DensityFn:
    return DensityFn(lambda x: D.logistic_pdf(x, params), name=f"logistic({params.mu},{params.s})")


def normal_density(params: D.NormalParams) -> DensityFn:
    return DensityFn(
        lambda x: D.normal_pdf(x, params), name=f"normal({params.mean},{params.variance})"
    )


def beta_density(shape: D.BetaShape) -> DensityFn:
    return DensityFn(
        lambda x: D.beta_pdf(x, shape), (0.0, 1.0), name=f"beta({shape.alpha},{shape.beta})"
    )


def uniform_density() -> DensityFn:
    return DensityFn(lambda x: np.ones_like(x), (0.0, 1.0), name="uniform")


def induce_theta_density(beta_prior: DensityFn, theta):
    """Density of ``theta = expit(beta)`` when ``beta`` has density ``beta_prior``."""
    t = np.asarray(theta, dtype=float)
    if np.any(~((t > 0) & (t < 1))):
        raise DomainError("theta must lie strictly inside (0, 1)")
    dens = np.asarray(beta_prior(logit(t))) / (t * (1.0 - t))
    return float(dens) if np.ndim(theta) == 0 else dens


def induce_beta_density(theta_prior: DensityFn, beta):
    """Density of ``beta = logit(theta)`` when ``theta`` has density ``theta_prior``."""
    b = np.asarray(beta, dtype=float)
    if not np.all(np.isfinite(b)):
        raise DomainError("beta must be finite")
    theta = expit(b)
    # expit'(b) written symmetrically so it stays accurate for large |b|
    e = np.exp(-np.abs(b))
    jac = e / (1.0 + e) ** 2
    dens = np.asarray(theta_prior(theta)) * jac
    return float(dens) if np.ndim(beta) == 0 else dens


# -- Monte Carlo pushforward ---------------------------------------------------------

Sampler = Callable[[np.random.Generator, int], np.ndarray]


@dataclass
class PushforwardSpec:
    """Named parameter samplers and a vectorized transform of their draws.

    ``transform`` receives a dict mapping each sampler name to an array of
    ``n`` draws and returns ``n`` transformed values. Samplers are called in
    insertion order, each with its own substream.
    """

    samplers: Mapping[str, Sampler]
    transform: Callable[[dict[str, np.ndarray]], np.ndarray]
    n: int = 100_000
    max_nonfinite_fraction: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("sample count must be at least 1")


@dataclass
class PushforwardResult:
    draws: np.ndarray
    edges: np.ndarray
    density: np.ndarray
    params: dict[str, np.ndarray] = field(default_factory=dict, repr=False)

    @property
    def grid(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def skewness(self) -> float:
        return float(stats.skew(self.draws))

    def mass_in(self, lo: float, hi: float) -> float:
        return float(np.mean((self.draws >= lo) & (self.draws <= hi)))

    def to_csv(self, path, provenance: str | None = None) -> None:
        write_csv(path, ["grid", "density"], np.column_stack([self.grid, self.density]), provenance)

    def to_json(self) -> str:
        return json.dumps({"grid": self.grid.tolist(), "density": self.density.tolist()})


_CHUNK = 1 << 16


def _run_chunk(spec: PushforwardSpec, seed, index: int, size: int):
    params = {}
    for j, (name, sampler) in enumerate(spec.samplers.items()):
        rng = np.random.default_rng(substream(seed, index, j))
        params[name] = np.asarray(sampler(rng, size), dtype=float)
    with np.errstate(all="ignore"):
        values = np.asarray(spec.transform(params), dtype=float)
    return values, params


def pushforward_sample(
    spec: PushforwardSpec,
    seed=0,
    bins: int = 512,
    range: tuple[float, float] | None = None,
    workers: int = 1,
) -> PushforwardResult:
    """Draw ``spec.n`` transformed values and a normalized histogram.

    Draws are produced in fixed-size chunks, each with its own substream, so
    the output does not depend on ``workers``. The default histogram range is
    the empirical 0.1%-99.9% quantile range.
    """
    sizes = [min(_CHUNK, spec.n - start) for start in np.arange(0, spec.n, _CHUNK)]
    jobs = list(enumerate(sizes))
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _run_chunk(spec, seed, *job), jobs))
    else:
        parts = [_run_chunk(spec, seed, i, s) for i, s in jobs]
    draws = np.concatenate([p[0] for p in parts])
    params = {name: np.concatenate([p[1][name] for p in parts]) for name in spec.samplers}

    bad = ~np.isfinite(draws)
    if bad.mean() > spec.max_nonfinite_fraction:
        i = int(np.flatnonzero(bad)[0])
        offending = ", ".join(f"{k}={float(v[i])!r}" for k, v in params.items())
        raise DomainError(
            f"{int(bad.sum())} of {draws.size} transformed draws are non-finite; "
            f"first at draw {i} ({offending})"
        )
    good = draws[~bad]
    if range is None:
        lo, hi = np.quantile(good, [0.001, 0.999])
        if lo == hi:
            lo, hi = lo - 0.5, hi + 0.5
        range = (float(lo), float(hi))
    counts, edges = np.histogram(good, bins=bins, range=range)
    width = np.diff(edges)
    # normalized against all finite draws so out-of-range mass is not inflated back in
    density = counts / (good.size * width)
    return PushforwardResult(draws=good, edges=edges, density=density, params=params)


# -- sampler helpers ------------------------------------------------------------------


def normal_sampler(mean: float, sd: float) -> Sampler:
    return lambda rng, n: mean + sd * rng.standard_normal(n)


def positive_normal_sampler(mean: float, sd: float) -> Sampler:
    """Normal(mean, sd^2) truncated to the positive half-line."""
    a = (0.0 - mean) / sd
    dist = stats.truncnorm(a, np.inf, loc=mean, scale=sd)
    return lambda rng, n: dist.rvs(size=n, random_state=rng)


def constant_sampler(value: float) -> Sampler:
    return lambda rng, n: np.full(n, float(value))


def ricker_model_a_spec(
    a_mean: float = 0.0,
    a_sd: float = 10.0,
    b_mean: float = 0.0,
    b_sd: float = 10.0,
    n: int = 100_000,
) -> PushforwardSpec:
    """Induced prior on carrying capacity ``K = a / b`` for the Ricker model
    ``N[t+1] = N[t] exp(a - b N[t])`` with positive-truncated normal priors."""
    return PushforwardSpec(
        samplers={"a": positive_normal_sampler(a_mean, a_sd), "b": positive_normal_sampler(b_mean, b_sd)},
        transform=lambda d: d["a"] / d["b"],
        n=n,
    )
