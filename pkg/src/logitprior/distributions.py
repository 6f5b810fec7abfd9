"""Logistic, half-logistic, Type IV generalized logistic, Beta and Normal laws.

Only the handful of families needed for induced-prior work live here. All
densities accept scalars or arrays and return the same shape; scalars come
back as plain floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betaln, expit

from ._random import as_generator
from .exceptions import DomainError

__all__ = [
    "LogisticParams",
    "BetaShape",
    "NormalParams",
    "logistic_pdf",
    "logistic_logpdf",
    "logistic_cdf",
    "logistic_quantile",
    "logistic_sample",
    "logistic_moments",
    "logistic_support",
    "half_logistic_pdf",
    "half_logistic_sample",
    "gen_logistic4_pdf",
    "gen_logistic4_logpdf",
    "beta_pdf",
    "beta_logpdf",
    "beta_sample",
    "beta_moments",
    "normal_pdf",
    "normal_logpdf",
    "normal_sample",
]


@dataclass(frozen=True)
class LogisticParams:
    mu: float = 0.0
    s: float = 1.0

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.s)) or self.s <= 0:
            raise DomainError(f"logistic needs finite mu and s > 0, got mu={self.mu}, s={self.s}")


@dataclass(frozen=True)
class BetaShape:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0) or not (
            math.isfinite(self.alpha) and math.isfinite(self.beta)
        ):
            raise DomainError(
                f"Beta shapes must be finite and positive, got ({self.alpha}, {self.beta})"
            )

    @property
    def swapped(self) -> "BetaShape":
        return BetaShape(self.beta, self.alpha)


@dataclass(frozen=True)
class NormalParams:
    mean: float
    variance: float

    def __post_init__(self):
        if not (math.isfinite(self.mean) and math.isfinite(self.variance)) or self.variance <= 0:
            raise DomainError(
                f"Normal needs finite mean and variance > 0, got ({self.mean}, {self.variance})"
            )

    @property
    def sd(self) -> float:
        return math.sqrt(self.variance)


_STD_LOGISTIC = LogisticParams()


def _finite(x, name="x"):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    return arr


def _out(arr, like):
    return float(arr) if np.ndim(like) == 0 else arr


# -- logistic -----------------------------------------------------------------


def logistic_logpdf(x, params: LogisticParams = _STD_LOGISTIC):
    xa = _finite(x)
    z = np.abs((xa - params.mu) / params.s)
    # symmetric form: -|z| - 2 log(1 + e^{-|z|}) never overflows
    out = -z - 2.0 * np.log1p(np.exp(-z)) - math.log(params.s)
    return _out(out, x)


def logistic_pdf(x, params: LogisticParams = _STD_LOGISTIC):
    xa = _finite(x)
    e = np.exp(-np.abs((xa - params.mu) / params.s))
    return _out(e / (params.s * (1.0 + e) ** 2), x)


def logistic_cdf(x, params: LogisticParams = _STD_LOGISTIC):
    xa = np.asarray(x, dtype=float)
    if np.any(np.isnan(xa)):
        raise DomainError("x must not be NaN")
    return _out(expit((xa - params.mu) / params.s), x)


def logistic_quantile(u, params: LogisticParams = _STD_LOGISTIC):
    ua = np.asarray(u, dtype=float)
    if np.any(~((ua > 0) & (ua < 1))):
        raise DomainError("logistic quantile needs 0 < u < 1")
    return _out(params.mu + params.s * (np.log(ua) - np.log1p(-ua)), u)


def _open_uniform(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform(np.nextafter(0.0, 1.0), 1.0, size=n)


def logistic_sample(params: LogisticParams, n: int, seed=None) -> np.ndarray:
    """Inverse-CDF draws; identical seeds give identical arrays."""
    rng = as_generator(seed)
    return logistic_quantile(_open_uniform(rng, int(n)), params)


def logistic_moments(params: LogisticParams = _STD_LOGISTIC) -> tuple[float, float]:
    """(mean, variance) = (mu, s^2 pi^2 / 3)."""
    return params.mu, params.s**2 * math.pi**2 / 3.0


def logistic_support(params: LogisticParams = _STD_LOGISTIC, eps: float = 1e-10) -> tuple[float, float]:
    """Interval holding all but ``2 * eps`` of the mass."""
    return logistic_quantile(eps, params), logistic_quantile(1.0 - eps, params)


# -- half-logistic --------------------------------------------------------------


def half_logistic_pdf(x, params: LogisticParams = _STD_LOGISTIC):
    """Logistic density folded onto ``x >= mu`` (twice the logistic there, zero below)."""
    xa = _finite(x)
    dens = np.where(xa >= params.mu, 2.0 * logistic_pdf(xa, params), 0.0)
    return _out(dens, x)


def half_logistic_sample(params: LogisticParams, n: int, seed=None) -> np.ndarray:
    rng = as_generator(seed)
    u = _open_uniform(rng, int(n))
    return logistic_quantile(0.5 + 0.5 * u * (1.0 - 1e-16), params)


# -- Type IV generalized logistic -------------------------------------------------


def gen_logistic4_logpdf(eta, shape: BetaShape):
    ea = _finite(eta, "eta")
    out = shape.alpha * ea - (shape.alpha + shape.beta) * np.logaddexp(0.0, ea)
    return _out(out - betaln(shape.alpha, shape.beta), eta)


def gen_logistic4_pdf(eta, shape: BetaShape):
    """Density of ``logit(theta)`` when ``theta ~ Beta(alpha, beta)``."""
    return _out(np.exp(gen_logistic4_logpdf(eta, shape)), eta)


# -- Beta ---------------------------------------------------------------------------


def beta_logpdf(x, shape: BetaShape):
    xa = np.asarray(x, dtype=float)
    inside = (xa > 0) & (xa < 1)
    xs = np.where(inside, xa, 0.5)
    out = (shape.alpha - 1) * np.log(xs) + (shape.beta - 1) * np.log1p(-xs)
    out = np.where(inside, out - betaln(shape.alpha, shape.beta), -np.inf)
    return _out(out, x)


def beta_pdf(x, shape: BetaShape):
    return _out(np.exp(beta_logpdf(x, shape)), x)


def beta_sample(shape: BetaShape, n: int, seed=None) -> np.ndarray:
    """Draws via the ratio ``G1 / (G1 + G2)`` of unit-rate gamma variates."""
    rng = as_generator(seed)
    g1 = rng.standard_gamma(shape.alpha, size=int(n))
    g2 = rng.standard_gamma(shape.beta, size=int(n))
    return g1 / (g1 + g2)


def beta_moments(shape: BetaShape) -> tuple[float, float]:
    a, b = shape.alpha, shape.beta
    return a / (a + b), a * b / ((a + b) ** 2 * (a + b + 1))


# -- Normal -------------------------------------------------------------------------


def normal_logpdf(x, params: NormalParams):
    xa = np.asarray(x, dtype=float)
    out = -0.5 * (xa - params.mean) ** 2 / params.variance - 0.5 * math.log(
        2 * math.pi * params.variance
    )
    return _out(out, x)


def normal_pdf(x, params: NormalParams):
    return _out(np.exp(normal_logpdf(x, params)), x)


def normal_sample(params: NormalParams, n: int, seed=None) -> np.ndarray:
    rng = as_generator(seed)
    return params.mean + params.sd * rng.standard_normal(int(n))
