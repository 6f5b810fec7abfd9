"""Independent Normal priors on logistic-regression coefficients.

With standardized covariates the linear predictor at an average design row
has mean equal to the intercept mean and variance equal to the sum of the
coefficient variances. Each builder picks those so the predictor matches the
logit of a target prior on the success probability:

* ``logistic``: Uniform(0, 1) target, all coefficients ``Normal(0, pi^2 / (3(p+1)))``;
* ``beta_matched``: Beta target, total variance split evenly over ``p + 1`` terms;
* ``weighted``: Beta target, a fraction ``k`` of the variance on the intercept;
* ``vague``: the diffuse ``Normal(0, sd^2)`` baseline.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distributions import BetaShape, NormalParams
from .eta_moments import eta_mean_var_analytic
from .exceptions import DomainError

__all__ = [
    "PRIOR_KINDS",
    "PriorSpec",
    "beta_shapes_from_mean_cv",
    "logistic_matched_priors",
    "beta_matched_priors",
    "weighted_priors",
    "vague_priors",
    "SPOCC_SD",
    "WIDE_SD",
]

PRIOR_KINDS = ("vague", "logistic", "beta_matched", "weighted")

# named presets for the occupancy comparison
SPOCC_SD = 1.65
WIDE_SD = 40.0


@dataclass(frozen=True)
class PriorSpec:
    """Normal priors for ``(beta_0, ..., beta_p)``; index 0 is the intercept."""

    p: int
    coeff_priors: tuple[NormalParams, ...]
    kind: str
    k: float | None = None
    target: BetaShape | None = None

    def __post_init__(self):
        if self.kind not in PRIOR_KINDS:
            raise DomainError(f"unknown prior kind {self.kind!r}; expected one of {PRIOR_KINDS}")
        if len(self.coeff_priors) != self.p + 1:
            raise DomainError(f"need {self.p + 1} coefficient priors, got {len(self.coeff_priors)}")
        if self.kind == "weighted" and self.k is None:
            raise DomainError("weighted priors carry their weight k")

    @property
    def dim(self) -> int:
        return self.p + 1

    @property
    def means(self) -> np.ndarray:
        return np.array([c.mean for c in self.coeff_priors])

    @property
    def variances(self) -> np.ndarray:
        return np.array([c.variance for c in self.coeff_priors])

    @property
    def sds(self) -> np.ndarray:
        return np.sqrt(self.variances)

    @property
    def total_variance(self) -> float:
        return float(self.variances.sum())

    def log_density(self, beta: np.ndarray) -> np.ndarray:
        """Sum of Normal log-densities over the last axis of ``beta``."""
        b = np.asarray(beta, dtype=float)
        v = self.variances
        return np.sum(-0.5 * (b - self.means) ** 2 / v - 0.5 * np.log(2 * math.pi * v), axis=-1)

    def sample(self, rng: np.random.Generator, size: int | tuple = ()) -> np.ndarray:
        shape = (size,) if isinstance(size, int) else tuple(size)
        return self.means + self.sds * rng.standard_normal(shape + (self.dim,))

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "p": self.p}
        if self.k is not None:
            out["k"] = self.k
        if self.target is not None:
            out["target"] = {"alpha": self.target.alpha, "beta": self.target.beta}
        out["coefficients"] = [{"mean": c.mean, "variance": c.variance} for c in self.coeff_priors]
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> "PriorSpec":
        target = d.get("target")
        return cls(
            p=int(d["p"]),
            coeff_priors=tuple(NormalParams(c["mean"], c["variance"]) for c in d["coefficients"]),
            kind=d["kind"],
            k=d.get("k"),
            target=BetaShape(target["alpha"], target["beta"]) if target else None,
        )

    @classmethod
    def from_json(cls, text: str) -> "PriorSpec":
        return cls.from_dict(json.loads(text))


def beta_shapes_from_mean_cv(mean: float, cv: float) -> BetaShape:
    """Beta shapes with the given mean and coefficient of variation.

    Raises
    ------
    DomainError
        If the implied variance is at least ``mean (1 - mean)``, which no Beta
        can reach; the message states the largest feasible cv.
    """
    if not 0 < mean < 1:
        raise DomainError(f"mean must lie in (0, 1), got {mean}")
    if not cv > 0:
        raise DomainError(f"cv must be positive, got {cv}")
    var = (mean * cv) ** 2
    ceiling = mean * (1 - mean)
    if var >= ceiling:
        max_cv = math.sqrt((1 - mean) / mean)
        raise DomainError(
            f"cv={cv} is infeasible for mean={mean}: a Beta needs cv < {max_cv:.6g}"
        )
    c = ceiling / var - 1.0
    return BetaShape(mean * c, (1 - mean) * c)


def _check_p(p: int) -> int:
    if int(p) != p or p < 0:
        raise DomainError(f"covariate count must be a nonnegative integer, got {p}")
    return int(p)


def logistic_matched_priors(p: int) -> PriorSpec:
    p = _check_p(p)
    var = math.pi**2 / (3 * (p + 1))
    return PriorSpec(p, tuple(NormalParams(0.0, var) for _ in range(p + 1)), "logistic")


def _resolve_target(target, mean, cv) -> BetaShape:
    if target is None:
        if mean is None or cv is None:
            raise DomainError("give either a Beta target or both mean and cv")
        return beta_shapes_from_mean_cv(mean, cv)
    return target if isinstance(target, BetaShape) else BetaShape(*target)


def beta_matched_priors(
    p: int, target: BetaShape | Sequence[float] | None = None, *, mean=None, cv=None
) -> PriorSpec:
    p = _check_p(p)
    target = _resolve_target(target, mean, cv)
    eta = eta_mean_var_analytic(target)
    var = eta.var_eta / (p + 1)
    coeffs = (NormalParams(eta.mu_eta, var),) + tuple(NormalParams(0.0, var) for _ in range(p))
    return PriorSpec(p, coeffs, "beta_matched", target=target)


def weighted_priors(
    p: int,
    target: BetaShape | Sequence[float] | None = None,
    k: float = 0.4,
    *,
    mean=None,
    cv=None,
) -> PriorSpec:
    """Intercept variance ``k * var_eta``, slopes share ``(1 - k) * var_eta``.

    ``k`` must lie strictly inside (0, 1): at ``k = 1`` the slopes vanish and
    at ``k = 0`` the intercept is fixed.
    """
    p = _check_p(p)
    if p < 1:
        raise DomainError("weighted priors need at least one covariate")
    if not 0 < k < 1:
        raise DomainError(f"k must lie in the open interval (0, 1), got {k}")
    target = _resolve_target(target, mean, cv)
    eta = eta_mean_var_analytic(target)
    slope_var = (1 - k) * eta.var_eta / p
    coeffs = (NormalParams(eta.mu_eta, k * eta.var_eta),) + tuple(
        NormalParams(0.0, slope_var) for _ in range(p)
    )
    return PriorSpec(p, coeffs, "weighted", k=float(k), target=target)


def vague_priors(p: int, sd: float = 1000.0) -> PriorSpec:
    p = _check_p(p)
    if not sd > 0:
        raise DomainError(f"sd must be positive, got {sd}")
    return PriorSpec(p, tuple(NormalParams(0.0, sd * sd) for _ in range(p + 1)), "vague")
