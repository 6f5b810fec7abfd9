"""Mean and variance of ``eta = logit(theta)`` for ``theta ~ Beta(alpha, beta)``.

Two independent routes:

* :func:`eta_mean_var` integrates ``logit(theta)^k`` against the Beta density
  with tanh-sinh quadrature on (0, 1);
* :func:`eta_mean_var_analytic` uses ``E[eta] = psi(alpha) - psi(beta)`` and
  ``Var[eta] = psi'(alpha) + psi'(beta)``.

Prior construction uses the analytic route; the quadrature route exists to be
checked against it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import BetaShape, beta_logpdf
from .exceptions import DomainError
from .quadrature import QuadResult, tanh_sinh
from .special import digamma, trigamma

__all__ = ["EtaMoments", "eta_moment", "eta_mean_var", "eta_mean_var_analytic"]


@dataclass(frozen=True)
class EtaMoments:
    mu_eta: float
    var_eta: float
    mu_error: float = 0.0
    var_error: float = 0.0

    def __post_init__(self):
        if not self.var_eta > 0:
            raise DomainError(f"var_eta must be positive, got {self.var_eta}")

    @property
    def sd_eta(self) -> float:
        return float(np.sqrt(self.var_eta))


def _half_integral(shape: BetaShape, k: int) -> QuadResult:
    """Integral of logit(t)^k Beta(t; shape) over (0, 1/2]."""

    def integrand(t):
        logit = np.log(t) - np.log1p(-t)
        return logit**k * np.exp(beta_logpdf(t, shape))

    return tanh_sinh(integrand, 0.0, 0.5, tol=1e-13)


def eta_moment(shape: BetaShape, k: int) -> QuadResult:
    """Raw moment ``E[eta^k]`` for ``k`` in {1, 2}, as ``(value, error)``.

    The upper half of (0, 1) is folded onto the lower half via
    ``theta -> 1 - theta``, which swaps the shapes and negates the logit, so
    both endpoint singularities are resolved at the origin.
    """
    if k not in (1, 2):
        raise NotImplementedError(f"only k = 1 or 2 is supported, got {k}")
    if not isinstance(shape, BetaShape):
        shape = BetaShape(*shape)
    lower = _half_integral(shape, k)
    upper = _half_integral(shape.swapped, k)
    sign = -1.0 if k == 1 else 1.0
    return QuadResult(lower.value + sign * upper.value, lower.error + upper.error)


def eta_mean_var(shape: BetaShape) -> EtaMoments:
    if not isinstance(shape, BetaShape):
        shape = BetaShape(*shape)
    m1 = eta_moment(shape, 1)
    m2 = eta_moment(shape, 2)
    var = m2.value - m1.value**2
    var_err = m2.error + 2 * abs(m1.value) * m1.error
    return EtaMoments(m1.value, var, m1.error, var_err)


def eta_mean_var_analytic(shape: BetaShape) -> EtaMoments:
    if not isinstance(shape, BetaShape):
        shape = BetaShape(*shape)
    mu = digamma(shape.alpha) - digamma(shape.beta)
    var = trigamma(shape.alpha) + trigamma(shape.beta)
    return EtaMoments(mu, var)
