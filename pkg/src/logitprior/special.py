"""Digamma and trigamma for positive real arguments.

Upward recurrence moves the argument past ``_SHIFT`` where the asymptotic
(Stirling-type) series converges to double precision with the tabulated
Bernoulli terms.
"""

from __future__ import annotations

import math

import numpy as np

from .exceptions import DomainError

__all__ = ["digamma", "trigamma"]

_SHIFT = 12.0
# B_2k for k = 1..8
_BERNOULLI = (1 / 6, -1 / 30, 1 / 42, -1 / 30, 5 / 66, -691 / 2730, 7 / 6, -3617 / 510)


def _check(x: float) -> float:
    x = float(x)
    if not (x > 0 and math.isfinite(x)):
        raise DomainError(f"argument must be positive and finite, got {x}")
    return x


def _digamma_scalar(x: float) -> float:
    x = _check(x)
    acc = 0.0
    while x < _SHIFT:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    power = inv2
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k) * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - series


def _trigamma_scalar(x: float) -> float:
    x = _check(x)
    acc = 0.0
    while x < _SHIFT:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    power = inv2 * inv
    for b in _BERNOULLI:
        series += b * power
        power *= inv2
    return acc + inv + 0.5 * inv2 + series


def digamma(x):
    """psi(x) = d/dx log Gamma(x), x > 0."""
    if np.ndim(x) == 0:
        return _digamma_scalar(x)
    return np.vectorize(_digamma_scalar, otypes=[float])(x)


def trigamma(x):
    """psi'(x), x > 0."""
    if np.ndim(x) == 0:
        return _trigamma_scalar(x)
    return np.vectorize(_trigamma_scalar, otypes=[float])(x)
