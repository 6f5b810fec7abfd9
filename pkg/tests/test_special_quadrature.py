import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special as sp

from logitprior.exceptions import DomainError
from logitprior.quadrature import tanh_sinh
from logitprior.special import digamma, trigamma


def test_known_values():
    assert digamma(1.0) == pytest.approx(-0.5772156649015329, rel=1e-15)
    assert trigamma(1.0) == pytest.approx(math.pi**2 / 6, rel=1e-15)
    assert digamma(0.5) == pytest.approx(-0.5772156649015329 - 2 * math.log(2), rel=1e-14)
    assert trigamma(0.5) == pytest.approx(math.pi**2 / 2, rel=1e-14)


@given(st.floats(1e-3, 1e4))
def test_against_scipy(x):
    assert digamma(x) == pytest.approx(sp.digamma(x), rel=1e-10, abs=1e-13)
    assert trigamma(x) == pytest.approx(sp.polygamma(1, x), rel=1e-10)


@given(st.floats(0.01, 100))
def test_recurrences(x):
    assert digamma(x + 1) - digamma(x) == pytest.approx(1 / x, rel=1e-10)
    assert trigamma(x) - trigamma(x + 1) == pytest.approx(1 / x**2, rel=1e-9)


def test_domain():
    with pytest.raises(DomainError):
        digamma(0.0)
    with pytest.raises(DomainError):
        trigamma(-1.0)


@pytest.mark.parametrize(
    "f,a,b,exact",
    [
        (lambda x: x**2, 0.0, 1.0, 1 / 3),
        (lambda x: np.log(x) ** 2, 0.0, 1.0, 2.0),
        (lambda x: 1 / np.sqrt(x), 0.0, 1.0, 2.0),
        (lambda x: x**-0.9, 0.0, 1.0, 10.0),
        (np.cos, 0.0, math.pi / 2, 1.0),
    ],
)
def test_tanh_sinh(f, a, b, exact):
    res = tanh_sinh(f, a, b)
    assert res.value == pytest.approx(exact, abs=1e-10)
    assert res.error < 1e-8
