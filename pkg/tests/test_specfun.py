import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lzqfi.specfun import (
    LogGammaValue,
    PoleError,
    QuadratureError,
    digamma_one_minus_ia,
    eta1,
    log_gamma_complex,
    theta1,
    theta1_with_error,
)

import oracles

EULER = 0.5772156649015329
A_GRID = [0.0, 0.01, 0.1, 0.25, 0.5, 1.0, 2.0, 3.3, 4.0]


def test_log_gamma_at_one():
    g = log_gamma_complex(1.0)
    assert g.log_modulus == pytest.approx(0.0, abs=1e-14)
    assert g.argument == pytest.approx(0.0, abs=1e-14)
    assert g.value == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("a", [0.01, 0.25, 1.0, 4.0])
def test_log_gamma_sinh_identity(a):
    g = log_gamma_complex(1.0 - 1j * a)
    exact = math.pi * a / math.sinh(math.pi * a)
    assert abs(math.exp(2.0 * g.log_modulus) / exact - 1.0) <= 1e-12


def test_arg_gamma_matches_integrated_digamma():
    # d/da arg Gamma(1 - i a) = -Re psi(1 - i a)
    g = log_gamma_complex(1.0 - 1.0j)
    assert g.argument == pytest.approx(oracles.arg_gamma_by_integration(1.0), abs=1e-11)


@pytest.mark.parametrize("z", [1 - 0.25j, 0.3 + 2j, -2.5 + 0.1j, 3 - 50j, 0.5 + 50j, 10 + 1j])
def test_log_gamma_against_mpmath(z):
    g = log_gamma_complex(z)
    ref = mpmath.loggamma(z)
    assert g.log_modulus == pytest.approx(float(ref.real), rel=1e-12, abs=1e-12)
    ref_arg = float(mpmath.arg(mpmath.gamma(z)))
    d = (g.argument - ref_arg + math.pi) % (2 * math.pi) - math.pi
    assert abs(d) <= 1e-11 * max(1.0, abs(ref_arg))


@given(st.floats(-50, 50), st.floats(-50, 50))
@settings(max_examples=60, deadline=None)
def test_arg_principal_branch(x, y):
    z = complex(x, y)
    if abs(z - round(x)) < 1e-3 and round(x) <= 0:
        return
    g = log_gamma_complex(z)
    assert -math.pi < g.argument <= math.pi
    assert isinstance(g, LogGammaValue)


@pytest.mark.parametrize("z", [0, -1, -7, complex(-3, 0)])
def test_log_gamma_pole(z):
    with pytest.raises(PoleError):
        log_gamma_complex(z)


def test_theta1_at_zero_is_minus_euler():
    assert theta1(0.0) == pytest.approx(-EULER, abs=1e-10)
    assert oracles.digamma(1.0).real == pytest.approx(-EULER, abs=1e-14)


@pytest.mark.parametrize("a", A_GRID)
def test_theta1_against_series_digamma(a):
    assert theta1(a) == pytest.approx(oracles.digamma(1 - 1j * a).real, abs=1e-8)


def test_theta1_even():
    for a in (0.25, 1.0, 3.7):
        assert theta1(-a) == theta1(a)


@pytest.mark.parametrize("a", np.linspace(0.0, 4.0, 17))
def test_theta1_error_estimate_bounds_actual_error(a):
    val, err = theta1_with_error(a)
    actual = abs(val - float(mpmath.digamma(1 - 1j * a).real))
    assert err >= actual


def test_theta1_rejects_nonfinite():
    with pytest.raises(ValueError):
        theta1(float("nan"))


def test_quadrature_error_carries_estimate():
    e = QuadratureError("x", 1.5, 2e-3)
    assert (e.estimate, e.error) == (1.5, 2e-3)


def test_eta1_values():
    assert eta1(1.0) == pytest.approx((math.pi / math.tanh(math.pi) - 1) / 2, rel=1e-14)
    assert eta1(1.0) == pytest.approx(1.0766740, abs=5e-8)
    assert eta1(0.0) == 0.0


@pytest.mark.parametrize("a", [1e-9, 0.01, 0.03, 0.0318, 0.0319, 0.25, 1.0, 4.0])
def test_eta1_against_quadrature(a):
    assert eta1(a) == pytest.approx(oracles.eta1_quadrature(a), abs=1e-8)
    assert eta1(a) == pytest.approx(-oracles.digamma(1 - 1j * a).imag, rel=1e-13)


@given(st.floats(-20, 20, allow_nan=False))
def test_eta1_odd(a):
    assert eta1(-a) == -eta1(a)


def test_digamma_composition():
    assert digamma_one_minus_ia(0.0) == pytest.approx(complex(-EULER, 0.0), abs=1e-10)
    assert digamma_one_minus_ia(1.0).imag == pytest.approx(-1.0766740, abs=5e-8)


@pytest.mark.parametrize("a", [0.25, 1.0, 2.5])
def test_digamma_matches_log_gamma_difference(a):
    # central difference of log Gamma along the real direction at 1 - i a
    h = 1e-6
    z = 1.0 - 1j * a
    lp, lm = log_gamma_complex(z + h), log_gamma_complex(z - h)
    darg = (lp.argument - lm.argument + math.pi) % (2 * math.pi) - math.pi
    fd = complex((lp.log_modulus - lm.log_modulus) / (2 * h), darg / (2 * h))
    assert abs(digamma_one_minus_ia(a) - fd) <= 1e-6
