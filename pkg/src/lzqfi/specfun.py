"""Special functions for Landau-Zener amplitudes.

Everything here is evaluated along the line ``1 - i a`` in the complex plane:
``log Gamma``, the real and imaginary parts of the digamma function
``psi(1 - i a) = theta1(a) - i eta1(a)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.integrate import quad

__all__ = [
    "LogGammaValue",
    "PoleError",
    "QuadratureError",
    "log_gamma_complex",
    "theta1",
    "theta1_with_error",
    "eta1",
    "digamma_one_minus_ia",
]


class PoleError(ValueError):
    """Raised when Gamma is evaluated at a non-positive integer."""


class QuadratureError(ArithmeticError):
    """Raised when the theta1 quadrature does not reach its tolerance."""

    def __init__(self, message, estimate=float("nan"), error=float("nan")):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class LogGammaValue:
    """``log|Gamma(z)|`` and the principal ``arg Gamma(z)`` in (-pi, pi]."""

    log_modulus: float
    argument: float

    @property
    def value(self) -> complex:
        return cmath.rect(math.exp(self.log_modulus), self.argument)


_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _wrap(angle: float) -> float:
    w = math.remainder(angle, 2.0 * math.pi)
    if w <= -math.pi:
        w += 2.0 * math.pi
    return w


def _lanczos(z: complex) -> complex:
    # valid for Re z >= 1/2
    z = z - 1.0
    series = _LANCZOS[0]
    for k in range(1, len(_LANCZOS)):
        series += _LANCZOS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(series)


def log_gamma_complex(z: complex) -> LogGammaValue:
    """Logarithm of ``Gamma(z)`` by the Lanczos approximation (g=7, n=9).

    The reflection formula handles ``Re z < 1/2``.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at z = {z.real:g}")
    if z.real < 0.5:
        lg = math.log(math.pi) - cmath.log(cmath.sin(math.pi * z)) - _lanczos(1.0 - z)
    else:
        lg = _lanczos(z)
    return LogGammaValue(lg.real, _wrap(lg.imag))


# theta1(a) = Re psi(1 - i a)
#           = int_0^inf [exp(-t)/t - cos(a t)/(exp(t) - 1)] dt
_SPLIT = 1.0
_CUTOFF = 45.0
_SERIES_BELOW = 1e-4
# |integrand| <= exp(-t)/t + 1/(exp(t)-1) beyond the cutoff
_TAIL_BOUND = math.exp(-_CUTOFF) * (1.0 / _CUTOFF + 1.0 / (1.0 - math.exp(-_CUTOFF)))
_EPSABS = 1e-14
_EPSREL = 1e-12


def _near_zero_integrand(t: float, a: float) -> float:
    if t < _SERIES_BELOW:
        a2 = a * a
        return -0.5 + (5.0 / 12.0 + 0.5 * a2) * t - (1.0 / 6.0 + 0.25 * a2) * t * t
    return math.exp(-t) / t - math.cos(a * t) / math.expm1(t)


def _checked_quad(func, lo, hi, **kw):
    value, err, _info, *rest = quad(func, lo, hi, epsabs=_EPSABS, epsrel=_EPSREL,
                                    limit=400, full_output=1, **kw)
    # a trailing message means QUADPACK flagged ier > 0; tolerate roundoff
    # flags when the reported error is still tiny
    if rest and err > 1e-10:
        raise QuadratureError(
            f"theta1 quadrature on [{lo}, {hi}] did not converge: {rest[0]}",
            value, err)
    return value, err


def theta1_with_error(a: float) -> tuple[float, float]:
    """Return ``(theta1(a), error_bound)``.

    The error bound adds the two quadrature estimates and the truncated tail.
    """
    a = float(a)
    if not math.isfinite(a):
        raise ValueError("theta1 requires a finite argument")
    v1, e1 = _checked_quad(_near_zero_integrand, 0.0, _SPLIT, args=(a,))
    # the 1/t piece is smooth on [1, 45]; the cosine piece goes to QAWO
    v2, e2 = _checked_quad(lambda t: math.exp(-t) / t, _SPLIT, _CUTOFF)
    if a == 0.0:
        v3, e3 = _checked_quad(lambda t: 1.0 / math.expm1(t), _SPLIT, _CUTOFF)
    else:
        v3, e3 = _checked_quad(lambda t: 1.0 / math.expm1(t), _SPLIT, _CUTOFF,
                               weight="cos", wvar=abs(a))
    return v1 + v2 - v3, e1 + e2 + e3 + _TAIL_BOUND


def theta1(a: float) -> float:
    """Real part of the digamma function at ``1 - i a``."""
    return theta1_with_error(a)[0]


def eta1(a: float) -> float:
    """``-Im psi(1 - i a) = (pi a coth(pi a) - 1) / (2 a)``, with eta1(0) = 0."""
    a = float(a)
    x = math.pi * a
    if abs(x) < 0.1:
        x2 = x * x
        # (x coth x - 1)/x through x^9
        s = x * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 * (
            -1.0 / 4725.0 + x2 * 2.0 / 93555.0))))
        return 0.5 * math.pi * s
    return (x / math.tanh(x) - 1.0) / (2.0 * a)


def digamma_one_minus_ia(a: float) -> complex:
    """``psi(1 - i a) = theta1(a) - i eta1(a)``."""
    return complex(theta1(a), -eta1(a))
