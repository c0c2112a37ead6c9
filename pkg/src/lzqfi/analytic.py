"""Closed-form Landau-Zener and driven-qubit results.

Conventions: the sweep starts at ``-T0`` in ``|1>`` and ends at ``T``;
``P1 = exp(-2 pi gamma)`` is the probability to remain in ``|1>`` and
``gamma = delta^2 / (4 v)``.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .dynamics import TwoLevelState
from .fisher import MeasurementBasis
from .specfun import log_gamma_complex, theta1

__all__ = [
    "AsymptoticValidityWarning",
    "LZParams",
    "DriveParams",
    "AsymptoticFinalState",
    "DeltaQFITerms",
    "SCENARIOS",
    "lz_probabilities",
    "relative_phase",
    "asymptotic_final_state",
    "asymptotic_final_state_superposition",
    "cfi_closed_form",
    "qfi_leading",
    "qfi_delta_improved",
    "qfi_delta_improved_terms",
    "sgn",
    "qfi_controlled",
    "omega_phase_derivative",
    "qfi_controlled_omega",
    "qfi_controlled_omega_at",
    "rwa_max_qfi",
    "optimal_measurement_vectors",
]

VALIDITY_RATIO = 20.0
SCENARIOS = ("no-control", "controlled-delta", "controlled-v", "controlled-omega")


class AsymptoticValidityWarning(UserWarning):
    """Times are too short for the asymptotic formulas to be trusted."""


def _target(target: str) -> str:
    t = str(target).lower()
    if t not in ("delta", "v", "omega"):
        raise ValueError(f"unknown target {target!r}")
    return t


@dataclass(frozen=True)
class LZParams:
    v: float
    delta: float
    t0: float
    t_end: float

    def __post_init__(self):
        for name in ("v", "delta", "t0", "t_end"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.v <= 0:
            raise ValueError("v must be positive")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")
        if self.t0 <= 0 or self.t_end <= 0:
            raise ValueError("t0 and t_end must be positive")

    @property
    def gamma(self) -> float:
        return self.delta ** 2 / (4.0 * self.v)

    @property
    def tau(self) -> float:
        return max(self.delta / (2.0 * self.v), 1.0 / math.sqrt(self.v))

    @property
    def R(self) -> float:
        return math.sqrt(self.v) * self.t_end

    @property
    def R0(self) -> float:
        return math.sqrt(self.v) * self.t0

    @property
    def nu(self) -> complex:
        return -1j * self.gamma

    def validity(self) -> dict:
        """Ratios ``t0/tau``, ``t_end/tau`` and whether both reach 20."""
        r0, r1 = self.t0 / self.tau, self.t_end / self.tau
        return {"t0_over_tau": r0, "t_end_over_tau": r1,
                "valid": r0 >= VALIDITY_RATIO and r1 >= VALIDITY_RATIO}

    def warn_if_invalid(self, stacklevel=3):
        info = self.validity()
        if not info["valid"]:
            warnings.warn(
                f"asymptotic formulas need t0/tau and T/tau >= {VALIDITY_RATIO:g}; "
                f"got {info['t0_over_tau']:.3g} and {info['t_end_over_tau']:.3g}",
                AsymptoticValidityWarning, stacklevel=stacklevel)


@dataclass(frozen=True)
class DriveParams:
    """Periodic sweep ``eps0 + A cos(omega t)``, measured at ``(N + frac) pi / omega_c``."""

    eps0: float
    amp: float
    omega: float
    delta: float
    cycles: int
    frac: float = 0.0
    omega_c: float | None = None

    def __post_init__(self):
        if self.omega_c is None:
            object.__setattr__(self, "omega_c", self.omega)
        for name in ("eps0", "amp", "omega", "delta", "frac", "omega_c"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.amp <= 0 or self.omega <= 0 or self.omega_c <= 0:
            raise ValueError("amp, omega and omega_c must be positive")
        if self.delta < 0:
            raise ValueError("delta must be non-negative")
        if int(self.cycles) != self.cycles or self.cycles < 1:
            raise ValueError("cycles must be an integer >= 1")
        object.__setattr__(self, "cycles", int(self.cycles))
        if not 0.0 <= self.frac < 1.0:
            raise ValueError("frac must lie in [0, 1)")

    @property
    def T(self) -> float:
        return (self.cycles + self.frac) * math.pi / self.omega_c

    def pulse_times(self) -> np.ndarray:
        return np.arange(1, self.cycles + 1) * math.pi / self.omega_c


@dataclass(frozen=True)
class AsymptoticFinalState:
    c0: complex
    c1: complex
    rel_phase: float
    phi: float
    p0: float
    p1: float
    phi0: float = 0.0

    @property
    def state(self) -> TwoLevelState:
        return TwoLevelState(self.c0, self.c1)


def lz_probabilities(params: LZParams) -> tuple[float, float]:
    """``(P0, P1)`` with ``P1 = exp(-2 pi gamma)``."""
    x = 2.0 * math.pi * params.gamma
    return -math.expm1(-x), math.exp(-x)


def _phi(v: float, t: float, gamma: float) -> float:
    return (v * t * t + math.pi) / 4.0 + 0.5 * gamma * math.log(v * t * t)


def relative_phase(params: LZParams) -> float:
    """``v T^2/2 + gamma ln(v T^2) + arg Gamma(1 - i gamma) + pi/4``."""
    g = params.gamma
    arg = log_gamma_complex(1.0 - 1j * g).argument
    return (params.v * params.t_end ** 2 / 2.0 + g * math.log(params.v * params.t_end ** 2)
            + arg + math.pi / 4.0)


def _ground_start_amplitudes(params: LZParams):
    g = params.gamma
    phi = _phi(params.v, params.t_end, g)
    phi0 = _phi(params.v, params.t0, g)
    p0, p1 = lz_probabilities(params)
    if g == 0.0:
        c0 = 0j
    else:
        arg = log_gamma_complex(1.0 - 1j * g).argument
        c0 = math.sqrt(p0) * cmath.exp(-1j * (arg + phi + phi0 - math.pi / 4.0))
    c1 = math.sqrt(p1) * cmath.exp(1j * (phi - phi0))
    return c0, c1, phi, phi0, p0, p1


def asymptotic_final_state(params: LZParams, warn: bool = True) -> AsymptoticFinalState:
    """Amplitudes at ``T`` after starting in ``|1>`` at ``-T0``."""
    if warn:
        params.warn_if_invalid()
    c0, c1, phi, phi0, p0, p1 = _ground_start_amplitudes(params)
    return AsymptoticFinalState(c0, c1, relative_phase(params), phi, p0, p1, phi0)


def asymptotic_final_state_superposition(params: LZParams, alpha: float, beta: float,
                                         warn: bool = True) -> AsymptoticFinalState:
    """Start from ``cos(alpha/2)|0> + e^{i beta} sin(alpha/2)|1>``.

    The evolution is in SU(2), so the ``|0>`` start ends in ``(c1*, -c0*)``
    and the result is the linear combination of the two columns.
    """
    if warn:
        params.warn_if_invalid()
    c0, c1, phi, phi0, _p0, _p1 = _ground_start_amplitudes(params)
    a, b = math.cos(0.5 * alpha), cmath.exp(1j * beta) * math.sin(0.5 * alpha)
    s0 = a * c1.conjugate() + b * c0
    s1 = -a * c0.conjugate() + b * c1
    q0, q1 = abs(s0) ** 2, abs(s1) ** 2
    rel = cmath.phase(s1) - cmath.phase(s0) if q0 > 0 and q1 > 0 else float("nan")
    return AsymptoticFinalState(s0, s1, rel, phi, q0, q1, phi0)


def cfi_closed_form(target: str, params: LZParams) -> float:
    """``sigma_z``-measurement CFI of the LZ probabilities.

    At ``delta = 0`` the delta-CFI takes its limit ``2 pi / v``.
    """
    t = _target(target)
    g = params.gamma
    x = 2.0 * math.pi * g
    if t == "delta":
        if params.delta == 0.0:
            return 2.0 * math.pi / params.v
        if x > 700.0:
            return 0.0
        return math.pi ** 2 * params.delta ** 2 / (params.v ** 2 * math.expm1(x))
    if t == "v":
        if g == 0.0 or x > 700.0:
            return 0.0
        return 4.0 * math.pi ** 2 * g * g / (math.expm1(x) * params.v ** 2)
    raise ValueError("closed-form CFI exists for targets 'delta' and 'v' only")


def qfi_leading(target: str, params: LZParams) -> float:
    t = _target(target)
    p0, p1 = lz_probabilities(params)
    if t == "delta":
        ln = math.log(params.v * params.t_end ** 2)
        return (params.delta / params.v) ** 2 * p0 * p1 * ln * ln
    if t == "v":
        return p0 * p1 * params.t_end ** 4
    raise ValueError("leading QFI exists for targets 'delta' and 'v' only")


@dataclass(frozen=True)
class DeltaQFITerms:
    leading: float
    cross: float
    remainder: float
    theta1: float = field(default=float("nan"))

    @property
    def total(self) -> float:
        return self.leading + self.cross + self.remainder


def qfi_delta_improved_terms(params: LZParams) -> DeltaQFITerms:
    """Three-term asymptotic delta-QFI, split into its pieces.

    With ``L = ln(v T^2)`` and ``k = delta^2/v^2``:
    leading ``k P0 P1 L^2``, cross ``-2 k P0 P1 theta1 L`` and remainder
    ``k (P1/P0) [pi^2 + theta1^2 (1 - P1)^2]``.
    """
    p0, p1 = lz_probabilities(params)
    k = (params.delta / params.v) ** 2
    if k == 0.0:
        return DeltaQFITerms(0.0, 0.0, 0.0, theta1(params.gamma))
    th = theta1(params.gamma)
    ln = math.log(params.v * params.t_end ** 2)
    lead = k * p0 * p1 * ln * ln
    cross = -2.0 * k * p0 * p1 * th * ln
    rem = k * (p1 / p0) * (math.pi ** 2 + th * th * p0 * p0)
    return DeltaQFITerms(lead, cross, rem, th)


def qfi_delta_improved(params: LZParams) -> float:
    return qfi_delta_improved_terms(params).total


def sgn(t: float) -> float:
    """Sign with ``sgn(0) = -1``."""
    return 1.0 if t > 0 else -1.0


def qfi_controlled(target: str, t: float, T: float) -> float:
    """Saturated QFI under the delta or v control plans started at ``-T``."""
    tg = _target(target)
    if tg == "delta":
        return (t + T) ** 2
    if tg == "v":
        return ((t * t + sgn(t) * T * T) / 2.0) ** 2
    raise ValueError("use qfi_controlled_omega for the omega target")


def _phase_and_derivative(amp, omega, a, b):
    # int_a^b A cos(w t) dt and its w-derivative
    sa, sb = math.sin(omega * a), math.sin(omega * b)
    ph = amp / omega * (sb - sa)
    dph = (-amp / omega ** 2 * (sb - sa)
           + amp / omega * (b * math.cos(omega * b) - a * math.cos(omega * a)))
    return ph, dph


def _pulses_before(d: DriveParams, t: float) -> int:
    # pulses at n pi / omega_c, n = 1..N, count those at or before t
    n = math.floor(t * d.omega_c / math.pi + 1e-12)
    return max(0, min(d.cycles, n))


def omega_phase_derivative(d: DriveParams, t: float, with_olch: bool = True,
                           beta: float = 0.0) -> tuple[float, float]:
    """Relative phase of ``|1>`` over ``|0>`` at ``t`` and its omega-derivative.

    Follows the state ``(|0> + e^{i beta}|1>)/sqrt 2`` under ``A cos(omega t)/2 sz``
    with (or without) the swaps at ``n pi / omega_c``.
    """
    if not with_olch:
        ph, dph = _phase_and_derivative(d.amp, d.omega, 0.0, t)
        return beta + ph, dph
    n_done = _pulses_before(d, t)
    theta, dtheta = beta, 0.0
    for n in range(n_done):
        a, b = n * math.pi / d.omega_c, (n + 1) * math.pi / d.omega_c
        ph, dph = _phase_and_derivative(d.amp, d.omega, a, b)
        theta, dtheta = -(theta + ph), -(dtheta + dph)
    ph, dph = _phase_and_derivative(d.amp, d.omega, n_done * math.pi / d.omega_c, t)
    return theta + ph, dtheta + dph


def qfi_controlled_omega(d: DriveParams, with_olch: bool = True) -> float:
    """QFI at ``T = (N + frac) pi / omega_c`` under the periodic-drive controls."""
    return qfi_controlled_omega_at(d, d.T, with_olch)


def qfi_controlled_omega_at(d: DriveParams, t: float, with_olch: bool = True) -> float:
    return omega_phase_derivative(d, t, with_olch)[1] ** 2


def rwa_max_qfi(amp: float, delta: float, omega: float, T: float) -> float:
    """Maximal omega-QFI of the rotating-frame Rabi problem at ``T``."""
    s2 = amp * amp + 4.0 * (delta - omega) ** 2
    s = math.sqrt(s2)
    a2 = amp * amp
    return (a2 * T * T / s2 - 4.0 * a2 * T * math.sin(T * s / 2.0) / s2 ** 1.5
            + 8.0 * a2 * (1.0 - math.cos(T * s / 2.0)) / (s2 * s2))


def optimal_measurement_vectors(scenario: str, t: float, params, beta: float = 0.0,
                                *, v_c: float | None = None, l: int = 0,
                                with_olch: bool = True) -> MeasurementBasis:
    """Closed-form optimal projective basis ``(|a> +- i e^{i theta}|b>)/sqrt 2``.

    ``params`` is an :class:`LZParams` (runs start at ``-t_end`` for the
    controlled plans) or a :class:`DriveParams` for ``controlled-omega``.
    The winding ``l`` only adds a common phase to both amplitudes and so
    does not enter the basis.
    """
    del l
    if scenario == "no-control":
        if t <= 0:
            raise ValueError("the uncontrolled closed-form basis needs t > 0")
        p = LZParams(params.v, params.delta, params.t0, t)
        return MeasurementBasis.phase_pair(relative_phase(p))
    if scenario == "controlled-delta":
        T = params.t_end
        return MeasurementBasis.phase_pair(params.delta * (t + T) + beta, along_x=True)
    if scenario == "controlled-v":
        T, v = params.t_end, params.v
        vc = v if v_c is None else v_c
        # the pulse at t = 0 is already applied when sampling at t = 0
        if t < 0:
            theta = v * (t * t - T * T) / 2.0 + beta
        else:
            theta = v * (t * t + T * T) / 2.0 - beta - vc * T * T
        return MeasurementBasis.phase_pair(theta)
    if scenario == "controlled-omega":
        theta, _ = omega_phase_derivative(params, t, with_olch, beta)
        return MeasurementBasis.phase_pair(theta)
    raise ValueError(f"unknown scenario {scenario!r}; expected one of {SCENARIOS}")
