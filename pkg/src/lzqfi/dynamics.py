"""Numerical propagation of driven two-level systems.

Hamiltonians are written ``H(t) = (hx sx + hy sy + hz sz) / 2`` with the
basis ``|0> = (1, 0)``, ``|1> = (0, 1)`` and hbar = 1.  Coefficients come from
a small closed family (:class:`Coefficient`) so the compiled integrator can
evaluate them without calling back into Python.

Pulses are instantaneous rotations ``exp(-i (l + 1/2) pi n.s)`` with
``n = (cos phi, sin phi, 0)``.  Samples taken exactly at a pulse time see the
post-pulse state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from . import _dopri

__all__ = [
    "Coefficient",
    "PulseEvent",
    "HamiltonianSchedule",
    "TwoLevelState",
    "EstimationProblem",
    "Trajectory",
    "IntegrationError",
    "StepSizeUnderflow",
    "PulseOutsideSpan",
    "TARGETS",
    "lz_schedule",
    "periodic_schedule",
    "rwa_schedule",
    "delta_problem",
    "v_problem",
    "omega_problem",
    "rwa_omega_problem",
    "pulse_unitary",
    "apply_pulse",
    "generator_eigen_spread",
    "propagate",
    "propagate_with_derivative",
    "propagate_unitary",
]

TARGETS = ("delta", "v", "omega")
TOL_MIN, TOL_MAX = 1e-13, 1e-6
DEFAULT_TOL = 1e-10
DEFAULT_GRID = 400
MAX_STEPS = 50_000_000
# local tolerance is tightened by the accumulated phase over this many radians
_PHASE_BUDGET = 20.0


class IntegrationError(ArithmeticError):
    """The integrator could not complete the requested span."""


class StepSizeUnderflow(IntegrationError):
    pass


class PulseOutsideSpan(ValueError):
    pass


# --------------------------------------------------------------------------
# coefficient functions

_NCOL = 6  # const, slope, amp, freq, phase, tamp


@dataclass(frozen=True)
class Coefficient:
    """A real function of time ``sum_k c + s t + (a + b t) cos(w t + p)``.

    Closed under addition, negation and scaling.  ``Coefficient.constant(3)``
    and friends build the single-term pieces.
    """

    terms: tuple[tuple[float, float, float, float, float, float], ...] = ()

    @classmethod
    def constant(cls, c: float) -> "Coefficient":
        return cls(((float(c), 0.0, 0.0, 0.0, 0.0, 0.0),))

    @classmethod
    def linear(cls, slope: float, offset: float = 0.0) -> "Coefficient":
        return cls(((float(offset), float(slope), 0.0, 0.0, 0.0, 0.0),))

    @classmethod
    def cosine(cls, amp: float, freq: float, phase: float = 0.0,
               t_amp: float = 0.0) -> "Coefficient":
        """``(amp + t_amp t) cos(freq t + phase)``."""
        return cls(((0.0, 0.0, float(amp), float(freq), float(phase), float(t_amp)),))

    @classmethod
    def sine(cls, amp: float, freq: float, phase: float = 0.0,
             t_amp: float = 0.0) -> "Coefficient":
        return cls.cosine(amp, freq, phase - 0.5 * math.pi, t_amp)

    @classmethod
    def of(cls, value) -> "Coefficient":
        if isinstance(value, Coefficient):
            return value
        if isinstance(value, (int, float, np.floating, np.integer)):
            return cls.constant(float(value)) if value != 0 else cls()
        raise TypeError(f"cannot build a Coefficient from {type(value).__name__}")

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c, s, a, w, p, b in self.terms:
            out = out + c + s * t
            if a != 0.0 or b != 0.0:
                out = out + (a + b * t) * np.cos(w * t + p)
        return out if out.ndim else float(out)

    def __add__(self, other):
        other = Coefficient.of(other)
        return Coefficient(self.terms + other.terms)._pruned()

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-Coefficient.of(other))

    def __rsub__(self, other):
        return Coefficient.of(other) - self

    def __mul__(self, k):
        if not isinstance(k, (int, float, np.floating, np.integer)):
            return NotImplemented
        k = float(k)
        return Coefficient(tuple((c * k, s * k, a * k, w, p, b * k)
                                 for c, s, a, w, p, b in self.terms))._pruned()

    __rmul__ = __mul__

    def _pruned(self):
        # merge polynomial parts, drop empty oscillating parts
        c0 = sum(r[0] for r in self.terms)
        s0 = sum(r[1] for r in self.terms)
        rest = tuple((0.0, 0.0, a, w, p, b) for _c, _s, a, w, p, b in self.terms
                     if a != 0.0 or b != 0.0)
        head = ((c0, s0, 0.0, 0.0, 0.0, 0.0),) if (c0 != 0.0 or s0 != 0.0) else ()
        return Coefficient(head + rest)

    @property
    def is_zero(self) -> bool:
        return len(self._pruned().terms) == 0

    @property
    def max_frequency(self) -> float:
        return max((abs(r[3]) for r in self.terms if r[2] or r[5]), default=0.0)

    def table(self) -> np.ndarray:
        if not self.terms:
            return np.zeros((0, _NCOL))
        return np.array(self.terms, dtype=float).reshape(-1, _NCOL)


def _stack_tables(cx, cy, cz) -> np.ndarray:
    tabs = [cx.table(), cy.table(), cz.table()]
    m = max(1, max(t.shape[0] for t in tabs))
    out = np.zeros((3, m, _NCOL))
    for i, t in enumerate(tabs):
        out[i, : t.shape[0]] = t
    return out


# --------------------------------------------------------------------------
# states, pulses, schedules

@dataclass(frozen=True)
class TwoLevelState:
    """Amplitudes ``c0 |0> + c1 |1>``."""

    c0: complex
    c1: complex

    def __post_init__(self):
        object.__setattr__(self, "c0", complex(self.c0))
        object.__setattr__(self, "c1", complex(self.c1))

    def __array__(self, dtype=None, copy=None):
        return np.array([self.c0, self.c1], dtype=dtype or complex)

    @classmethod
    def from_array(cls, a) -> "TwoLevelState":
        a = np.asarray(a, dtype=complex).reshape(2)
        return cls(a[0], a[1])

    @classmethod
    def ket0(cls):
        return cls(1.0, 0.0)

    @classmethod
    def ket1(cls):
        return cls(0.0, 1.0)

    @classmethod
    def plus_x(cls):
        r = 1.0 / math.sqrt(2.0)
        return cls(r, r)

    @classmethod
    def minus_x(cls):
        r = 1.0 / math.sqrt(2.0)
        return cls(r, -r)

    @classmethod
    def superposition(cls, alpha: float, beta: float = 0.0) -> "TwoLevelState":
        """``cos(alpha/2) |0> + exp(i beta) sin(alpha/2) |1>``."""
        return cls(math.cos(0.5 * alpha),
                   complex(math.cos(beta), math.sin(beta)) * math.sin(0.5 * alpha))

    @property
    def norm(self) -> float:
        return math.hypot(abs(self.c0), abs(self.c1))

    @property
    def probabilities(self) -> tuple[float, float]:
        return abs(self.c0) ** 2, abs(self.c1) ** 2

    def normalized(self) -> "TwoLevelState":
        n = self.norm
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return TwoLevelState(self.c0 / n, self.c1 / n)

    def overlap(self, other) -> complex:
        """``<self|other>``."""
        return complex(np.vdot(np.asarray(self), np.asarray(other)))


@dataclass(frozen=True)
class PulseEvent:
    """Instantaneous rotation by ``(2 l + 1) pi`` about the in-plane axis ``phi``."""

    time: float
    axis_angle: float = 0.0
    winding: int = 0

    def __post_init__(self):
        if not math.isfinite(self.time) or not math.isfinite(self.axis_angle):
            raise ValueError("pulse time and axis angle must be finite")
        object.__setattr__(self, "winding", int(self.winding))


def pulse_unitary(pulse: PulseEvent) -> np.ndarray:
    # exp(-i (l + 1/2) pi n.s) = -i (-1)^l n.s, exactly
    sign = -1.0 if pulse.winding % 2 else 1.0
    e = complex(math.cos(pulse.axis_angle), math.sin(pulse.axis_angle))
    return -1j * sign * np.array([[0.0, e.conjugate()], [e, 0.0]], dtype=complex)


def apply_pulse(state, pulse: PulseEvent):
    """Apply ``pulse`` to a :class:`TwoLevelState` (or a raw amplitude array)."""
    u = pulse_unitary(pulse)
    if isinstance(state, TwoLevelState):
        return TwoLevelState.from_array(u @ np.asarray(state))
    return u @ np.asarray(state, dtype=complex)


@dataclass(frozen=True)
class HamiltonianSchedule:
    """``H(t) = (hx sx + hy sy + hz sz)/2`` plus time-ordered pulses."""

    hx: Coefficient = field(default_factory=Coefficient)
    hy: Coefficient = field(default_factory=Coefficient)
    hz: Coefficient = field(default_factory=Coefficient)
    pulses: tuple[PulseEvent, ...] = ()

    def __post_init__(self):
        for name in ("hx", "hy", "hz"):
            object.__setattr__(self, name, Coefficient.of(getattr(self, name)))
        pulses = tuple(self.pulses)
        for a, b in zip(pulses, pulses[1:]):
            if not b.time > a.time:
                raise ValueError("pulse times must be strictly increasing")
        object.__setattr__(self, "pulses", pulses)

    def __add__(self, other: "HamiltonianSchedule") -> "HamiltonianSchedule":
        pulses = tuple(sorted(self.pulses + other.pulses, key=lambda p: p.time))
        return HamiltonianSchedule(self.hx + other.hx, self.hy + other.hy,
                                   self.hz + other.hz, pulses)

    def without_pulses(self) -> "HamiltonianSchedule":
        return HamiltonianSchedule(self.hx, self.hy, self.hz)

    def with_pulses(self, pulses: Sequence[PulseEvent]) -> "HamiltonianSchedule":
        return HamiltonianSchedule(self.hx, self.hy, self.hz, tuple(pulses))

    def matrix(self, t: float) -> np.ndarray:
        return _pauli_matrix(self.hx(t), self.hy(t), self.hz(t))

    def table(self) -> np.ndarray:
        return _stack_tables(self.hx, self.hy, self.hz)


def _pauli_matrix(x, y, z) -> np.ndarray:
    return 0.5 * np.array([[z, x - 1j * y], [x + 1j * y, -z]], dtype=complex)


def lz_schedule(v: float, delta: float) -> HamiltonianSchedule:
    """``H = v t/2 sz + delta/2 sx``."""
    return HamiltonianSchedule(hx=delta, hz=Coefficient.linear(v))


def periodic_schedule(eps0: float, amp: float, omega: float,
                      delta: float) -> HamiltonianSchedule:
    """``H = (eps0 + A cos(omega t))/2 sz + delta/2 sx``."""
    return HamiltonianSchedule(hx=delta,
                               hz=Coefficient.constant(eps0) + Coefficient.cosine(amp, omega))


def rwa_schedule(amp: float, delta: float, omega: float) -> HamiltonianSchedule:
    """Rotating-frame Rabi Hamiltonian ``-(A/4)[cos(dt) sx - sin(dt) sy]``, d = omega - delta."""
    d = omega - delta
    return HamiltonianSchedule(hx=Coefficient.cosine(-0.5 * amp, d),
                               hy=Coefficient.sine(0.5 * amp, d))


# --------------------------------------------------------------------------
# estimation problems

@dataclass(frozen=True)
class EstimationProblem:
    """Estimated parameter and the Pauli coefficients of ``dH/dg``."""

    target: str
    true_value: float
    gx: Coefficient = field(default_factory=Coefficient)
    gy: Coefficient = field(default_factory=Coefficient)
    gz: Coefficient = field(default_factory=Coefficient)

    def __post_init__(self):
        target = str(self.target).lower()
        if target not in TARGETS:
            raise ValueError(f"target must be one of {TARGETS}, got {self.target!r}")
        object.__setattr__(self, "target", target)
        for name in ("gx", "gy", "gz"):
            object.__setattr__(self, name, Coefficient.of(getattr(self, name)))

    def dgH(self, t: float) -> np.ndarray:
        return _pauli_matrix(self.gx(t), self.gy(t), self.gz(t))

    def spread(self, t):
        """``mu_max - mu_min`` of ``dH/dg``; vectorized over ``t``."""
        return np.sqrt(self.gx(t) ** 2 + self.gy(t) ** 2 + self.gz(t) ** 2)

    @property
    def is_trivial(self) -> bool:
        return self.gx.is_zero and self.gy.is_zero and self.gz.is_zero

    def table(self) -> np.ndarray:
        return _stack_tables(self.gx, self.gy, self.gz)

    def crossing_times(self, t0: float, t1: float) -> np.ndarray:
        """Times in ``(t0, t1)`` where the two eigenvalues of ``dH/dg`` meet."""
        if self.is_trivial or t1 <= t0:
            return np.empty(0)
        comps = [c for c in (self.gx, self.gy, self.gz) if not c.is_zero]
        w = max(c.max_frequency for c in comps)
        n = int(min(2_000_000, max(2001, 64 * w * (t1 - t0) / (2 * math.pi))))
        grid = np.linspace(t0, t1, n)
        scale = float(np.max(self.spread(grid))) or 1.0
        found = []
        for comp in comps:
            vals = comp(grid)
            idx = np.nonzero(np.signbit(vals[:-1]) != np.signbit(vals[1:]))[0]
            for i in idx:
                if vals[i] == 0.0:
                    r = grid[i]
                elif vals[i + 1] == 0.0:
                    r = grid[i + 1]
                else:
                    r = brentq(comp, grid[i], grid[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps)
                if t0 < r < t1 and self.spread(r) <= 1e-9 * scale:
                    found.append(r)
        found = np.unique(np.round(np.array(found, dtype=float), 12))
        return found


def generator_eigen_spread(problem: EstimationProblem, t: float) -> float:
    return float(problem.spread(t))


def delta_problem(delta: float) -> EstimationProblem:
    return EstimationProblem("delta", delta, gx=1.0)


def v_problem(v: float) -> EstimationProblem:
    return EstimationProblem("v", v, gz=Coefficient.linear(1.0))


def omega_problem(amp: float, omega: float) -> EstimationProblem:
    # d/dw [A cos(w t)] = -A t sin(w t)
    return EstimationProblem("omega", omega, gz=Coefficient.sine(0.0, omega, t_amp=-amp))


def rwa_omega_problem(amp: float, delta: float, omega: float) -> EstimationProblem:
    """``d/d omega`` of :func:`rwa_schedule`."""
    d = omega - delta
    return EstimationProblem("omega", omega,
                             gx=Coefficient.sine(0.0, d, t_amp=0.5 * amp),
                             gy=Coefficient.cosine(0.0, d, t_amp=0.5 * amp))


# --------------------------------------------------------------------------
# propagation

@dataclass(frozen=True)
class Trajectory:
    """Sampled solution.

    ``states`` and ``derivative_states`` are complex arrays of shape (n, 2).
    """

    times: np.ndarray
    states: np.ndarray
    derivative_states: np.ndarray | None = None
    max_norm_drift: float = 0.0
    steps: int = 0
    rejected_steps: int = 0
    local_tol: float = float("nan")

    def state(self, i: int) -> TwoLevelState:
        return TwoLevelState.from_array(self.states[i])

    @property
    def final(self) -> TwoLevelState:
        return self.state(-1)

    @property
    def final_derivative(self) -> np.ndarray | None:
        if self.derivative_states is None:
            return None
        return self.derivative_states[-1].copy()

    @property
    def probabilities(self) -> tuple[np.ndarray, np.ndarray]:
        p = np.abs(self.states) ** 2
        return p[:, 0], p[:, 1]


def _check_span_tol(span, tol):
    t0, t1 = (float(x) for x in span)
    if not (math.isfinite(t0) and math.isfinite(t1)):
        raise ValueError("span must be finite")
    if not t0 < t1:
        raise ValueError(f"span must satisfy t_start < t_end, got [{t0}, {t1}]")
    if not TOL_MIN <= tol <= TOL_MAX:
        raise ValueError(f"tol must lie in [{TOL_MIN:g}, {TOL_MAX:g}], got {tol:g}")
    return t0, t1


def _output_times(grid, t0, t1) -> np.ndarray:
    if grid is None:
        grid = DEFAULT_GRID
    if np.isscalar(grid):
        n = int(grid)
        if n < 2:
            raise ValueError("grid needs at least 2 points")
        times = np.linspace(t0, t1, n)
        times[-1] = t1
        return times
    times = np.asarray(grid, dtype=float).ravel()
    if times.size == 0:
        raise ValueError("grid is empty")
    if np.any(np.diff(times) < 0) or times[0] < t0 or times[-1] > t1:
        raise ValueError("grid times must be sorted and lie inside the span")
    return times


def _accumulated_phase(schedule: HamiltonianSchedule, t0: float, t1: float) -> float:
    w = max(schedule.hx.max_frequency, schedule.hy.max_frequency,
            schedule.hz.max_frequency)
    n = int(min(1_000_001, max(4097, 16 * w * (t1 - t0) / (2 * math.pi))))
    t = np.linspace(t0, t1, n)
    mag = np.sqrt(schedule.hx(t) ** 2 + schedule.hy(t) ** 2 + schedule.hz(t) ** 2)
    return float(np.trapezoid(mag, t))


def local_tolerance(schedule: HamiltonianSchedule, span, tol: float) -> float:
    """Per-step tolerance that keeps the accumulated norm drift below ``tol``.

    Global error of an explicit RK pair grows roughly with the number of
    radians swept; scaling by ``Phi/20`` keeps the final drift under ``10 tol``.
    """
    phase = _accumulated_phase(schedule, *span)
    return max(tol / max(1.0, phase / _PHASE_BUDGET), 1e-16)


def _run(schedule, rows0, nstate, gtable, span, tol, times):
    t0, t1 = span
    for p in schedule.pulses:
        if not t0 <= p.time <= t1:
            raise PulseOutsideSpan(
                f"pulse at t={p.time:g} lies outside the span [{t0:g}, {t1:g}]")
    has_deriv = gtable is not None
    htable = schedule.table()
    if gtable is None:
        gtable = np.zeros((3, 1, _NCOL))
    tol_local = local_tolerance(schedule, (t0, t1), tol)

    y = np.ascontiguousarray(rows0, dtype=np.complex128)
    out = np.zeros((times.size, y.shape[0], 2), dtype=np.complex128)
    bounds = [p.time for p in schedule.pulses] + [t1]
    start = t0
    j = 0
    h = 0.0
    n_acc = n_rej = 0
    drift = 0.0
    for k, stop in enumerate(bounds):
        last = k == len(bounds) - 1
        j_stop = times.size if last else int(np.searchsorted(times, stop, side="left"))
        y, h, a, r, d, status = _dopri.integrate_segment(
            y, start, stop, nstate, has_deriv, htable, gtable, tol_local, h,
            times, out, j, j_stop, MAX_STEPS)
        n_acc += a
        n_rej += r
        drift = max(drift, d)
        if status == _dopri.STEP_UNDERFLOW:
            raise StepSizeUnderflow(
                f"step size underflow near t={start:g} (segment ending {stop:g})")
        if status == _dopri.TOO_MANY_STEPS:
            raise IntegrationError(
                f"exceeded {MAX_STEPS} steps in segment [{start:g}, {stop:g}]")
        if not last:
            u = pulse_unitary(schedule.pulses[k])
            y = y @ u.T  # every row is a column vector acted on by u
            h = 0.0
        j = j_stop
        start = stop
    return out, drift, n_acc, n_rej, tol_local


def _state_rows(psi0) -> np.ndarray:
    psi = np.asarray(psi0, dtype=complex).reshape(2)
    if abs(np.linalg.norm(psi) - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    return psi


def propagate(schedule: HamiltonianSchedule, psi0, span, tol: float = DEFAULT_TOL,
              grid=DEFAULT_GRID) -> Trajectory:
    """Integrate ``i d|psi>/dt = H(t)|psi>`` over ``span``.

    ``grid`` is a number of uniformly spaced samples or an explicit sorted
    array of sample times inside the span.
    """
    t0, t1 = _check_span_tol(span, tol)
    times = _output_times(grid, t0, t1)
    psi = _state_rows(psi0)
    out, drift, n_acc, n_rej, tl = _run(schedule, psi[None, :], 1, None,
                                        (t0, t1), tol, times)
    states = out[:, 0, :]
    drift = max(drift, float(np.max(np.abs(np.linalg.norm(states, axis=1) - 1.0))))
    return Trajectory(times, states, None, drift, n_acc, n_rej, tl)


def propagate_with_derivative(schedule: HamiltonianSchedule, problem: EstimationProblem,
                              psi0, span, tol: float = DEFAULT_TOL,
                              grid=DEFAULT_GRID) -> Trajectory:
    """Co-integrate ``|psi>`` and ``d|psi>/dg`` (zero at the start)."""
    t0, t1 = _check_span_tol(span, tol)
    times = _output_times(grid, t0, t1)
    psi = _state_rows(psi0)
    rows = np.zeros((2, 2), dtype=complex)
    rows[0] = psi
    out, drift, n_acc, n_rej, tl = _run(schedule, rows, 1, problem.table(),
                                        (t0, t1), tol, times)
    states = out[:, 0, :]
    drift = max(drift, float(np.max(np.abs(np.linalg.norm(states, axis=1) - 1.0))))
    return Trajectory(times, states, out[:, 1, :].copy(), drift, n_acc, n_rej, tl)


def propagate_unitary(schedule: HamiltonianSchedule, problem: EstimationProblem | None,
                      span, tol: float = DEFAULT_TOL):
    """Return ``(U, dU/dg, diagnostics)`` at the end of ``span``.

    ``dU`` is ``None`` when ``problem`` is ``None``.
    """
    t0, t1 = _check_span_tol(span, tol)
    times = np.array([t1])
    has = problem is not None
    rows = np.zeros((4 if has else 2, 2), dtype=complex)
    rows[0, 0] = rows[1, 1] = 1.0
    out, drift, n_acc, n_rej, tl = _run(schedule, rows, 2,
                                        problem.table() if has else None,
                                        (t0, t1), tol, times)
    y = out[0]
    u = y[:2].T.copy()
    du = y[2:].T.copy() if has else None
    return u, du, {"max_norm_drift": drift, "steps": n_acc, "rejected_steps": n_rej,
                   "local_tol": tl}
