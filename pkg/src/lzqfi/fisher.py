"""Quantum and classical Fisher information for pure two-level states."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .dynamics import (
    DEFAULT_TOL,
    EstimationProblem,
    HamiltonianSchedule,
    Trajectory,
    TwoLevelState,
    delta_problem,
    lz_schedule,
    propagate_unitary,
    propagate_with_derivative,
    v_problem,
)

__all__ = [
    "MeasurementBasis",
    "FisherCurve",
    "qfi_pure",
    "cfi_projective",
    "cfi_projective_flagged",
    "sld_basis",
    "control_bound",
    "max_qfi_over_initial_states",
    "SymmetryReport",
    "symmetry_check",
    "fisher_curve",
]

_P_SMALL = 1e-12
_DP_SMALL = 1e-9
_SLD_DEGENERATE = 1e-12


def _vec(x) -> np.ndarray:
    return np.asarray(x, dtype=complex).reshape(2)


@dataclass(frozen=True)
class MeasurementBasis:
    """Orthonormal pair of projective outcomes.

    ``zero_information`` is set by :func:`sld_basis` when the SLD vanishes and
    the basis is an arbitrary choice.
    """

    plus: TwoLevelState
    minus: TwoLevelState
    zero_information: bool = False

    def __post_init__(self):
        p, m = _vec(self.plus), _vec(self.minus)
        if (abs(np.linalg.norm(p) - 1) > 1e-12 or abs(np.linalg.norm(m) - 1) > 1e-12
                or abs(np.vdot(p, m)) > 1e-12):
            raise ValueError("measurement basis must be orthonormal")

    @classmethod
    def from_vectors(cls, plus, minus, zero_information=False) -> "MeasurementBasis":
        return cls(TwoLevelState.from_array(plus), TwoLevelState.from_array(minus),
                   zero_information)

    @classmethod
    def sigma_z(cls) -> "MeasurementBasis":
        return cls(TwoLevelState.ket0(), TwoLevelState.ket1())

    @classmethod
    def sigma_x(cls) -> "MeasurementBasis":
        return cls(TwoLevelState.plus_x(), TwoLevelState.minus_x())

    @classmethod
    def bloch(cls, theta: float, phi: float) -> "MeasurementBasis":
        """Eigenbasis of ``n.s`` for the Bloch direction ``(theta, phi)``."""
        c, s = math.cos(0.5 * theta), math.sin(0.5 * theta)
        e = complex(math.cos(phi), math.sin(phi))
        return cls.from_vectors([c, e * s], [-s * e.conjugate(), c])

    @classmethod
    def phase_pair(cls, phase: float, along_x: bool = False) -> "MeasurementBasis":
        """``(|a> +- i e^{i phase} |b>)/sqrt 2`` with ``(a, b) = (0, 1)`` or ``(+x, -x)``."""
        r = 1.0 / math.sqrt(2.0)
        w = 1j * complex(math.cos(phase), math.sin(phase))
        if along_x:
            a, b = np.array([r, r]), np.array([r, -r])
        else:
            a, b = np.array([1.0, 0.0]), np.array([0.0, 1.0])
        return cls.from_vectors(r * (a + w * b), r * (a - w * b))

    def vectors(self) -> tuple[np.ndarray, np.ndarray]:
        return _vec(self.plus), _vec(self.minus)


def qfi_pure(psi, dpsi) -> float:
    """``4(<dpsi|dpsi> - |<psi|dpsi>|^2)``.

    Evaluated as ``4 |dpsi_perp|^2 / <psi|psi>`` with the component along
    ``psi`` projected out first.  For a normalized state this is the same
    number, but it avoids cancellation when ``dpsi`` carries a large
    global-phase part and ``psi`` is off unit norm by integrator noise.
    """
    psi, dpsi = _vec(psi), _vec(dpsi)
    nn = np.vdot(psi, psi).real
    if nn == 0.0:
        raise ValueError("psi must be non-zero")
    perp = dpsi - psi * (np.vdot(psi, dpsi) / nn)
    return float(4.0 * np.vdot(perp, perp).real / nn)


def cfi_projective_flagged(psi, dpsi, basis: MeasurementBasis) -> tuple[float, bool]:
    """CFI of a projective measurement together with a divergence flag.

    Outcomes with ``p < 1e-12`` and ``|dp| < 1e-9`` contribute nothing.  If
    ``p < 1e-12`` while ``|dp|`` is not negligible, the term is kept as
    computed (possibly ``inf``) and the flag is raised.
    """
    psi, dpsi = _vec(psi), _vec(dpsi)
    # probabilities are taken relative to <psi|psi> so integrator norm noise
    # affects CFI and QFI the same way
    nn = np.vdot(psi, psi).real
    total = 0.0
    divergent = False
    for e in basis.vectors():
        amp = np.vdot(e, psi)
        damp = np.vdot(e, dpsi)
        p = abs(amp) ** 2 / nn
        dp = 2.0 * (amp.conjugate() * damp).real / nn
        if p < _P_SMALL:
            if abs(dp) < _DP_SMALL:
                continue
            divergent = True
            total += math.inf if p == 0.0 else dp * dp / p
            continue
        total += dp * dp / p
    return total, divergent


def cfi_projective(psi, dpsi, basis: MeasurementBasis) -> float:
    """``sum_+- (d p)^2 / p`` for the outcomes of ``basis``."""
    return cfi_projective_flagged(psi, dpsi, basis)[0]


def sld_basis(psi, dpsi) -> MeasurementBasis:
    """Eigenbasis of ``L = 2(|dpsi><psi| + |psi><dpsi|)``."""
    psi, dpsi = _vec(psi), _vec(dpsi)
    sld = 2.0 * (np.outer(dpsi, psi.conj()) + np.outer(psi, dpsi.conj()))
    sv = np.linalg.svd(sld, compute_uv=False)
    w, vecs = np.linalg.eigh(sld)
    flag = bool(sv[0] == 0.0 or sv[-1] < _SLD_DEGENERATE * sv[0])
    # eigh orders eigenvalues ascending; report the positive branch first
    return MeasurementBasis.from_vectors(vecs[:, 1], vecs[:, 0], flag)


def control_bound(problem: EstimationProblem, span, grid) -> np.ndarray:
    """``[int_{t0}^{t} (mu_max - mu_min) dt']^2`` on ``grid``.

    ``grid`` is a sample count or an array of times; integration restarts at
    every eigenvalue crossing so the kink in the spread is never straddled.
    """
    t0, t1 = float(span[0]), float(span[1])
    times = (np.linspace(t0, t1, int(grid)) if np.isscalar(grid)
             else np.asarray(grid, dtype=float))
    if problem.is_trivial:
        return np.zeros_like(times)
    cross = problem.crossing_times(min(t0, times.min()), max(t1, times.max()))
    f = problem.spread

    def piece(a, b):
        if b <= a:
            return 0.0
        pts = [a] + [c for c in cross if a < c < b] + [b]
        s = 0.0
        for lo, hi in zip(pts, pts[1:]):
            val, _err = quad(f, lo, hi, epsabs=0.0, epsrel=1e-13, limit=500)
            s += val
        return s

    out = np.empty_like(times)
    acc = 0.0
    prev = t0
    for i, t in enumerate(times):
        acc += piece(prev, t)
        prev = t
        out[i] = acc * acc
    return out


def max_qfi_over_initial_states(schedule: HamiltonianSchedule,
                                problem: EstimationProblem, span,
                                tol: float = DEFAULT_TOL) -> float:
    """Maximal QFI at the end of ``span`` over all pure initial states.

    Uses the local generator ``h = i U^dag dU``; the optimum is the squared
    spread of its eigenvalues.
    """
    if problem.is_trivial:
        return 0.0
    u, du, _diag = propagate_unitary(schedule, problem, span, tol)
    h = 1j * u.conj().T @ du
    h = 0.5 * (h + h.conj().T)
    w = np.linalg.eigvalsh(h)
    return float((w[-1] - w[0]) ** 2)


@dataclass(frozen=True)
class SymmetryReport:
    target: str
    qfis: dict
    max_deviation: float


def symmetry_check(params, target: str = "v", tol: float = DEFAULT_TOL) -> SymmetryReport:
    """QFI at ``T`` for the four cases (+-v, start in |1> or |0>).

    ``params`` carries ``v``, ``delta``, ``t0`` and ``t_end`` (an
    :class:`~lzqfi.analytic.LZParams`).  Returns the largest pairwise
    relative deviation.
    """
    target = str(target).lower()
    if target not in ("v", "delta"):
        raise ValueError("symmetry check covers targets 'v' and 'delta'")
    v, delta = params.v, params.delta
    problem = v_problem(v) if target == "v" else delta_problem(delta)
    qfis = {}
    for sign in (1, -1):
        sched = lz_schedule(sign * v, delta)
        for label, psi in (("ket1", TwoLevelState.ket1()), ("ket0", TwoLevelState.ket0())):
            # for -v the sweep term is -v t/2 sz, whose v-derivative only flips sign
            tr = propagate_with_derivative(sched, problem, psi, (-params.t0, params.t_end),
                                           tol, grid=2)
            qfis[(sign, label)] = qfi_pure(tr.states[-1], tr.derivative_states[-1])
    vals = np.array(list(qfis.values()))
    top = float(np.max(np.abs(vals)))
    dev = 0.0 if top == 0.0 else float((vals.max() - vals.min()) / top)
    return SymmetryReport(problem.target, qfis, dev)


@dataclass(frozen=True)
class FisherCurve:
    """Fisher information sampled along a trajectory."""

    times: np.ndarray
    qfi: np.ndarray
    p0: np.ndarray
    p1: np.ndarray
    cfi: np.ndarray | None = None
    bound: np.ndarray | None = None
    divergent: np.ndarray | None = None

    def __post_init__(self):
        if np.any(self.qfi < 0):
            raise ValueError("QFI must be non-negative")


def fisher_curve(traj: Trajectory, basis=None, bound=None) -> FisherCurve:
    """Build a :class:`FisherCurve` from a trajectory with derivative states.

    ``basis`` is a :class:`MeasurementBasis`, a callable ``t -> basis`` or
    ``None`` (no CFI column).  ``bound`` is an optional precomputed array.
    """
    if traj.derivative_states is None:
        raise ValueError("trajectory has no derivative states")
    n = traj.times.size
    qfi = np.array([qfi_pure(traj.states[i], traj.derivative_states[i]) for i in range(n)])
    p0, p1 = traj.probabilities
    cfi = div = None
    if basis is not None:
        cfi = np.empty(n)
        div = np.zeros(n, dtype=bool)
        for i in range(n):
            b = basis(traj.times[i]) if callable(basis) else basis
            cfi[i], div[i] = cfi_projective_flagged(traj.states[i],
                                                    traj.derivative_states[i], b)
    return FisherCurve(traj.times, qfi, p0, p1, cfi,
                       None if bound is None else np.asarray(bound, dtype=float), div)
