"""Optimal control plans for the delta, v and omega estimation problems.

A plan bundles the controlled Hamiltonian ``H + H_c`` (including the
level-crossing pulses), the initial state and the control estimates used in
place of the unknown true values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .analytic import DriveParams, LZParams
from .dynamics import (
    Coefficient,
    EstimationProblem,
    HamiltonianSchedule,
    PulseEvent,
    TwoLevelState,
    delta_problem,
    lz_schedule,
    omega_problem,
    periodic_schedule,
    v_problem,
)

__all__ = ["ControlPlan", "plan_for_delta", "plan_for_v", "plan_for_omega", "generic_och"]


@dataclass(frozen=True)
class ControlPlan:
    schedule: HamiltonianSchedule
    initial_state: TwoLevelState
    beta: float
    control_estimates: dict = field(default_factory=dict)
    winding: int = 0
    span: tuple[float, float] = (0.0, 0.0)
    problem: EstimationProblem | None = None


def plan_for_delta(params: LZParams, beta: float = 0.0, v_c: float | None = None,
                   delta_c: float | None = None) -> ControlPlan:
    """Cancel the sweep with ``H_c = -(v_c t/2) sz``; start in ``(|+x> + e^{i beta}|-x>)/sqrt 2``.

    ``delta_c`` only labels the measurement phases and does not enter ``H_c``.
    """
    vc = params.v if v_c is None else float(v_c)
    dc = params.delta if delta_c is None else float(delta_c)
    sched = lz_schedule(params.v, params.delta) + HamiltonianSchedule(
        hz=Coefficient.linear(-vc))
    r = 1.0 / math.sqrt(2.0)
    e = complex(math.cos(beta), math.sin(beta))
    psi = TwoLevelState(r * (r + e * r), r * (r - e * r))
    T = params.t_end
    return ControlPlan(sched, psi, beta, {"v_c": vc, "delta_c": dc}, 0,
                       (-T, T), delta_problem(params.delta))


def plan_for_v(params: LZParams, beta: float = 0.0, v_c: float | None = None,
               l: int = 0) -> ControlPlan:
    """Cancel the gap with ``H_c = -(delta/2) sx`` and swap branches at ``t = 0``.

    The pulse axis angle is ``-v_c T^2 / 2``; the state starts in
    ``(|0> + e^{i beta}|1>)/sqrt 2``.
    """
    vc = params.v if v_c is None else float(v_c)
    T = params.t_end
    pulse = PulseEvent(0.0, -0.5 * vc * T * T, l)
    sched = lz_schedule(params.v, params.delta) + HamiltonianSchedule(
        hx=-params.delta, pulses=(pulse,))
    return ControlPlan(sched, TwoLevelState.superposition(0.5 * math.pi, beta), beta,
                       {"v_c": vc}, int(l), (-T, T), v_problem(params.v))


def plan_for_omega(d: DriveParams, beta: float = 0.0, l: int = 0,
                   olch: bool = True) -> ControlPlan:
    """OCH ``-eps0/2 sz - delta/2 sx`` plus sx swaps at ``n pi / omega_c``, n = 1..N.

    With ``olch=False`` the pulses are left out (OCH only).
    """
    sched = periodic_schedule(d.eps0, d.amp, d.omega, d.delta) + HamiltonianSchedule(
        hx=-d.delta, hz=-d.eps0)
    if olch:
        pulses = tuple(PulseEvent(float(t), 0.0, l) for t in d.pulse_times())
        sched = sched.with_pulses(pulses)
    return ControlPlan(sched, TwoLevelState.superposition(0.5 * math.pi, beta), beta,
                       {"omega_c": d.omega_c}, int(l), (0.0, d.T),
                       omega_problem(d.amp, d.omega))


def generic_och(eigenbasis, f_values, hamiltonian: HamiltonianSchedule) -> HamiltonianSchedule:
    """``H_c = sum_k f_k |psi_k><psi_k| - H`` for a fixed eigenbasis.

    ``eigenbasis`` is a 2x2 matrix whose columns are ``|psi_0>``, ``|psi_1>``;
    ``f_values`` is a pair of :class:`Coefficient` (or numbers).  The trace
    part ``(f_0 + f_1)/2`` is a global phase and is dropped.
    """
    basis = np.asarray(eigenbasis, dtype=complex).reshape(2, 2)
    if not np.allclose(basis.conj().T @ basis, np.eye(2), atol=1e-12):
        raise ValueError("eigenbasis columns must be orthonormal")
    f0, f1 = (Coefficient.of(f) for f in f_values)
    # sum_k f_k P_k = (f0 + f1)/2 I + (f0 - f1)/2 n.s, with n the Bloch vector of psi_0
    psi = basis[:, 0]
    n = np.array([2.0 * (psi[0].conjugate() * psi[1]).real,
                  2.0 * (psi[0].conjugate() * psi[1]).imag,
                  abs(psi[0]) ** 2 - abs(psi[1]) ** 2])
    diff = f0 - f1
    # H = (h.s)/2, so the Pauli coefficient of (f0 - f1)/2 n.s is (f0 - f1) n
    return HamiltonianSchedule(hx=diff * float(n[0]) - hamiltonian.hx,
                               hy=diff * float(n[1]) - hamiltonian.hy,
                               hz=diff * float(n[2]) - hamiltonian.hz)
