import math
import warnings

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lzqfi.analytic import (
    AsymptoticValidityWarning,
    DriveParams,
    LZParams,
    asymptotic_final_state,
    asymptotic_final_state_superposition,
    cfi_closed_form,
    lz_probabilities,
    omega_phase_derivative,
    optimal_measurement_vectors,
    qfi_controlled,
    qfi_controlled_omega,
    qfi_controlled_omega_at,
    qfi_delta_improved,
    qfi_delta_improved_terms,
    qfi_leading,
    relative_phase,
    rwa_max_qfi,
    sgn,
)
from lzqfi.control import plan_for_omega
from lzqfi.dynamics import (
    TwoLevelState,
    delta_problem,
    lz_schedule,
    propagate,
    propagate_with_derivative,
)
from lzqfi.fisher import MeasurementBasis, control_bound, qfi_pure
from lzqfi.specfun import log_gamma_complex, theta1

import oracles

P1 = math.exp(-math.pi / 2)
LZ = LZParams(1.0, 1.0, 100.0, 100.0)


# -- parameters -------------------------------------------------------------

def test_derived_quantities():
    p = LZParams(2.0, 3.0, 50.0, 80.0)
    assert p.gamma == pytest.approx(9 / 8)
    assert p.tau == pytest.approx(max(3 / 4, 1 / math.sqrt(2)))
    assert p.R == pytest.approx(math.sqrt(2) * 80) and p.R0 == pytest.approx(math.sqrt(2) * 50)
    assert p.nu == -1j * p.gamma


@pytest.mark.parametrize("kw", [dict(v=0.0), dict(v=-1.0), dict(delta=-0.1), dict(t0=0.0),
                                dict(t_end=-1.0), dict(v=math.inf)])
def test_lz_params_validation(kw):
    base = dict(v=1.0, delta=1.0, t0=10.0, t_end=10.0)
    base.update(kw)
    with pytest.raises(ValueError):
        LZParams(**base)


def test_validity_warning_is_advisory():
    p = LZParams(1.0, 1.0, 5.0, 100.0)
    assert not p.validity()["valid"]
    with pytest.warns(AsymptoticValidityWarning):
        s = asymptotic_final_state(p)
    assert s.p1 == pytest.approx(P1)


def test_drive_params():
    d = DriveParams(0.0, 1.0, 1.0, 0.1, 60, 0.25, omega_c=1.01)
    assert d.T == pytest.approx(60.25 * math.pi / 1.01)
    assert np.allclose(d.pulse_times(), np.arange(1, 61) * math.pi / 1.01, atol=1e-12)
    with pytest.raises(ValueError):
        DriveParams(0.0, 1.0, 1.0, 0.1, 0)
    with pytest.raises(ValueError):
        DriveParams(0.0, 1.0, 1.0, 0.1, 3, 1.0)


# -- probabilities and asymptotic state -----------------------------------------

def test_lz_probabilities():
    p0, p1 = lz_probabilities(LZ)
    assert p1 == pytest.approx(0.2078796, abs=5e-8)
    assert p0 + p1 == pytest.approx(1.0, abs=1e-15)
    assert lz_probabilities(LZParams(1.0, 0.0, 10, 10)) == (0.0, 1.0)
    assert lz_probabilities(LZParams(1e-3, 10.0, 1e5, 1e5))[1] == pytest.approx(0.0, abs=1e-300)


def test_asymptotic_state_moduli():
    s = asymptotic_final_state(LZ)
    assert abs(s.c1) ** 2 == pytest.approx(P1, rel=1e-14)
    assert abs(s.c0) ** 2 + abs(s.c1) ** 2 == pytest.approx(1.0, abs=1e-12)
    assert s.p1 == pytest.approx(P1, rel=1e-14)


def test_relative_phase_formula():
    g = LZ.gamma
    ref = 1e4 / 2 + g * math.log(1e4) + log_gamma_complex(1 - 1j * g).argument + math.pi / 4
    assert relative_phase(LZ) == pytest.approx(ref, rel=1e-15)


def test_decoupled_limit():
    p = LZParams(1.0, 0.0, 100.0, 100.0)
    s = asymptotic_final_state(p)
    assert s.c0 == 0 and abs(s.c1) == pytest.approx(1.0, abs=1e-15)
    assert s.rel_phase == pytest.approx(1e4 / 2 + math.pi / 4, rel=1e-15)


def _numerical_final(T, psi=TwoLevelState.ket1(), v=1.0, delta=1.0):
    return propagate(lz_schedule(v, delta), psi, (-T, T), 1e-11, grid=2).states[-1]


def test_asymptotic_state_componentwise_at_100():
    # finite-T corrections are about 4.6e-3 here, expected to fail
    num = _numerical_final(100.0)
    s = asymptotic_final_state(LZ)
    assert abs(num[0] - s.c0) <= 1e-3 and abs(num[1] - s.c1) <= 1e-3


def test_asymptotic_state_error_decreases_with_T():
    errs = []
    for T in (50.0, 100.0, 200.0):
        num = _numerical_final(T)
        s = asymptotic_final_state(LZParams(1.0, 1.0, T, T))
        errs.append(max(abs(num[0] - s.c0), abs(num[1] - s.c1)))
    # allow 20% oscillatory slack per step
    assert errs[1] <= 1.2 * errs[0] and errs[2] <= 1.2 * errs[1]
    assert errs[2] < errs[0]


def test_superposition_reduces_to_ground_start():
    a = asymptotic_final_state(LZ)
    s = asymptotic_final_state_superposition(LZ, math.pi, 0.0)
    assert s.c0 == pytest.approx(a.c0, abs=1e-15) and s.c1 == pytest.approx(a.c1, abs=1e-15)


def test_superposition_excited_partner_swaps_probabilities():
    a = asymptotic_final_state(LZ)
    s = asymptotic_final_state_superposition(LZ, 0.0, 0.0)
    assert abs(s.c0) ** 2 == pytest.approx(a.p1, rel=1e-13)
    assert abs(s.c1) ** 2 == pytest.approx(a.p0, rel=1e-13)


def test_superposition_partner_matches_propagation_structure():
    # numerical |0> start equals the SU(2) partner of the |1> start
    num1 = _numerical_final(100.0)
    num0 = _numerical_final(100.0, TwoLevelState.ket0())
    assert np.allclose(num0, [num1[1].conjugate(), -num1[0].conjugate()], atol=1e-8)


def test_superposition_against_propagation():
    # same finite-T limitation as the ground start, expected to fail at 1e-3
    num = _numerical_final(100.0, TwoLevelState.superposition(math.pi / 2, 0.0))
    s = asymptotic_final_state_superposition(LZ, math.pi / 2, 0.0)
    assert abs(num[0] - s.c0) <= 1e-3 and abs(num[1] - s.c1) <= 1e-3


@given(st.floats(0, math.pi), st.floats(-math.pi, math.pi))
def test_superposition_is_linear_and_normalized(alpha, beta):
    psi = TwoLevelState.superposition(alpha, beta)
    s = asymptotic_final_state_superposition(LZ, alpha, beta)
    a = asymptotic_final_state(LZ)
    col1 = np.array([a.c0, a.c1])
    col0 = np.array([a.c1.conjugate(), -a.c0.conjugate()])
    assert np.allclose([s.c0, s.c1], psi.c0 * col0 + psi.c1 * col1, atol=1e-14)
    assert abs(s.c0) ** 2 + abs(s.c1) ** 2 == pytest.approx(1.0, abs=1e-12)


# -- CFI and QFI formulas ---------------------------------------------------------

def test_cfi_closed_forms():
    assert cfi_closed_form("delta", LZ) == pytest.approx(2.5901, abs=5e-5)
    g = 0.25
    ref = 16 * math.pi ** 2 * g ** 2 / (math.expm1(2 * math.pi * g))
    assert cfi_closed_form("delta", LZ) == pytest.approx(ref, rel=1e-14)
    # the quoted 0.64752 is the formula value 0.6475307 cut to five digits
    assert cfi_closed_form("v", LZ) == pytest.approx(0.64752, abs=2e-5)
    assert cfi_closed_form("v", LZ) == pytest.approx(ref / 4, rel=1e-14)


def test_cfi_closed_form_limits():
    # diabatic: Delta fixed, v large; adiabatic: v small
    assert cfi_closed_form("delta", LZParams(1e8, 1.0, 1, 1)) < 1e-7
    assert cfi_closed_form("v", LZParams(1e8, 1.0, 1, 1)) < 1e-20
    assert cfi_closed_form("delta", LZParams(1e-3, 1.0, 1e4, 1e4)) == 0.0
    assert cfi_closed_form("v", LZParams(1e-3, 1.0, 1e4, 1e4)) == 0.0


def test_cfi_peaks_at_intermediate_gamma():
    gammas = np.geomspace(0.01, 10, 31)
    f = np.array([cfi_closed_form("delta", LZParams(1 / (4 * g), 1.0, 1e3, 1e3)) for g in gammas])
    k = int(np.argmax(f))
    assert 0 < k < len(gammas) - 1
    assert f[0] < 0.1 * f[k] and f[-1] < 0.1 * f[k]


def test_qfi_leading_values():
    p0p1 = P1 * (1 - P1)
    assert qfi_leading("v", LZ) == pytest.approx(p0p1 * 1e8, rel=1e-14)
    # quoted literals carry P0 P1 = 0.164667; the exact product is 0.1646657
    assert qfi_leading("v", LZ) == pytest.approx(1.64667e7, rel=2e-5)
    assert qfi_leading("delta", LZ) == pytest.approx(p0p1 * math.log(1e4) ** 2, rel=1e-14)
    assert qfi_leading("delta", LZ) == pytest.approx(13.966, rel=2e-4)
    assert qfi_leading("delta", LZParams(1.0, 0.0, 100, 100)) == 0.0


def test_improved_terms():
    t = qfi_delta_improved_terms(LZ)
    assert t.leading == pytest.approx(qfi_leading("delta", LZ), rel=1e-15)
    assert t.total == pytest.approx(t.leading + t.cross + t.remainder, rel=1e-15)
    assert qfi_delta_improved(LZ) == t.total
    # term-by-term arithmetic oracle with k = Delta^2/v^2 = 1
    p0, p1 = 1 - P1, P1
    L = math.log(1e4)
    th = theta1(LZ.gamma)
    assert t.theta1 == th
    assert t.cross == pytest.approx(-2 * p0 * p1 * th * L, rel=1e-14)
    assert t.remainder == pytest.approx((p1 / p0) * (math.pi ** 2 + th ** 2 * p0 ** 2), rel=1e-14)
    assert math.isfinite(t.total)


def test_improved_beats_leading_in_diabatic_regime():
    p = LZParams(1.0, 0.01, 100.0, 100.0)
    tr = propagate_with_derivative(lz_schedule(1.0, 0.01), delta_problem(0.01), TwoLevelState.ket1(),
                                   (-100.0, 100.0), 1e-10, grid=2)
    q = qfi_pure(tr.states[-1], tr.derivative_states[-1])
    e_imp = abs(qfi_delta_improved(p) / q - 1)
    e_lead = abs(qfi_leading("delta", p) / q - 1)
    assert e_imp < 0.05 < 0.2 < e_lead
    assert e_imp < e_lead


def test_sgn_convention():
    assert sgn(0.0) == -1 and sgn(-1e-300) == -1 and sgn(2.0) == 1


def test_qfi_controlled_values():
    assert qfi_controlled("delta", 100, 100) == 40000
    assert qfi_controlled("v", 100, 100) == 1e8
    assert qfi_controlled("v", 0.0, 100) == pytest.approx(2.5e7, rel=1e-15)
    with pytest.raises(ValueError):
        qfi_controlled("omega", 1, 1)


def test_qfi_controlled_omega_values():
    d = DriveParams(0.0, 1.0, 1.0, 0.1, 60)
    with_ = qfi_controlled_omega(d, True)
    without = qfi_controlled_omega(d, False)
    assert with_ == pytest.approx((math.pi * 3600) ** 2, rel=1e-12)
    assert with_ == pytest.approx(1.27910e8, rel=5e-6)
    assert without == pytest.approx((60 * math.pi) ** 2, rel=1e-12)
    assert without == pytest.approx(3.55306e4, rel=5e-6)
    assert with_ / without == pytest.approx(3600, rel=1e-12)


def test_qfi_controlled_omega_equals_bound():
    d = DriveParams(0.3, 1.0, 1.0, 0.1, 60)
    b = control_bound(plan_for_omega(d).problem, (0.0, d.T), [d.T])[0]
    assert qfi_controlled_omega(d) == pytest.approx(b, rel=1e-12)


def test_qfi_controlled_omega_curve_is_continuous_in_time():
    d = DriveParams(0.0, 1.0, 1.0, 0.1, 6)
    t = np.linspace(0.0, d.T, 301)
    q = np.sqrt([qfi_controlled_omega_at(d, x) for x in t])
    # |d theta/d omega| changes at most at the rate A t |sin(omega t)| <= A T
    assert np.max(np.abs(np.diff(q))) <= d.amp * d.T * (t[1] - t[0]) * (1 + 1e-9)


# -- RWA ----------------------------------------------------------------------

def test_rwa_resonance_values():
    A = 0.01
    T = 2 * math.pi / A
    assert rwa_max_qfi(A, 1.0, 1.0, T) == pytest.approx(T * T + 16 / A ** 2, rel=1e-12)
    assert rwa_max_qfi(A, 1.0, 1.0, T) == pytest.approx(554784, abs=1)
    # AT/2 = 2 pi k: oscillatory terms vanish
    T2 = 8 * math.pi / A
    assert rwa_max_qfi(A, 1.0, 1.0, T2) == pytest.approx(T2 * T2, rel=1e-12)


def _rwa_lead(A, detune, T):
    return A * A * T * T / (A * A + 4 * detune ** 2)


@pytest.mark.parametrize("A, detune, AT", [
    (0.01, 0.0, 100.0), (0.01, 0.0, 2 * math.pi * 40), (0.05, 0.01, 250.0),
    (0.01, 0.0, 101 * math.pi),  # sin(AT/2) = 1 at resonance
])
def test_rwa_leading_term_within_3_over_AT(A, detune, AT):
    # stated bound; the sine term alone reaches 4/(AT) at resonance, so the
    # last case is expected to fail
    T = AT / A
    full = rwa_max_qfi(A, 1.0, 1.0 + detune, T)
    assert abs(full - _rwa_lead(A, detune, T)) <= 3.0 / (A * T) * full


@given(st.floats(0.001, 0.1), st.floats(-0.05, 0.05), st.floats(100, 5000))
def test_rwa_leading_term_dominates(A, detune, AT):
    # |sin| <= 1 and 1 - cos <= 2 give 4/(T s) + 16/(T s)^2 relative to the
    # leading term, with s = sqrt(A^2 + 4 detune^2) >= A
    T = AT / A
    full = rwa_max_qfi(A, 1.0, 1.0 + detune, T)
    lead = _rwa_lead(A, detune, T)
    x = T * math.sqrt(A * A + 4 * detune ** 2)
    assert abs(full - lead) <= (4.0 / x + 16.0 / x ** 2) * lead * (1 + 1e-12)


# -- measurement vectors --------------------------------------------------------

def _same_basis(a, b):
    # equal as unordered pairs of rays
    ga, gb = a.vectors(), b.vectors()

    def match(pa, pb):
        return all(abs(abs(np.vdot(x, y)) - 1) < 1e-12 for x, y in zip(pa, pb))

    return match(ga, gb) or match(ga, gb[::-1])


def test_controlled_delta_vectors_at_start():
    beta = 0.8
    b = optimal_measurement_vectors("controlled-delta", -LZ.t_end, LZ, beta)
    r = 1 / math.sqrt(2)
    px, mx = np.array([r, r]), np.array([r, -r])
    w = 1j * np.exp(1j * beta)
    ref = MeasurementBasis.from_vectors(r * (px + w * mx), r * (px - w * mx))
    assert _same_basis(b, ref)


@pytest.mark.parametrize("l", [0, 1, 2])
def test_controlled_omega_vectors_even_cycles(l):
    beta = 0.4
    d = DriveParams(0.0, 1.0, 1.0, 0.1, 6)
    b = optimal_measurement_vectors("controlled-omega", d.T, d, beta, l=l)
    # each half period adds zero net dynamic phase at omega_c = omega, and (-1)^{N l + N} = 1
    theta, _ = omega_phase_derivative(d, d.T, True, beta)
    assert math.cos(theta - beta) == pytest.approx(1.0, abs=1e-9)
    assert _same_basis(b, MeasurementBasis.phase_pair(beta))


def test_unknown_scenario():
    with pytest.raises(ValueError):
        optimal_measurement_vectors("bogus", 1.0, LZ)


def test_no_control_vectors_need_positive_time():
    with pytest.raises(ValueError):
        optimal_measurement_vectors("no-control", -1.0, LZ)


def test_oracle_digamma_used_in_theta1_matches():
    assert theta1(LZ.gamma) == pytest.approx(oracles.digamma(1 - 0.25j).real, abs=1e-12)
