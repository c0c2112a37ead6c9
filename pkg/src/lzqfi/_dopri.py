"""Compiled Dormand-Prince 5(4) kernel for two-level Schrodinger systems.

The kernel integrates a block of rows ``y[r] = (a_r, b_r)``.  The first
``nstate`` rows obey ``i y' = H y``; when ``has_deriv`` is set, the next
``nstate`` rows are tangent vectors obeying ``i d' = H d + G y``.  ``H`` and
``G`` are given as Pauli coefficient tables (see :mod:`lzqfi.dynamics`).

Coefficient tables have shape ``(3, m, 6)``: axis (x, y, z), term, and the
columns ``[const, slope, amp, freq, phase, tamp]`` of

    const + slope*t + (amp + tamp*t) * cos(freq*t + phase)
"""

import numpy as np
from numba import njit

OK = 0
STEP_UNDERFLOW = 1
TOO_MANY_STEPS = 2

# Dormand & Prince (1980) tableau, FSAL form.
C2, C3, C4, C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
A21 = 1.0 / 5.0
A31, A32 = 3.0 / 40.0, 9.0 / 40.0
A41, A42, A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
A51, A52, A53, A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
A61, A62, A63, A64, A65 = (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0,
                           49.0 / 176.0, -5103.0 / 18656.0)
A71, A73, A74, A75, A76 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
E1, E3, E4, E5, E6, E7 = (71.0 / 57600.0, -71.0 / 16695.0, 71.0 / 1920.0,
                          -17253.0 / 339200.0, 22.0 / 525.0, -1.0 / 40.0)
# Hairer's continuous extension (contd5).
D1 = -12715105075.0 / 11282082432.0
D3 = 87487479700.0 / 32700410799.0
D4 = -10690763975.0 / 1880347072.0
D5 = 701980252875.0 / 199316789632.0
D6 = -1453857185.0 / 822651844.0
D7 = 69997945.0 / 29380423.0


@njit(cache=True)
def eval_terms(terms, axis, t):
    s = 0.0
    for k in range(terms.shape[1]):
        c = terms[axis, k]
        s += c[0] + c[1] * t
        if c[2] != 0.0 or c[5] != 0.0:
            s += (c[2] + c[5] * t) * np.cos(c[3] * t + c[4])
    return s


@njit(cache=True)
def rhs(t, y, out, nstate, has_deriv, hterms, gterms):
    hx = eval_terms(hterms, 0, t)
    hy = eval_terms(hterms, 1, t)
    hz = eval_terms(hterms, 2, t)
    # -i H with H = (hx sx + hy sy + hz sz) / 2
    m00 = -0.5j * hz
    m01 = -0.5j * (hx - 1j * hy)
    m10 = -0.5j * (hx + 1j * hy)
    for r in range(nstate):
        a = y[r, 0]
        b = y[r, 1]
        out[r, 0] = m00 * a + m01 * b
        out[r, 1] = m10 * a - m00 * b
    if has_deriv:
        gx = eval_terms(gterms, 0, t)
        gy = eval_terms(gterms, 1, t)
        gz = eval_terms(gterms, 2, t)
        n00 = -0.5j * gz
        n01 = -0.5j * (gx - 1j * gy)
        n10 = -0.5j * (gx + 1j * gy)
        for r in range(nstate):
            a = y[r, 0]
            b = y[r, 1]
            da = y[nstate + r, 0]
            db = y[nstate + r, 1]
            out[nstate + r, 0] = m00 * da + m01 * db + n00 * a + n01 * b
            out[nstate + r, 1] = m10 * da - m00 * db + n10 * a - n00 * b


@njit(cache=True)
def _state_norm_drift(y, nstate, ref):
    worst = 0.0
    for r in range(nstate):
        nrm = np.sqrt(abs(y[r, 0]) ** 2 + abs(y[r, 1]) ** 2)
        d = abs(nrm - ref[r])
        if d > worst:
            worst = d
    return worst


@njit(cache=True)
def integrate_segment(y0, t0, t1, nstate, has_deriv, hterms, gterms, tol,
                      h_init, out_times, out_buf, out_start, out_stop,
                      max_steps):
    """Integrate from ``t0`` to ``t1``; fill ``out_buf[j]`` for
    ``out_start <= j < out_stop`` by dense output (``t0 <= out_times[j] <= t1``).

    Returns ``(y1, h_next, n_accepted, n_rejected, max_drift, status)``.
    """
    nrow = y0.shape[0]
    y = y0.copy()
    ref = np.empty(nstate)
    for r in range(nstate):
        ref[r] = np.sqrt(abs(y[r, 0]) ** 2 + abs(y[r, 1]) ** 2)

    k1 = np.empty_like(y)
    k2 = np.empty_like(y)
    k3 = np.empty_like(y)
    k4 = np.empty_like(y)
    k5 = np.empty_like(y)
    k6 = np.empty_like(y)
    k7 = np.empty_like(y)
    ys = np.empty_like(y)
    ynew = np.empty_like(y)

    span = t1 - t0
    j = out_start
    # outputs sitting exactly on t0
    while j < out_stop and out_times[j] <= t0:
        for r in range(nrow):
            out_buf[j, r, 0] = y[r, 0]
            out_buf[j, r, 1] = y[r, 1]
        j += 1

    if span <= 0.0:
        return y, h_init, 0, 0, 0.0, OK

    rhs(t0, y, k1, nstate, has_deriv, hterms, gterms)
    h = h_init
    if h <= 0.0:
        fmax = 0.0
        ymax = 0.0
        for r in range(nrow):
            for c in range(2):
                fmax = max(fmax, abs(k1[r, c]))
                ymax = max(ymax, abs(y[r, c]))
        if fmax > 0.0:
            h = 0.1 * tol ** 0.2 * max(ymax, 1.0) / fmax
        else:
            h = span
    h = min(h, span)

    t = t0
    naccept = 0
    nreject = 0
    max_drift = 0.0
    rejected_last = False
    hmin_rel = 1e-14
    while t < t1:
        if naccept + nreject >= max_steps:
            return y, h, naccept, nreject, max_drift, TOO_MANY_STEPS
        last = False
        if t + h >= t1 or t + 1.01 * h >= t1:
            h = t1 - t
            last = True
        if h <= hmin_rel * max(1.0, abs(t)):
            return y, h, naccept, nreject, max_drift, STEP_UNDERFLOW

        for r in range(nrow):
            for c in range(2):
                ys[r, c] = y[r, c] + h * A21 * k1[r, c]
        rhs(t + C2 * h, ys, k2, nstate, has_deriv, hterms, gterms)
        for r in range(nrow):
            for c in range(2):
                ys[r, c] = y[r, c] + h * (A31 * k1[r, c] + A32 * k2[r, c])
        rhs(t + C3 * h, ys, k3, nstate, has_deriv, hterms, gterms)
        for r in range(nrow):
            for c in range(2):
                ys[r, c] = y[r, c] + h * (A41 * k1[r, c] + A42 * k2[r, c]
                                          + A43 * k3[r, c])
        rhs(t + C4 * h, ys, k4, nstate, has_deriv, hterms, gterms)
        for r in range(nrow):
            for c in range(2):
                ys[r, c] = y[r, c] + h * (A51 * k1[r, c] + A52 * k2[r, c]
                                          + A53 * k3[r, c] + A54 * k4[r, c])
        rhs(t + C5 * h, ys, k5, nstate, has_deriv, hterms, gterms)
        for r in range(nrow):
            for c in range(2):
                ys[r, c] = y[r, c] + h * (A61 * k1[r, c] + A62 * k2[r, c]
                                          + A63 * k3[r, c] + A64 * k4[r, c]
                                          + A65 * k5[r, c])
        tnew = t1 if last else t + h
        rhs(tnew, ys, k6, nstate, has_deriv, hterms, gterms)
        for r in range(nrow):
            for c in range(2):
                ynew[r, c] = y[r, c] + h * (A71 * k1[r, c] + A73 * k3[r, c]
                                            + A74 * k4[r, c] + A75 * k5[r, c]
                                            + A76 * k6[r, c])
        rhs(tnew, ynew, k7, nstate, has_deriv, hterms, gterms)

        err = 0.0
        for r in range(nrow):
            for c in range(2):
                e = h * (E1 * k1[r, c] + E3 * k3[r, c] + E4 * k4[r, c]
                         + E5 * k5[r, c] + E6 * k6[r, c] + E7 * k7[r, c])
                sc = tol + tol * max(abs(y[r, c]), abs(ynew[r, c]))
                q = abs(e) / sc
                if q > err:
                    err = q

        if err <= 1.0:
            # dense output for grid points inside (t, tnew]
            while j < out_stop and out_times[j] <= tnew:
                theta = (out_times[j] - t) / h
                if theta >= 1.0:
                    for r in range(nrow):
                        out_buf[j, r, 0] = ynew[r, 0]
                        out_buf[j, r, 1] = ynew[r, 1]
                else:
                    th1 = 1.0 - theta
                    for r in range(nrow):
                        for c in range(2):
                            r1 = y[r, c]
                            r2 = ynew[r, c] - y[r, c]
                            r3 = h * k1[r, c] - r2
                            r4 = r2 - h * k7[r, c] - r3
                            r5 = h * (D1 * k1[r, c] + D3 * k3[r, c]
                                      + D4 * k4[r, c] + D5 * k5[r, c]
                                      + D6 * k6[r, c] + D7 * k7[r, c])
                            out_buf[j, r, c] = r1 + theta * (
                                r2 + th1 * (r3 + theta * (r4 + th1 * r5)))
                j += 1
            for r in range(nrow):
                for c in range(2):
                    y[r, c] = ynew[r, c]
                    k1[r, c] = k7[r, c]
            t = tnew
            naccept += 1
            d = _state_norm_drift(y, nstate, ref)
            if d > max_drift:
                max_drift = d
            if err == 0.0:
                fac = 5.0
            else:
                fac = min(5.0, max(0.2, 0.9 * err ** -0.2))
            if rejected_last:
                fac = min(fac, 1.0)
            rejected_last = False
            if not last:
                h = h * fac
        else:
            nreject += 1
            rejected_last = True
            h = h * max(0.2, 0.9 * err ** -0.2)

    while j < out_stop:
        for r in range(nrow):
            out_buf[j, r, 0] = y[r, 0]
            out_buf[j, r, 1] = y[r, 1]
        j += 1
    return y, h, naccept, nreject, max_drift, OK
