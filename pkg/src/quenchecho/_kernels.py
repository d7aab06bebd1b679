"""Numba kernels: segment evaluation and adaptive Runge-Kutta integration.

The time evolution of one momentum mode in the instantaneous eigenbasis is

    i d/dt (alpha, beta) = [[ 2 Lam,  -i c ],
                            [ i c,   -2 Lam ]] (alpha, beta)

with Lam = Lambda_k(g(t)) and c = J^2 sin(k) gdot / (2 Lam^2), the geometric
coupling generated by the rotating eigenbasis.  The integrator is an embedded
Dormand-Prince 4(5) pair on the two complex amplitudes, restarted at every
schedule breakpoint by the driver in `dynamics`.
"""

import math

from numba import njit

KIND_LINEAR = 0
KIND_HOLD = 1
KIND_KZM_LEFT = 2
KIND_KZM_RIGHT = 3
KIND_RC = 4

# Floor on the square root in the KZM branches, relative to sin(pi/N): caps
# the (integrable) gdot divergence at the branch join so the stepper can
# cross it.  The cap is active only where |g - g_join| < 1e-3 sin(pi/N), a
# region whose contribution to the evolution is negligible.
_KZM_SQRT_FLOOR_REL = 1e-3

STATUS_OK = 0
STATUS_STEP_UNDERFLOW = 1


@njit(cache=True)
def seg_eval(kind, p, rev, dur, u):
    """Evaluate (g, gdot) of one segment at local time u in [0, dur]."""
    if rev:
        u = dur - u
    if kind == KIND_LINEAR:
        g = p[0] + p[1] * u
        gd = p[1]
    elif kind == KIND_HOLD:
        g = p[0]
        gd = 0.0
    elif kind == KIND_KZM_LEFT or kind == KIND_KZM_RIGHT:
        c0 = p[0]
        s = p[1]
        gamma = p[2]
        j = p[3]
        t = p[4] + u
        a = p[5]
        if kind == KIND_KZM_LEFT:
            w = t + a
        else:
            w = a - t
        q = gamma / (2.0 * j * w)
        r = q * q - s * s
        if r < 0.0:
            r = 0.0
        sq = math.sqrt(r)
        floor = _KZM_SQRT_FLOOR_REL * s
        if sq < floor:
            sq = floor
        gd = gamma * gamma / (4.0 * j * j * w * w * w * sq)
        if kind == KIND_KZM_LEFT:
            g = c0 - math.sqrt(r)
        else:
            g = c0 + math.sqrt(r)
    else:  # KIND_RC
        c0 = p[0]
        s = p[1]
        b = p[2]
        t = p[3] + u
        g = c0 + s * math.tan(b * t)
        cc = math.cos(b * t)
        gd = s * b / (cc * cc)
    if rev:
        gd = -gd
    return g, gd


# Dormand-Prince 4(5) tableau.
_C2, _C3, _C4, _C5 = 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = 19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0
_A61, _A62, _A63, _A64, _A65 = (
    9017.0 / 3168.0,
    -355.0 / 33.0,
    46732.0 / 5247.0,
    49.0 / 176.0,
    -5103.0 / 18656.0,
)
_B1, _B3, _B4, _B5, _B6 = 35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0
_E1, _E3, _E4, _E5, _E6, _E7 = (
    71.0 / 57600.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
)


@njit(cache=True, inline="always")
def _mode_rhs(t, a, b, kind, p, rev, dur, k, j):
    g, gd = seg_eval(kind, p, rev, dur, t)
    lam2 = j * j * (g * g - 2.0 * g * math.cos(k) + 1.0)
    lam = math.sqrt(lam2)
    c = j * j * math.sin(k) * gd / (2.0 * lam2)
    da = -2j * lam * a - c * b
    db = c * a + 2j * lam * b
    return da, db


@njit(cache=True)
def evolve_segment(alpha, beta, t0, t1, kind, p, rev, dur, k, j,
                   rel_tol, abs_tol, max_step, min_step):
    """Integrate one mode across [t0, t1] of a single non-hold segment.

    Returns (alpha, beta, status).
    """
    t = t0
    h = max_step
    if h > t1 - t0:
        h = t1 - t0
    a = alpha
    b = beta
    while t < t1:
        if t + h > t1:
            h = t1 - t
        k1a, k1b = _mode_rhs(t, a, b, kind, p, rev, dur, k, j)
        k2a, k2b = _mode_rhs(t + _C2 * h, a + h * _A21 * k1a, b + h * _A21 * k1b,
                             kind, p, rev, dur, k, j)
        k3a, k3b = _mode_rhs(t + _C3 * h,
                             a + h * (_A31 * k1a + _A32 * k2a),
                             b + h * (_A31 * k1b + _A32 * k2b),
                             kind, p, rev, dur, k, j)
        k4a, k4b = _mode_rhs(t + _C4 * h,
                             a + h * (_A41 * k1a + _A42 * k2a + _A43 * k3a),
                             b + h * (_A41 * k1b + _A42 * k2b + _A43 * k3b),
                             kind, p, rev, dur, k, j)
        k5a, k5b = _mode_rhs(t + _C5 * h,
                             a + h * (_A51 * k1a + _A52 * k2a + _A53 * k3a + _A54 * k4a),
                             b + h * (_A51 * k1b + _A52 * k2b + _A53 * k3b + _A54 * k4b),
                             kind, p, rev, dur, k, j)
        k6a, k6b = _mode_rhs(t + h,
                             a + h * (_A61 * k1a + _A62 * k2a + _A63 * k3a + _A64 * k4a + _A65 * k5a),
                             b + h * (_A61 * k1b + _A62 * k2b + _A63 * k3b + _A64 * k4b + _A65 * k5b),
                             kind, p, rev, dur, k, j)
        na = a + h * (_B1 * k1a + _B3 * k3a + _B4 * k4a + _B5 * k5a + _B6 * k6a)
        nb = b + h * (_B1 * k1b + _B3 * k3b + _B4 * k4b + _B5 * k5b + _B6 * k6b)
        k7a, k7b = _mode_rhs(t + h, na, nb, kind, p, rev, dur, k, j)
        ea = h * (_E1 * k1a + _E3 * k3a + _E4 * k4a + _E5 * k5a + _E6 * k6a + _E7 * k7a)
        eb = h * (_E1 * k1b + _E3 * k3b + _E4 * k4b + _E5 * k5b + _E6 * k6b + _E7 * k7b)
        sa = abs_tol + rel_tol * max(abs(a), abs(na))
        sb = abs_tol + rel_tol * max(abs(b), abs(nb))
        err = math.sqrt(0.5 * ((abs(ea) / sa) ** 2 + (abs(eb) / sb) ** 2))
        if err <= 1.0:
            t += h
            a = na
            b = nb
        if err == 0.0:
            fac = 5.0
        else:
            fac = 0.9 * err ** -0.2
            if fac > 5.0:
                fac = 5.0
            elif fac < 0.2:
                fac = 0.2
        h *= fac
        if h > max_step:
            h = max_step
        if h < min_step and t < t1:
            return a, b, STATUS_STEP_UNDERFLOW
    return a, b, STATUS_OK


@njit(cache=True, inline="always")
def _lz_rhs(tp, v, u, taup):
    d = 0.5 * tp / taup
    dv = -1j * (d * v + 0.5 * u)
    du = -1j * (0.5 * v - d * u)
    return dv, du


@njit(cache=True)
def evolve_lz(v, u, tp0, tp1, taup, rel_tol, abs_tol, max_step, min_step):
    """Integrate the Landau-Zener frame equation from tp0 to tp1.

    Returns (v, u, status).
    """
    t = tp0
    h = max_step
    if h > tp1 - tp0:
        h = tp1 - tp0
    while t < tp1:
        if t + h > tp1:
            h = tp1 - t
        k1v, k1u = _lz_rhs(t, v, u, taup)
        k2v, k2u = _lz_rhs(t + _C2 * h, v + h * _A21 * k1v, u + h * _A21 * k1u, taup)
        k3v, k3u = _lz_rhs(t + _C3 * h,
                           v + h * (_A31 * k1v + _A32 * k2v),
                           u + h * (_A31 * k1u + _A32 * k2u), taup)
        k4v, k4u = _lz_rhs(t + _C4 * h,
                           v + h * (_A41 * k1v + _A42 * k2v + _A43 * k3v),
                           u + h * (_A41 * k1u + _A42 * k2u + _A43 * k3u), taup)
        k5v, k5u = _lz_rhs(t + _C5 * h,
                           v + h * (_A51 * k1v + _A52 * k2v + _A53 * k3v + _A54 * k4v),
                           u + h * (_A51 * k1u + _A52 * k2u + _A53 * k3u + _A54 * k4u), taup)
        k6v, k6u = _lz_rhs(t + h,
                           v + h * (_A61 * k1v + _A62 * k2v + _A63 * k3v + _A64 * k4v + _A65 * k5v),
                           u + h * (_A61 * k1u + _A62 * k2u + _A63 * k3u + _A64 * k4u + _A65 * k5u),
                           taup)
        nv = v + h * (_B1 * k1v + _B3 * k3v + _B4 * k4v + _B5 * k5v + _B6 * k6v)
        nu = u + h * (_B1 * k1u + _B3 * k3u + _B4 * k4u + _B5 * k5u + _B6 * k6u)
        k7v, k7u = _lz_rhs(t + h, nv, nu, taup)
        ev = h * (_E1 * k1v + _E3 * k3v + _E4 * k4v + _E5 * k5v + _E6 * k6v + _E7 * k7v)
        eu = h * (_E1 * k1u + _E3 * k3u + _E4 * k4u + _E5 * k5u + _E6 * k6u + _E7 * k7u)
        sv = abs_tol + rel_tol * max(abs(v), abs(nv))
        su = abs_tol + rel_tol * max(abs(u), abs(nu))
        err = math.sqrt(0.5 * ((abs(ev) / sv) ** 2 + (abs(eu) / su) ** 2))
        if err <= 1.0:
            t += h
            v = nv
            u = nu
        if err == 0.0:
            fac = 5.0
        else:
            fac = 0.9 * err ** -0.2
            if fac > 5.0:
                fac = 5.0
            elif fac < 0.2:
                fac = 0.2
        h *= fac
        if h > max_step:
            h = max_step
        if h < min_step and t < tp1:
            return v, u, STATUS_STEP_UNDERFLOW
    return v, u, STATUS_OK
