"""Pure-Python/numpy implementations of the numerical kernels.

Mirrors ``_ckernels.pyx`` function for function; :mod:`nmsplit.kernels`
picks one at import time.
"""
import cmath
import math

import numpy as np

_EPS = 2.220446049250313e-16
# fixed angular jitter for the starting circle; keeps the start off any symmetry axis
_JITTER = (0.4, 0.137, 0.291, 0.053, 0.211, 0.173, 0.067, 0.313)


def _start_points(n):
    return [0.5 * (1.0 + 0.05 * k) * cmath.exp(1j * (2.0 * math.pi * k / n + _JITTER[k % 8]))
            for k in range(n)]


def durand_kerner(coeffs, tol=1e-14, maxiter=1000):
    """Roots of a complex polynomial (descending coefficients) by Weierstrass iteration.

    Returns ``(roots, iterations, converged)``.
    """
    a = [complex(c) for c in coeffs]
    n = len(a) - 1
    if n < 1 or a[0] == 0:
        raise ValueError("need a polynomial of degree >= 1 with nonzero leading coefficient")
    lead = a[0]
    a = [c / lead for c in a]
    # Fujiwara bound puts every root inside |z| <= scale
    scale = 0.0
    for k in range(1, n + 1):
        scale = max(scale, abs(a[k]) ** (1.0 / k))
    scale *= 2.0
    if scale == 0.0:
        return np.zeros(n, dtype=complex), 0, True
    b = [a[k] / scale**k for k in range(n + 1)]
    babs = [abs(c) for c in b]
    z = _start_points(n)

    converged = False
    it = 0
    for it in range(1, maxiter + 1):
        maxstep = 0.0
        at_noise = True
        for i in range(n):
            zi = z[i]
            p = b[0]
            pa = babs[0]
            azi = abs(zi)
            for k in range(1, n + 1):
                p = p * zi + b[k]
                pa = pa * azi + babs[k]
            denom = 1.0 + 0j
            for j in range(n):
                if j != i:
                    denom *= zi - z[j]
            if denom == 0:
                denom = 1e-300 + 0j
            w = p / denom
            z[i] = zi - w
            maxstep = max(maxstep, abs(w))
            if abs(p) > 8.0 * n * _EPS * pa:
                at_noise = False
        if maxstep <= tol or at_noise:
            converged = True
            break
    roots = np.array(z, dtype=complex) * scale
    return roots, it, converged


def newton_real(coeffs, x0, maxiter=60):
    """Polish a real root of a real polynomial by Newton's method."""
    c = [float(v) for v in coeffs]
    x = float(x0)
    for _ in range(maxiter):
        p = c[0]
        dp = 0.0
        for v in c[1:]:
            dp = dp * x + p
            p = p * x + v
        if dp == 0.0:
            break
        step = p / dp
        x -= step
        if abs(step) <= 4.0 * _EPS * max(abs(x), 1e-300):
            break
    return x


def sq_grid(omega, wcoth, omega_m, gamma_m, kappa, delta, gain, k_coupling, rp_scale, cs_abs2, rp_const):
    """Position spectrum on a grid.

    ``k_coupling`` is the constant term of d(omega), ``rp_scale`` the
    radiation-pressure prefactor, ``rp_const`` the (real) parametric part of
    the radiation-pressure bracket and ``wcoth`` the thermal weight
    omega*coth(hbar*omega/2kT) on the same grid.
    """
    w = np.asarray(omega, dtype=float)
    wc = np.asarray(wcoth, dtype=float)
    opt = (kappa - 1j * w) ** 2 + delta**2 - 4.0 * gain**2
    d = k_coupling + (w**2 - omega_m**2 + 1j * gamma_m * w) * opt
    rad = rp_scale * ((kappa**2 + w**2 + delta**2 + 4.0 * gain**2) * cs_abs2 + rp_const)
    therm = 2.0 * (gamma_m / omega_m) * wc * ((delta**2 + kappa**2 - w**2 - 4.0 * gain**2) ** 2
                                            + 4.0 * kappa**2 * w**2)
    return omega_m**2 * (rad + therm) / (d.real**2 + d.imag**2)


def vef_grid(omega, omega_m, gamma_m, kappa, delta, gain, theta, chi, cs, k_coupling):
    """Output-field coefficients V, E, F at each grid frequency."""
    w = np.asarray(omega, dtype=float)
    cs = complex(cs)
    csc = cs.conjugate()
    eith = cmath.exp(1j * theta)
    opt = (kappa - 1j * w) ** 2 + delta**2 - 4.0 * gain**2
    d = k_coupling + (w**2 - omega_m**2 + 1j * gamma_m * w) * opt
    a_plus = kappa - 1j * (w + delta)
    x = a_plus * cs - 2.0 * gain * eith * csc
    v = -math.sqrt(2.0 * kappa) * omega_m**2 * chi / d * 1j * x
    mech = -2.0 * omega_m**3 * chi**2 / d * 1j * x
    pref = 2.0 * kappa / opt
    e = pref * (mech * (a_plus * csc + 2.0 * gain * eith.conjugate() * cs) + a_plus) - 1.0
    f = pref * (mech * ((kappa - 1j * (w - delta)) * cs + 2.0 * gain * eith * csc) + 2.0 * gain * eith)
    return v, e, f
