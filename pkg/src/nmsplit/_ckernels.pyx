# cython: language_level=3
"""Compiled numerical kernels; see _pykernels.py for the reference versions."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, pow, sqrt, cos, sin, M_PI

cnp.import_array()

cdef double _EPS = 2.220446049250313e-16
cdef double[8] _JITTER = [0.4, 0.137, 0.291, 0.053, 0.211, 0.173, 0.067, 0.313]


cdef inline double cabs_(double complex z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


def durand_kerner(coeffs, double tol=1e-14, int maxiter=1000):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.asarray(coeffs, dtype=np.complex128).copy()
    cdef Py_ssize_t n = a.shape[0] - 1
    if n < 1 or a[0] == 0:
        raise ValueError("need a polynomial of degree >= 1 with nonzero leading coefficient")
    cdef double complex lead = a[0]
    cdef Py_ssize_t i, j, k
    for k in range(n + 1):
        a[k] = a[k] / lead
    cdef double scale = 0.0, t
    for k in range(1, n + 1):
        t = pow(cabs_(a[k]), 1.0 / k)
        if t > scale:
            scale = t
    scale *= 2.0
    if scale == 0.0:
        return np.zeros(n, dtype=np.complex128), 0, True

    cdef cnp.ndarray[cnp.complex128_t, ndim=1] b = np.empty(n + 1, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] babs = np.empty(n + 1, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] z = np.empty(n, dtype=np.complex128)
    cdef double sk = 1.0
    for k in range(n + 1):
        b[k] = a[k] / sk
        babs[k] = cabs_(b[k])
        sk *= scale
    cdef double ang, rad
    for k in range(n):
        ang = 2.0 * M_PI * k / n + _JITTER[k % 8]
        rad = 0.5 * (1.0 + 0.05 * k)
        z[k] = rad * cos(ang) + 1j * rad * sin(ang)

    cdef double complex zi, p, denom, w
    cdef double pa, azi, maxstep, aw
    cdef bint at_noise, converged = False
    cdef int it = 0
    for it in range(1, maxiter + 1):
        maxstep = 0.0
        at_noise = True
        for i in range(n):
            zi = z[i]
            p = b[0]
            pa = babs[0]
            azi = cabs_(zi)
            for k in range(1, n + 1):
                p = p * zi + b[k]
                pa = pa * azi + babs[k]
            denom = 1.0
            for j in range(n):
                if j != i:
                    denom = denom * (zi - z[j])
            if denom == 0:
                denom = 1e-300
            w = p / denom
            z[i] = zi - w
            aw = cabs_(w)
            if aw > maxstep:
                maxstep = aw
            if cabs_(p) > 8.0 * n * _EPS * pa:
                at_noise = False
        if maxstep <= tol or at_noise:
            converged = True
            break
    for k in range(n):
        z[k] = z[k] * scale
    return z, it, converged


def newton_real(coeffs, double x0, int maxiter=60):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] c = np.asarray(coeffs, dtype=np.float64)
    cdef Py_ssize_t m = c.shape[0], k
    cdef double x = x0, p, dp, step
    cdef int it
    for it in range(maxiter):
        p = c[0]
        dp = 0.0
        for k in range(1, m):
            dp = dp * x + p
            p = p * x + c[k]
        if dp == 0.0:
            break
        step = p / dp
        x -= step
        if fabs(step) <= 4.0 * _EPS * max(fabs(x), 1e-300):
            break
    return x


def sq_grid(omega, wcoth, double omega_m, double gamma_m, double kappa, double delta,
            double gain, double k_coupling, double rp_scale, double cs_abs2, double rp_const):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.ascontiguousarray(omega, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] wc = np.ascontiguousarray(wcoth, dtype=np.float64)
    cdef Py_ssize_t n = w.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef double x, ore, oim, mre, mim, dre, dim, rad, therm, base
    cdef double base0 = delta * delta - 4.0 * gain * gain
    with nogil:
        for i in range(n):
            x = w[i]
            # (kappa - i x)^2 + Delta^2 - 4G^2
            ore = kappa * kappa - x * x + base0
            oim = -2.0 * kappa * x
            mre = x * x - omega_m * omega_m
            mim = gamma_m * x
            dre = k_coupling + mre * ore - mim * oim
            dim = mre * oim + mim * ore
            rad = rp_scale * ((kappa * kappa + x * x + delta * delta + 4.0 * gain * gain) * cs_abs2 + rp_const)
            base = delta * delta + kappa * kappa - x * x - 4.0 * gain * gain
            therm = 2.0 * (gamma_m / omega_m) * wc[i] * (base * base + 4.0 * kappa * kappa * x * x)
            out[i] = omega_m * omega_m * (rad + therm) / (dre * dre + dim * dim)
    return out


def vef_grid(omega, double omega_m, double gamma_m, double kappa, double delta, double gain,
             double theta, double chi, cs, double k_coupling):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.ascontiguousarray(omega, dtype=np.float64)
    cdef Py_ssize_t n = w.shape[0], i
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] v = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] e = np.empty(n, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] f = np.empty(n, dtype=np.complex128)
    cdef double complex c = complex(cs)
    cdef double complex cc = c.conjugate()
    cdef double complex eith = cos(theta) + 1j * sin(theta)
    cdef double complex eithc = eith.conjugate()
    cdef double complex I = 1j
    cdef double complex opt, d, a_plus, x, mech, pref
    cdef double wi, s2k = sqrt(2.0 * kappa)
    with nogil:
        for i in range(n):
            wi = w[i]
            opt = (kappa - I * wi) * (kappa - I * wi) + delta * delta - 4.0 * gain * gain
            d = k_coupling + (wi * wi - omega_m * omega_m + I * gamma_m * wi) * opt
            a_plus = kappa - I * (wi + delta)
            x = a_plus * c - 2.0 * gain * eith * cc
            v[i] = -s2k * omega_m * omega_m * chi / d * I * x
            mech = -2.0 * omega_m * omega_m * omega_m * chi * chi / d * I * x
            pref = 2.0 * kappa / opt
            e[i] = pref * (mech * (a_plus * cc + 2.0 * gain * eithc * c) + a_plus) - 1.0
            f[i] = pref * (mech * ((kappa - I * (wi - delta)) * c + 2.0 * gain * eith * cc) + 2.0 * gain * eith)
    return v, e, f
