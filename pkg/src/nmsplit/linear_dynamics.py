"""Linearized fluctuation dynamics around a steady state.

State vector ordering is (dQ, dP, dx, dy) with the cavity quadratures
dx = dc + dc^dag and dy = i(dc^dag - dc). Normal-mode frequencies are the
eigenvalues of iA, equivalently the complex zeroes of the determinant
function ``d(omega)``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EstimateInvalid
from .params import DerivedConstants, SystemParams
from .roots import charpoly, polynomial_roots, sort_roots
from .steady_state import SteadyState

DEGENERACY_RTOL = 1e-6


def coupling_bracket(ss: SteadyState, p: SystemParams) -> complex:
    """|c_s|^2 Delta + iG(c_s^2 e^{-i theta} - c_s*^2 e^{i theta}), analytically real."""
    c = ss.c_s
    e = cmath.exp(1j * p.parametric_phase)
    return ss.photon_number * ss.delta + 1j * p.parametric_gain * ((c * c) * e.conjugate() - (c.conjugate() * c.conjugate()) * e)


def _real_bracket(ss, p):
    return coupling_bracket(ss, p).real


def drift_matrix(ss: SteadyState, d: DerivedConstants, p: SystemParams) -> np.ndarray:
    wm, chi, k = p.omega_m, d.chi, p.kappa
    G, th, delta = p.parametric_gain, p.parametric_phase, ss.delta
    c = ss.c_s
    re_part = wm * chi * (c + c.conjugate()).real  # omega_m chi (c_s + c_s*)
    im_part = (-1j * wm * chi * (c - c.conjugate())).real  # -i omega_m chi (c_s - c_s*)
    return np.array([
        [0.0, wm, 0.0, 0.0],
        [-wm, -d.gamma_m, re_part, im_part],
        [-im_part, 0.0, 2 * G * math.cos(th) - k, 2 * G * math.sin(th) + delta],
        [re_part, 0.0, 2 * G * math.sin(th) - delta, -(2 * G * math.cos(th) + k)],
    ])


def eigenvalues_iA(A) -> np.ndarray:
    """Eigenvalues of iA from the roots of the characteristic quartic of A."""
    A = np.asarray(A, dtype=float)
    scale = float(np.max(np.abs(A))) or 1.0
    s = polynomial_roots(charpoly(A / scale)) * scale
    return sort_roots(1j * s)


@dataclass(frozen=True)
class StabilityReport:
    rh_values: tuple
    rh_pass: tuple
    eigenvalues_A: np.ndarray
    stable: bool
    eigen_stable: bool

    @property
    def consistent(self) -> bool:
        return self.stable == self.eigen_stable

    @property
    def failing(self) -> list:
        """1-based indices of the violated conditions."""
        return [i + 1 for i, ok in enumerate(self.rh_pass) if not ok]


def routh_hurwitz_values(ss: SteadyState, d: DerivedConstants, p: SystemParams) -> tuple:
    k, g, wm, chi = p.kappa, d.gamma_m, p.omega_m, d.chi
    G, delta = p.parametric_gain, ss.delta
    br = _real_bracket(ss, p)
    s = k * k - 4 * G * G + delta * delta
    r1 = 2 * k * (s + 2 * k * g) + g * (2 * k * g + wm * wm)
    r2 = (2 * wm**3 * chi**2 * (2 * k + g) ** 2 * br
          + k * g * (s * s + (2 * k * g + g * g) * s
                     + wm * wm * (2 * (k * k + 4 * G * G - delta * delta) + wm * wm + 2 * k * g)))
    r3 = s - 4 * wm * chi**2 * br
    return (r1, r2, r3)


def routh_hurwitz(ss: SteadyState, d: DerivedConstants, p: SystemParams) -> StabilityReport:
    values = routh_hurwitz_values(ss, d, p)
    passes = tuple(bool(v > 0) for v in values)
    eig_A = -1j * eigenvalues_iA(drift_matrix(ss, d, p))
    return StabilityReport(
        rh_values=values,
        rh_pass=passes,
        eigenvalues_A=eig_A,
        stable=all(passes),
        eigen_stable=bool(np.max(eig_A.real) < 0),
    )


def d_coefficients(ss: SteadyState, d: DerivedConstants, p: SystemParams) -> np.ndarray:
    """Descending coefficients of d(omega) as a quartic in omega."""
    k, g, wm = p.kappa, d.gamma_m, p.omega_m
    omega_c2 = ss.delta**2 - 4 * p.parametric_gain**2
    mech = np.array([1.0, 1j * g, -wm * wm])
    opt = np.array([-1.0, -2j * k, k * k + omega_c2])
    coeffs = np.polymul(mech, opt).astype(complex)
    coeffs[-1] += 4 * wm**3 * d.chi**2 * coupling_bracket(ss, p)
    return coeffs


def d_omega(ss: SteadyState, d: DerivedConstants, p: SystemParams, omega):
    k, wm, G = p.kappa, p.omega_m, p.parametric_gain
    w = np.asarray(omega, dtype=complex)
    val = (4 * wm**3 * d.chi**2 * coupling_bracket(ss, p)
           + (w * w - wm * wm + 1j * d.gamma_m * w) * ((k - 1j * w) ** 2 + ss.delta**2 - 4 * G * G))
    return val if val.ndim else complex(val)


def d_relative_residual(coeffs, root) -> float:
    coeffs = np.asarray(coeffs, dtype=complex)
    powers = np.abs(root) ** np.arange(len(coeffs) - 1, -1, -1)
    scale = float(np.sum(np.abs(coeffs) * powers))
    return abs(np.polyval(coeffs, root)) / scale if scale > 0 else 0.0


@dataclass(frozen=True)
class ModeAnalysis:
    d_roots: np.ndarray
    positive_branch: np.ndarray
    omega_plus: Optional[float]
    omega_minus: Optional[float]
    omega_plus_refined: Optional[complex]
    omega_minus_refined: Optional[complex]
    g_squared: float
    phi: float
    estimate_note: Optional[str]
    degenerate: bool
    max_residual: float


def g_squared(ss: SteadyState, d: DerivedConstants, p: SystemParams) -> float:
    phi = cmath.phase(ss.c_s) if ss.photon_number > 0 else 0.0
    return p.omega_m * d.chi**2 * ss.photon_number * (
        ss.delta + 2 * p.parametric_gain * math.sin(p.parametric_phase - 2 * phi))


def splitting_estimate(ss: SteadyState, d: DerivedConstants, p: SystemParams):
    """Lossless estimate of the two normal-mode frequencies.

    Returns ``(omega_plus, omega_minus, g_squared)``; raises
    :class:`EstimateInvalid` outside the regime where the estimate is real.
    """
    wm = p.omega_m
    g2 = g_squared(ss, d, p)
    if g2 < 0:
        raise EstimateInvalid(f"estimate invalid: g^2 = {g2:.3e} < 0")
    cav2 = ss.delta**2 - 4 * p.parametric_gain**2
    mean = (wm * wm + cav2) / 2
    rad = ((wm * wm - cav2) / 2) ** 2 + 4 * wm * wm * g2
    root = math.sqrt(rad)
    hi, lo = mean + root, mean - root
    if lo < 0:
        raise EstimateInvalid(f"estimate invalid: omega_-^2 = {lo:.3e} < 0")
    return math.sqrt(hi), math.sqrt(lo), g2


def refined_splitting(ss: SteadyState, d: DerivedConstants, p: SystemParams) -> np.ndarray:
    """Roots with positive real part of d(omega) with i gamma_m omega and kappa^2 dropped
    but the -2i kappa omega cross term kept. Sorted by descending real part."""
    g2 = g_squared(ss, d, p)
    if g2 < 0:
        raise EstimateInvalid(f"estimate invalid: g^2 = {g2:.3e} < 0")
    wm, k = p.omega_m, p.kappa
    cav2 = ss.delta**2 - 4 * p.parametric_gain**2
    coeffs = np.polymul([1.0, 0.0, -wm * wm], [-1.0, -2j * k, cav2]).astype(complex)
    coeffs[-1] += 4 * wm * wm * g2
    roots = sort_roots(polynomial_roots(coeffs))
    pos = roots[roots.real > 0]
    if len(pos) < 2:
        raise EstimateInvalid("estimate invalid: fewer than two roots with positive real part")
    return pos[:2]


def _is_degenerate(roots):
    for i in range(len(roots)):
        for j in range(i + 1, len(roots)):
            a, b = roots[i], roots[j]
            if abs(a - b) < DEGENERACY_RTOL * max(abs(a), abs(b), 1e-300):
                return True
    return False


def roots_of_d(ss: SteadyState, d: DerivedConstants, p: SystemParams) -> ModeAnalysis:
    coeffs = d_coefficients(ss, d, p)
    roots = sort_roots(polynomial_roots(coeffs))
    residual = max(d_relative_residual(coeffs, r) for r in roots)
    pos = roots[roots.real > 0]
    if len(pos) != 2:
        pos = roots[:2]
    phi = cmath.phase(ss.c_s) if ss.photon_number > 0 else 0.0

    note = None
    w_plus = w_minus = None
    r_plus = r_minus = None
    g2 = g_squared(ss, d, p)
    try:
        w_plus, w_minus, g2 = splitting_estimate(ss, d, p)
        r_plus, r_minus = (complex(x) for x in refined_splitting(ss, d, p))
    except EstimateInvalid as exc:
        note = str(exc)
    return ModeAnalysis(
        d_roots=roots,
        positive_branch=pos,
        omega_plus=w_plus,
        omega_minus=w_minus,
        omega_plus_refined=r_plus,
        omega_minus_refined=r_minus,
        g_squared=g2,
        phi=phi,
        estimate_note=note,
        degenerate=_is_degenerate(roots),
        max_residual=residual,
    )
