"""Shared fixtures and independent oracles for the test suite."""
import cmath
import dataclasses
import math
import sys

import numpy as np
import pytest

from nmsplit import derive_constants, reference_params, routh_hurwitz, steady_state_at_delta
from nmsplit.params import EffectiveDetuning


def point(G_over_kappa=0.0, power_mw=6.9, delta_over_wm=None, delta=None, theta=math.pi / 4, **over):
    """(p, d, ss) at an effective detuning; ``delta`` in rad/s wins over ``delta_over_wm``."""
    p = reference_params(parametric_gain_over_kappa=G_over_kappa, laser_power_mw=power_mw,
                     parametric_phase_rad=theta, **over)
    if delta is None:
        delta = (1.0 if delta_over_wm is None else delta_over_wm) * p.omega_m
    p = p.replace(detuning_spec=EffectiveDetuning(delta))
    d = derive_constants(p)
    return p, d, steady_state_at_delta(p, d, delta)


def fig8_point(power_mw, G_over_kappa=1.3):
    p = reference_params()
    G = G_over_kappa * p.kappa
    return point(G_over_kappa, power_mw, delta=math.sqrt(p.omega_m**2 + 4 * G * G))


def decoupled(p, d, delta=None):
    """Same parameters with the optomechanical coupling switched off (chi = 0)."""
    d0 = dataclasses.replace(d, chi=0.0)
    return d0, steady_state_at_delta(p, d0, p.detuning_spec.delta if delta is None else delta)


def random_admissible(rng, n, stable_only=False, max_tries=10000):
    """Random parameter sets inside the ranges the tool is meant for."""
    out = []
    tries = 0
    while len(out) < n and tries < max_tries:
        tries += 1
        pt = point(G_over_kappa=rng.uniform(0.0, 1.6), power_mw=rng.uniform(0.1, 60.0),
                   delta_over_wm=rng.uniform(0.8, 1.5), theta=rng.uniform(0.0, 2 * math.pi))
        if stable_only and not routh_hurwitz(pt[2], pt[1], pt[0]).stable:
            continue
        out.append(pt)
    assert len(out) == n
    return out


# -- resolvent oracle ---------------------------------------------------------

def complex_drift(ss, d, p):
    """Drift matrix in the (dQ, dP, dc, dc^dag) basis, straight from the linearized equations."""
    wm, g, k = p.omega_m, d.gamma_m, p.kappa
    G, th, chi, c, D = p.parametric_gain, p.parametric_phase, d.chi, ss.c_s, ss.delta
    return np.array([
        [0, wm, 0, 0],
        [-wm, -g, 2 * wm * chi * c.conjugate(), 2 * wm * chi * c],
        [1j * wm * chi * c, 0, -(k + 1j * D), 2 * G * cmath.exp(1j * th)],
        [-1j * wm * chi * c.conjugate(), 0, 2 * G * cmath.exp(-1j * th), -(k - 1j * D)],
    ], dtype=complex)


def resolvent_response(ss, d, p, w):
    """Responses of dQ and c_out to (xi(w), c_in(w), c_in^dag(-w)) by direct matrix inversion.

    Returns ``(q, out)``: q = (a, b, e) for dQ and out = (V, E, F) for dc_out.
    """
    M = complex_drift(ss, d, p)
    X = np.linalg.inv(-1j * w * np.eye(4) - M)
    s = math.sqrt(2 * p.kappa)
    q = (X[0, 1], s * X[0, 2], s * X[0, 3])
    out = (s * X[2, 1], 2 * p.kappa * X[2, 2] - 1, 2 * p.kappa * X[2, 3])
    return q, out


def oracle_sq(ss, d, p, w, sym_weight):
    """Symmetrized position spectrum from the resolvent and the noise correlators."""
    (a, b, e), _ = resolvent_response(ss, d, p, w)
    (am, bm, em), _ = resolvent_response(ss, d, p, -w)
    val = 2 * d.gamma_m / p.omega_m * sym_weight * a * am + 0.5 * (b * em + bm * e)
    return val.real


def oracle_output(ss, d, p, w, out_weight):
    """(S_cout, S_xout, S_yout) from resolvent coefficients, written as <X(-w) X(w)>."""
    _, (V, E, F) = resolvent_response(ss, d, p, w)
    _, (Vm, Em, Fm) = resolvent_response(ss, d, p, -w)

    W = 2 * d.gamma_m / p.omega_m * out_weight

    def corr(alpha, beta, gam, alpha_m, beta_m):
        return alpha_m * alpha * W + beta_m * gam

    # operator = alpha xi(w) + beta c_in(w) + gam c_in^dag(-w)
    c = (V, E, F)
    cm = (Vm, Em, Fm)
    dag = (np.conj(Vm), np.conj(Fm), np.conj(Em))  # dc_out^dag(w)
    dag_m = (np.conj(V), np.conj(F), np.conj(E))
    s_c = corr(*c, *dag_m[:2])
    x = tuple(u + v for u, v in zip(c, dag))
    xm = tuple(u + v for u, v in zip(cm, dag_m))
    y = tuple(1j * (v - u) for u, v in zip(c, dag))
    ym = tuple(1j * (v - u) for u, v in zip(cm, dag_m))
    return s_c.real, corr(*x, *xm[:2]).real, corr(*y, *ym[:2]).real


def brownian_sq(p, d, w, sym_weight):
    wm, g = p.omega_m, d.gamma_m
    return 2 * g * wm * sym_weight / ((w * w - wm * wm) ** 2 + g * g * w * w)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion, when that module ran."""
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
