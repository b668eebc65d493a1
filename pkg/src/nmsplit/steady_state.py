"""Classical operating points of the driven cavity-mirror system.

With the effective detuning known the intracavity amplitude is closed form.
With only the bare detuning Delta0 known, the effective detuning solves

    (Delta0 - Delta) (kappa^2 + Delta^2 - 4 G^2)^2
        = 2 omega_m chi^2 epsilon^2 |kappa - i Delta + 2 G e^{i theta}|^2,

a real quintic in Delta with up to five real roots (multistability).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import NMSplitError, OperatingPointError
from .params import BareDetuning, DerivedConstants, EffectiveDetuning, SystemParams


@dataclass(frozen=True)
class SteadyState:
    delta: float
    c_s: complex
    q_s: float
    p_s: float
    photon_number: float
    branch_index: int = 0


def divergence_floor(p: SystemParams) -> float:
    return 1e-9 * (p.kappa**2 + p.omega_m**2)


def steady_state_at_delta(p: SystemParams, d: DerivedConstants, delta: float,
                          branch_index: int = 0) -> SteadyState:
    """Closed-form steady state for a given effective detuning."""
    G = p.parametric_gain
    denom = p.kappa**2 + delta**2 - 4.0 * G**2
    if abs(denom) < divergence_floor(p):
        raise OperatingPointError(
            f"kappa^2 + Delta^2 - 4G^2 = {denom:.3e} is below the divergence floor; "
            "the parametric oscillation threshold is reached")
    num = p.kappa - 1j * delta + 2.0 * G * cmath.exp(1j * p.parametric_phase)
    c_s = complex(num / denom * d.epsilon)
    n = abs(c_s) ** 2
    return SteadyState(
        delta=float(delta),
        c_s=c_s,
        q_s=2.0 * d.chi * n,
        p_s=0.0,
        photon_number=n,
        branch_index=branch_index,
    )


def quintic_coefficients(p: SystemParams, d: DerivedConstants, delta0: float) -> np.ndarray:
    """Descending coefficients in Delta of
    (Delta0 - Delta)(kappa^2 + Delta^2 - 4G^2)^2 - K |kappa - i Delta + 2G e^{i theta}|^2."""
    G = p.parametric_gain
    th = p.parametric_phase
    a = p.kappa**2 - 4.0 * G**2
    K = 2.0 * p.omega_m * d.chi**2 * d.epsilon**2
    # |kappa - i Delta + 2G e^{i theta}|^2 = Delta^2 - 4 G sin(theta) Delta + b
    b = (p.kappa + 2.0 * G * math.cos(th)) ** 2 + 4.0 * G**2 * math.sin(th) ** 2
    return np.array([
        -1.0,
        delta0,
        -2.0 * a,
        2.0 * a * delta0 - K,
        -a * a + 4.0 * K * G * math.sin(th),
        a * a * delta0 - K * b,
    ])


def quintic_residual(p: SystemParams, d: DerivedConstants, delta0: float, delta: float) -> float:
    """Relative residual of the detuning self-consistency condition at ``delta``."""
    G = p.parametric_gain
    lhs = (delta0 - delta) * (p.kappa**2 + delta**2 - 4.0 * G**2) ** 2
    rhs = 2.0 * p.omega_m * d.chi**2 * d.epsilon**2 * abs(
        p.kappa - 1j * delta + 2.0 * G * cmath.exp(1j * p.parametric_phase)) ** 2
    # measured against the terms before the Delta0 - Delta cancellation
    scale = (abs(delta0) + abs(delta)) * (p.kappa**2 + delta**2 - 4.0 * G**2) ** 2 + abs(rhs)
    return abs(lhs - rhs) / scale if scale > 0 else 0.0


def _companion_roots(coeffs):
    c = np.asarray(coeffs, dtype=float)
    c = c / c[0]
    n = len(c) - 1
    comp = np.zeros((n, n))
    comp[0, :] = -c[1:]
    comp[1:, :-1] = np.eye(n - 1)
    return np.linalg.eigvals(comp)


def solve_branches(p: SystemParams, d: DerivedConstants, delta0: float) -> list[SteadyState]:
    """All real effective detunings for bare detuning ``delta0``, as steady states.

    Sorted by Delta ascending; ``branch_index`` follows that order.
    """
    scale = p.omega_m
    coeffs = quintic_coefficients(p, d, delta0)
    # roots in units of omega_m keep the companion matrix well scaled
    scaled = coeffs * scale ** np.arange(5, -1, -1) / scale**5
    candidates = _companion_roots(scaled)
    im_tol = 1e-6 * max(p.kappa, p.omega_m) / scale
    real_roots = []
    for r in candidates:
        if abs(r.imag) >= im_tol:
            continue
        xs = kernels.newton_real(scaled, float(r.real))
        # polishing must stay with its own eigenvalue, not wander onto another root
        if abs(xs - r.real) > 1e-4 * max(1.0, abs(r.real)):
            continue
        x = xs * scale
        # a near-real complex pair that polishes to nothing real is not a branch
        if quintic_residual(p, d, delta0, x) >= 1e-10:
            continue
        # zeros of (kappa^2 + Delta^2 - 4G^2)^2 solve the polynomial but not the field equation
        if abs(p.kappa**2 + x * x - 4.0 * p.parametric_gain**2) < divergence_floor(p):
            continue
        real_roots.append(x)
    if not real_roots:
        raise NMSplitError("no real root of the detuning quintic found")
    real_roots.sort()
    branches = []
    for i, delta in enumerate(real_roots):
        branches.append(steady_state_at_delta(p, d, delta, branch_index=i))
    return branches


def steady_states(p: SystemParams, d: DerivedConstants) -> list[SteadyState]:
    """Operating point(s) implied by the detuning specification of ``p``."""
    spec = p.detuning_spec
    if isinstance(spec, EffectiveDetuning):
        return [steady_state_at_delta(p, d, spec.delta)]
    assert isinstance(spec, BareDetuning)
    return solve_branches(p, d, spec.delta0)
