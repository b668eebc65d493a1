import cmath
import dataclasses
import math

import numpy as np
import pytest

from nmsplit import OperatingPointError, derive_constants, reference_params, solve_branches, steady_states
from nmsplit.steady_state import quintic_coefficients, quintic_residual, steady_state_at_delta

from conftest import point


def eq5_residual(ss, d, p):
    lhs = ss.c_s * (p.kappa**2 + ss.delta**2 - 4 * p.parametric_gain**2)
    rhs = (p.kappa - 1j * ss.delta + 2 * p.parametric_gain * cmath.exp(1j * p.parametric_phase)) * d.epsilon
    return abs(lhs - rhs) / abs(rhs)


def quintic_direct(p, d, delta0, x):
    """Self-consistency condition evaluated from its defining product form, not coefficients."""
    G = p.parametric_gain
    den = p.kappa**2 + x * x - 4 * G * G
    num2 = np.abs(p.kappa - 1j * x + 2 * G * np.exp(1j * p.parametric_phase)) ** 2
    return (delta0 - x) * den * den - 2 * p.omega_m * d.chi**2 * d.epsilon**2 * num2


@pytest.mark.parametrize("g,expected", [(0.0, 2.68e9), (1.3, 4.30e9), (1.45, 5.65e9)])
def test_photon_numbers(g, expected):
    _, _, ss = point(g)
    assert ss.photon_number == pytest.approx(expected, rel=0.01)


def test_invariants():
    p, d, ss = point(1.3)
    assert ss.p_s == 0.0
    assert ss.q_s == 2 * d.chi * ss.photon_number
    assert ss.photon_number == abs(ss.c_s) ** 2
    assert eq5_residual(ss, d, p) < 1e-10
    assert ss.branch_index == 0


def test_undriven_cavity_is_empty():
    p, d, ss = point(1.3, power_mw=0.0)
    assert ss.c_s == 0 and ss.q_s == 0


def test_divergence_floor():
    p = reference_params(parametric_gain_over_kappa=1.0)
    d = derive_constants(p)
    # kappa^2 + Delta^2 - 4G^2 = 0 at Delta^2 = 3 kappa^2
    with pytest.raises(OperatingPointError):
        steady_state_at_delta(p, d, math.sqrt(3) * p.kappa)


def test_coefficients_match_product_form():
    p = reference_params(parametric_gain_over_kappa=0.3, laser_power_mw=10.7, detuning_mode="bare")
    d = derive_constants(p)
    delta0 = 1.1 * p.omega_m
    xs = np.linspace(-2, 3, 11) * p.omega_m
    direct = quintic_direct(p, d, delta0, xs)
    poly = np.polyval(quintic_coefficients(p, d, delta0), xs)
    np.testing.assert_allclose(poly, direct, rtol=1e-9)


def test_zero_coupling_single_branch_at_bare_detuning():
    p = reference_params(detuning_mode="bare", detuning_over_omega_m=1.2, parametric_gain_over_kappa=0.3)
    d = dataclasses.replace(derive_constants(p), chi=0.0)
    branches = solve_branches(p, d, 1.2 * p.omega_m)
    assert len(branches) == 1
    assert branches[0].delta == pytest.approx(1.2 * p.omega_m, rel=1e-12)


def test_zero_coupling_at_threshold_drops_divergent_roots():
    # G = kappa/2 puts a double zero of kappa^2 + Delta^2 - 4G^2 at Delta = 0
    p = reference_params(detuning_mode="bare", detuning_over_omega_m=1.2, parametric_gain_over_kappa=0.5)
    d = dataclasses.replace(derive_constants(p), chi=0.0)
    assert [b.delta for b in solve_branches(p, d, 1.2 * p.omega_m)] == pytest.approx([1.2 * p.omega_m])


def test_weak_coupling_converges_to_effective_solution():
    p = reference_params(detuning_mode="bare", detuning_over_omega_m=1.2, parametric_gain_over_kappa=0.3)
    d = derive_constants(p)
    weak = dataclasses.replace(d, chi=d.chi * 1e-6)
    (branch,) = solve_branches(p, weak, 1.2 * p.omega_m)
    ref = steady_state_at_delta(p, weak, 1.2 * p.omega_m)
    assert abs(branch.c_s - ref.c_s) / abs(ref.c_s) < 1e-8


def test_low_power_single_branch():
    p = reference_params(laser_power_mw=0.6, detuning_mode="bare")
    d = derive_constants(p)
    for x in (0.9, 1.0, 1.1):
        assert len(solve_branches(p, d, x * p.omega_m)) == 1


def test_multistable_window_exists():
    p = reference_params(laser_power_mw=10.7, detuning_mode="bare")
    d = derive_constants(p)
    counts = {len(solve_branches(p, d, x * p.omega_m)) for x in np.linspace(0.0, 3.0, 61)}
    assert counts == {1, 3}


def test_branches_sorted_polished_and_consistent():
    p = reference_params(laser_power_mw=10.7, detuning_mode="bare", detuning_over_omega_m=1.1)
    d = derive_constants(p)
    branches = steady_states(p, d)
    assert len(branches) == 3
    assert [b.branch_index for b in branches] == [0, 1, 2]
    assert all(a.delta < b.delta for a, b in zip(branches, branches[1:]))
    for b in branches:
        assert quintic_residual(p, d, p.detuning_spec.delta0, b.delta) < 1e-10
        assert eq5_residual(b, d, p) < 1e-10
        # Delta = Delta0 - omega_m chi Q_s closes the loop
        shift = p.omega_m * d.chi * b.q_s
        assert b.delta + shift == pytest.approx(p.detuning_spec.delta0, rel=1e-10)


def test_branches_match_dense_scan():
    p = reference_params(laser_power_mw=10.7, detuning_mode="bare", parametric_gain_over_kappa=0.2)
    d = derive_constants(p)
    delta0 = 1.0 * p.omega_m
    xs = np.linspace(delta0 - 3 * p.omega_m, delta0, 200001)
    f = quintic_direct(p, d, delta0, xs)
    crossings = np.nonzero(np.sign(f[:-1]) != np.sign(f[1:]))[0]
    found = [b.delta for b in solve_branches(p, d, delta0)]
    assert len(found) == len(crossings)
    for x, i in zip(found, crossings):
        assert xs[i] <= x <= xs[i + 1]
