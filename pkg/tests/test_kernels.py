"""Compiled and pure-Python kernels must agree; root finding sanity."""
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nmsplit import _pykernels, kernels
from nmsplit.errors import RootFindingError
from nmsplit.roots import charpoly, match_multisets, polynomial_roots, sort_roots

from conftest import point

try:
    from nmsplit import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@needs_ext
def test_durand_kerner_parity():
    coeffs = np.array([1.0, -2.5 + 1j, 3.0, 0.5 - 2j, -1.25])
    r_c, it_c, ok_c = _ckernels.durand_kerner(coeffs)
    r_p, it_p, ok_p = _pykernels.durand_kerner(coeffs)
    assert ok_c and ok_p
    assert match_multisets(r_c, r_p) < 1e-12


@needs_ext
def test_grid_kernel_parity():
    p, d, ss = point(1.3)
    from nmsplit.linear_dynamics import coupling_bracket
    from nmsplit.spectra import radiation_bracket_const, default_noise
    w = np.linspace(0.2, 1.8, 401) * p.omega_m
    wc = default_noise(p).symmetric_weight(w)
    kc = 4 * p.omega_m**3 * d.chi**2 * coupling_bracket(ss, p).real
    args = (w, wc, p.omega_m, d.gamma_m, p.kappa, ss.delta, p.parametric_gain, kc,
            8 * p.omega_m**2 * d.chi**2 * p.kappa, ss.photon_number, radiation_bracket_const(ss, p).real)
    np.testing.assert_allclose(_ckernels.sq_grid(*args), _pykernels.sq_grid(*args), rtol=1e-13)
    vargs = (w, p.omega_m, d.gamma_m, p.kappa, ss.delta, p.parametric_gain, p.parametric_phase,
             d.chi, ss.c_s, kc)
    for a, b in zip(_ckernels.vef_grid(*vargs), _pykernels.vef_grid(*vargs)):
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-15)


@needs_ext
def test_newton_parity():
    coeffs = [1.0, 0.0, -2.0]
    assert _ckernels.newton_real(coeffs, 1.0) == pytest.approx(np.sqrt(2), rel=1e-15)
    assert _pykernels.newton_real(coeffs, 1.0) == pytest.approx(np.sqrt(2), rel=1e-15)


def test_known_roots():
    target = np.array([3.0, -1.0 + 2j, -1.0 - 2j, 0.5])
    roots = polynomial_roots(np.poly(target))
    assert match_multisets(roots, target) < 1e-12


def test_double_root():
    roots = polynomial_roots(np.poly([2.0, 2.0, -1.0, 5.0]))
    assert match_multisets(roots, [2.0, 2.0, -1.0, 5.0]) < 1e-7


def test_zero_polynomial_rejected():
    with pytest.raises((ValueError, RootFindingError)):
        polynomial_roots([0.0, 1.0])


def test_charpoly_matches_numpy():
    rng = np.random.default_rng(1)
    m = rng.normal(size=(4, 4))
    np.testing.assert_allclose(charpoly(m), np.poly(m), rtol=1e-12, atol=1e-12)


def test_sort_roots_order():
    r = sort_roots(np.array([1 - 1j, 2 + 0j, 1 + 1j, -3j]))
    assert list(r) == [2 + 0j, 1 - 1j, 1 + 1j, -3j]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=5))
def test_roots_reconstruct_polynomial(zs):
    coeffs = np.poly(zs)
    roots = polynomial_roots(coeffs)
    # backward error: each root is an exact root of a nearby polynomial
    # radius floored at a small fraction of the root bound so roots at zero are judged fairly
    bound = max(max(abs(z) for z in zs), 1.0)
    powers = np.arange(len(coeffs) - 1, -1, -1)
    for r in roots:
        scale = np.sum(np.abs(coeffs) * max(abs(r), 1e-6 * bound) ** powers)
        assert abs(np.polyval(coeffs, r)) <= 1e-12 * scale
    assert len(roots) == len(zs)
