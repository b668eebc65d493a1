"""Polynomial helpers: Durand-Kerner roots, characteristic polynomials, root ordering."""
import numpy as np

from . import kernels
from .errors import RootFindingError

MAX_ITER = 1000


def polynomial_roots(coeffs, maxiter=MAX_ITER):
    """All complex roots of a polynomial given by descending coefficients.

    Raises RootFindingError if the simultaneous iteration does not settle
    within ``maxiter`` sweeps.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    if not np.all(np.isfinite(coeffs)):
        raise RootFindingError("non-finite polynomial coefficients")
    roots, iterations, converged = kernels.durand_kerner(coeffs, 1e-14, maxiter)
    if not converged:
        raise RootFindingError(f"Durand-Kerner did not converge in {iterations} iterations")
    return np.asarray(roots, dtype=complex)


def charpoly(m):
    """Coefficients of det(s I - M), descending, by the Faddeev-LeVerrier recursion."""
    m = np.asarray(m)
    n = m.shape[0]
    coeffs = [1.0 + 0j]
    ident = np.eye(n)
    mk = np.zeros_like(m, dtype=complex)
    for k in range(1, n + 1):
        mk = m @ mk + coeffs[-1] * ident
        coeffs.append(-np.trace(m @ mk) / k)
    return np.array(coeffs, dtype=complex)


def sort_roots(roots):
    """Descending real part, ties broken by ascending imaginary part."""
    roots = np.asarray(roots, dtype=complex)
    scale = max(float(np.max(np.abs(roots))), 1e-300) if roots.size else 1.0
    # quantize Re so roots equal to rounding noise count as ties
    key_re = np.round(roots.real / scale, 12)
    order = np.lexsort((roots.imag, -key_re))
    return roots[order]


def match_multisets(a, b):
    """Pair each root of ``a`` with a distinct root of ``b``; returns max relative mismatch."""
    a = list(np.asarray(a, dtype=complex))
    b = list(np.asarray(b, dtype=complex))
    if len(a) != len(b):
        raise ValueError("multisets differ in size")
    worst = 0.0
    for x in a:
        j = min(range(len(b)), key=lambda k: abs(b[k] - x))
        y = b.pop(j)
        worst = max(worst, abs(x - y) / max(abs(x), abs(y), 1e-300))
    return worst
