"""Fluctuation spectra of the mirror position and of the output field.

Conventions
-----------
``sq_spectrum`` is the symmetrized position spectrum; the output-field
spectra (``Scout``, ``Sxout``, ``Syout``) are the non-symmetrized ones. Each
is evaluated as its own closed form; the two conventions are not reconciled.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .errors import UnstableOperatingPoint
from .linear_dynamics import coupling_bracket, routh_hurwitz
from .params import CONSTANTS, DerivedConstants, PhysicalConstants, SystemParams
from .steady_state import SteadyState

EXACT = "exact"
HIGH_T = "hight"
KINDS = ("SQ", "Scout", "Sxout", "Syout")
OUTPUT_KINDS = ("Scout", "Sxout", "Syout")
REALITY_RTOL = 1e-12


@dataclass(frozen=True)
class NoiseModel:
    mode: str
    temperature: float

    def __post_init__(self):
        if self.mode not in (EXACT, HIGH_T):
            raise ValueError(f"unknown noise mode {self.mode!r}")

    def symmetric_weight(self, omega, consts: PhysicalConstants = CONSTANTS):
        """omega * coth(hbar omega / 2 k_B T)."""
        w = np.asarray(omega, dtype=float)
        T = self.temperature
        if T == 0:
            return np.abs(w)
        scale = 2.0 * consts.k_B * T / consts.hbar
        if self.mode == HIGH_T:
            return np.full_like(w, scale)
        x = w / scale
        small = np.abs(x) < 1e-8
        xs = np.where(small, 1.0, x)
        return scale * np.where(small, 1.0, xs / np.tanh(xs))

    def output_weight(self, omega, consts: PhysicalConstants = CONSTANTS):
        """omega * [coth(hbar omega / 2 k_B T) - 1]."""
        w = np.asarray(omega, dtype=float)
        T = self.temperature
        if T == 0:
            return np.abs(w) - w
        scale = 2.0 * consts.k_B * T / consts.hbar
        if self.mode == HIGH_T:
            return scale - w
        x = w / scale
        small = np.abs(x) < 1e-12
        xs = np.where(small, 1.0, x)
        with np.errstate(over="ignore"):
            val = 2.0 * xs / np.expm1(2.0 * xs)
        return scale * np.where(small, 1.0, val)


def default_noise(p: SystemParams, consts: PhysicalConstants = CONSTANTS) -> NoiseModel:
    if p.temperature > 0 and consts.k_B * p.temperature / (consts.hbar * p.omega_m) > 100:
        return NoiseModel(HIGH_T, p.temperature)
    return NoiseModel(EXACT, p.temperature)


def default_grid(p: SystemParams, n: int = 4001, lo: float = 0.2, hi: float = 1.8) -> np.ndarray:
    """Uniform grid over omega/omega_m in [lo, hi], in rad/s."""
    return np.linspace(lo, hi, n) * p.omega_m


@dataclass(frozen=True)
class Peak:
    position: float
    height: float
    fwhm: float
    prominence: float


@dataclass(frozen=True)
class SpectrumResult:
    kind: str
    grid: np.ndarray
    values: np.ndarray
    peaks: list
    operating_point: SteadyState
    gamma_m: float

    @property
    def scaled(self) -> np.ndarray:
        """values * gamma_m, the normalization used for the position-spectrum figures."""
        return self.values * self.gamma_m


@dataclass(frozen=True)
class OutputCoefficients:
    v: complex
    e: complex
    f: complex


def _check_grid(grid):
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ValueError("frequency grid must be a nonempty 1-D array")
    if g.size > 1 and not np.all(np.diff(g) > 0):
        raise ValueError("frequency grid must be strictly increasing")
    return g


def _require_stable(ss, d, p):
    report = routh_hurwitz(ss, d, p)
    if not report.stable:
        raise UnstableOperatingPoint(
            f"operating point is unstable (conditions {report.failing} violated); "
            "no stationary spectrum exists")


def radiation_bracket_const(ss: SteadyState, p: SystemParams) -> complex:
    """2G e^{i theta} c_s*^2 (kappa - i Delta) + 2G e^{-i theta} c_s^2 (kappa + i Delta)."""
    e = cmath.exp(1j * p.parametric_phase)
    c = ss.c_s
    g2 = 2.0 * p.parametric_gain
    t1 = ((g2 * e) * (c.conjugate() * c.conjugate())) * complex(p.kappa, -ss.delta)
    t2 = ((g2 * e.conjugate()) * (c * c)) * complex(p.kappa, ss.delta)
    return t1 + t2


def bracket_residues(ss: SteadyState, p: SystemParams) -> dict:
    """Relative imaginary residue of the analytically real bracketed combinations."""
    b = coupling_bracket(ss, p)
    r = radiation_bracket_const(ss, p)
    # omega = 0 gives the smallest radiation bracket on any grid
    full = (p.kappa**2 + ss.delta**2 + 4 * p.parametric_gain**2) * ss.photon_number + r
    return {
        "coupling": abs(b.imag) / abs(b) if b != 0 else 0.0,
        "radiation": abs(full.imag) / abs(full) if full != 0 else 0.0,
    }


def _assert_real(residues):
    for name, value in residues.items():
        if value > REALITY_RTOL:
            raise ArithmeticError(f"{name} bracket has imaginary residue {value:.2e}")


def sq_spectrum(ss: SteadyState, d: DerivedConstants, p: SystemParams, grid=None,
                noise: Optional[NoiseModel] = None, check_stability: bool = True,
                rel_prominence: float = 0.05) -> SpectrumResult:
    """Symmetrized mirror-position spectrum S_Q on ``grid`` (rad/s)."""
    grid = _check_grid(default_grid(p) if grid is None else grid)
    noise = noise or default_noise(p)
    if check_stability:
        _require_stable(ss, d, p)
    _assert_real(bracket_residues(ss, p))
    wm = p.omega_m
    values = kernels.sq_grid(
        grid,
        noise.symmetric_weight(grid),
        wm,
        d.gamma_m,
        p.kappa,
        ss.delta,
        p.parametric_gain,
        4 * wm**3 * d.chi**2 * coupling_bracket(ss, p).real,
        8 * wm**2 * d.chi**2 * p.kappa,
        ss.photon_number,
        radiation_bracket_const(ss, p).real,
    )
    values = np.asarray(values, dtype=float)
    return SpectrumResult("SQ", grid, values, find_peaks(grid, values, rel_prominence), ss, d.gamma_m)


def _vef(ss, d, p, omega):
    return kernels.vef_grid(
        np.atleast_1d(np.asarray(omega, dtype=float)),
        p.omega_m,
        d.gamma_m,
        p.kappa,
        ss.delta,
        p.parametric_gain,
        p.parametric_phase,
        d.chi,
        ss.c_s,
        4 * p.omega_m**3 * d.chi**2 * coupling_bracket(ss, p).real,
    )


def output_coefficients(ss: SteadyState, d: DerivedConstants, p: SystemParams, omega: float) -> OutputCoefficients:
    v, e, f = _vef(ss, d, p, [omega])
    return OutputCoefficients(complex(v[0]), complex(e[0]), complex(f[0]))


def output_spectra_values(ss, d, p, grid, noise, which=OUTPUT_KINDS) -> dict:
    """Raw output-field spectra as {kind: values}; no stability check, no peaks."""
    grid = np.asarray(grid, dtype=float)
    v, e, f = _vef(ss, d, p, grid)
    vm, em, fm = _vef(ss, d, p, -grid)
    weight = 2.0 * (d.gamma_m / p.omega_m) * noise.output_weight(grid)
    out = {}
    for kind in which:
        if kind == "Scout":
            s = np.conj(v) * v * weight + np.conj(f) * f
        elif kind == "Sxout":
            s = ((vm + np.conj(v)) * (v + np.conj(vm)) * weight
                 + (em + np.conj(f)) * (f + np.conj(em)))
        elif kind == "Syout":
            s = (-(np.conj(v) - vm) * (np.conj(vm) - v) * weight
                 - (np.conj(f) - em) * (np.conj(em) - f))
        else:
            raise ValueError(f"unknown output spectrum {kind!r}")
        mag = np.max(np.abs(s)) if s.size else 0.0
        if mag > 0 and np.max(np.abs(s.imag)) > REALITY_RTOL * mag:
            raise ArithmeticError(f"{kind} has a non-negligible imaginary part")
        out[kind] = s.real
    return out


def output_spectra(ss: SteadyState, d: DerivedConstants, p: SystemParams, grid=None,
                   noise: Optional[NoiseModel] = None, which: Sequence[str] = OUTPUT_KINDS,
                   check_stability: bool = True, rel_prominence: float = 0.05) -> list:
    grid = _check_grid(default_grid(p) if grid is None else grid)
    noise = noise or default_noise(p)
    if check_stability:
        _require_stable(ss, d, p)
    values = output_spectra_values(ss, d, p, grid, noise, which)
    return [SpectrumResult(k, grid, values[k], find_peaks(grid, values[k], rel_prominence), ss, d.gamma_m)
            for k in which]


def compute_spectra(ss, d, p, kinds, grid=None, noise=None, rel_prominence=0.05) -> dict:
    """Requested spectra keyed by kind (stability enforced)."""
    out = {}
    if "SQ" in kinds:
        out["SQ"] = sq_spectrum(ss, d, p, grid, noise, rel_prominence=rel_prominence)
    rest = [k for k in kinds if k != "SQ"]
    if rest:
        for res in output_spectra(ss, d, p, grid, noise, rest, rel_prominence=rel_prominence):
            out[res.kind] = res
    return out


# -- peaks -------------------------------------------------------------------

def _prominence(y, i):
    """Topographic prominence of sample ``i``.

    Each side is walked until higher ground; a side that reaches the grid
    edge first sets no col. With no col on either side the peak is measured
    from the lowest sample.
    """
    n = len(y)
    h = y[i]
    cols = []
    lowest = h
    for step in (-1, 1):
        side_min = h
        j = i + step
        while 0 <= j < n and y[j] <= h:
            side_min = min(side_min, y[j])
            j += step
        lowest = min(lowest, side_min)
        if 0 <= j < n:
            cols.append(side_min)
    return h - (max(cols) if cols else lowest)


def _crossing(x, y, i, half, step):
    j = i
    n = len(y)
    while 0 <= j + step < n:
        k = j + step
        if y[k] < half:
            # linear interpolation between j and k
            t = (y[j] - half) / (y[j] - y[k])
            return x[j] + t * (x[k] - x[j])
        j = k
    return None


def find_peaks(grid, values, rel_prominence: float = 0.05) -> list:
    """Strict local maxima with prominence above ``rel_prominence`` * global max.

    Position and height are refined with a 3-point parabola, the FWHM is
    measured between linearly interpolated half-height crossings.
    """
    x = np.asarray(grid, dtype=float)
    y = np.asarray(values, dtype=float)
    if len(y) < 5:
        return []
    top = float(np.max(y))
    if not top > 0:
        return []
    threshold = rel_prominence * top
    peaks = []
    for i in range(1, len(y) - 1):
        if not (y[i] > y[i - 1] and y[i] > y[i + 1]):
            continue
        prom = _prominence(y, i)
        if prom < threshold:
            continue
        x0, x1, x2 = x[i - 1], x[i], x[i + 1]
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        denom = (x0 - x1) * (x0 - x2) * (x1 - x2)
        a = (x2 * (y1 - y0) + x1 * (y0 - y2) + x0 * (y2 - y1)) / denom
        b = (x2 * x2 * (y0 - y1) + x1 * x1 * (y2 - y0) + x0 * x0 * (y1 - y2)) / denom
        pos, height = x1, y1
        if a < 0:
            xv = -b / (2 * a)
            if x0 <= xv <= x2:
                pos = xv
                height = y1 + a * (xv - x1) * (xv - x1) + (2 * a * x1 + b) * (xv - x1)
        half = height / 2
        left = _crossing(x, y, i, half, -1)
        right = _crossing(x, y, i, half, +1)
        if left is not None and right is not None:
            fwhm = right - left
        elif left is not None:
            fwhm = 2 * (pos - left)
        elif right is not None:
            fwhm = 2 * (right - pos)
        else:
            fwhm = x[-1] - x[0]
        peaks.append(Peak(float(pos), float(height), float(fwhm), float(prom)))
    return peaks


def peak_separation(peaks: Sequence[Peak]) -> float:
    """Distance between the two most prominent peaks; 0 with fewer than two."""
    if len(peaks) < 2:
        return 0.0
    best = sorted(peaks, key=lambda pk: pk.prominence, reverse=True)[:2]
    return abs(best[0].position - best[1].position)
