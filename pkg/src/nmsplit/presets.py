"""Turnkey reproductions of the root-trajectory and spectrum figures.

fig2/fig3  normal-mode roots vs parametric gain at 6.9 and 10.7 mW, Delta = omega_m
fig4-fig7  S_Q, S_cout, S_xout, S_yout for G/kappa in {0, 1.3, 1.45}, Delta = omega_m, 6.9 mW
fig8       S_Q for 0.6, 6.9, 10.7 mW at G = 1.3 kappa, Delta = sqrt(omega_m^2 + 4 G^2)
fig9       S_Q for 0.6, 6.9, 10.7 mW at G = 0, Delta = omega_m
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .params import EffectiveDetuning, SystemParams, derive_constants, reference_params
from .spectra import NoiseModel, compute_spectra, default_noise, peak_separation
from .steady_state import steady_state_at_delta
from .svgplot import line_chart
from .sweep import GridSpec, SweepSpec, columns, run_sweep, write_csv, write_manifest

PRESETS = ("fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9")
# G/kappa in [0, 1.6] plus the gain used by the spectrum figures
ROOT_GAINS = tuple(sorted({round(0.02 * i, 12) for i in range(81)} | {1.45}))
ROOT_POWERS = (6.9, 10.7)
GAIN_CURVES = (0.0, 1.3, 1.45)
POWER_CURVES = (0.6, 6.9, 10.7)
SPECTRUM_OF = {"fig4": "SQ", "fig5": "Scout", "fig6": "Sxout", "fig7": "Syout", "fig8": "SQ", "fig9": "SQ"}
# the weaker member of the 6.9 mW doublet in the power series is ~4% of the main peak
PROMINENCE = {"fig4": 0.05, "fig5": 0.05, "fig6": 0.05, "fig7": 0.05, "fig8": 0.01, "fig9": 0.01}


@dataclass(frozen=True)
class Curve:
    label: str
    params: SystemParams


def curves_for(name: str, base: Optional[SystemParams] = None) -> list:
    """Operating points (one per plotted curve) for a spectrum preset."""
    base = base or reference_params()
    wm, k = base.omega_m, base.kappa
    out = []
    if name in ("fig4", "fig5", "fig6", "fig7"):
        for g in GAIN_CURVES:
            p = base.replace(parametric_gain=g * k, laser_power=6.9e-3,
                             parametric_phase=math.pi / 4, detuning_spec=EffectiveDetuning(wm))
            out.append(Curve(f"G={g:g}kappa", p))
    elif name == "fig8":
        G = 1.3 * k
        for pw in POWER_CURVES:
            p = base.replace(parametric_gain=G, laser_power=pw * 1e-3, parametric_phase=math.pi / 4,
                             detuning_spec=EffectiveDetuning(math.sqrt(wm * wm + 4 * G * G)))
            out.append(Curve(f"P={pw:g}mW", p))
    elif name == "fig9":
        for pw in POWER_CURVES:
            p = base.replace(parametric_gain=0.0, laser_power=pw * 1e-3, parametric_phase=math.pi / 4,
                             detuning_spec=EffectiveDetuning(wm))
            out.append(Curve(f"P={pw:g}mW", p))
    else:
        raise ValueError(f"{name} is not a spectrum preset")
    return out


PEAK_COLUMNS = ["curve", "G_over_kappa", "power_mw", "delta_over_omega_m", "photon_number", "stable",
                "npeaks", "peak1_pos_norm", "peak1_height", "peak1_fwhm_norm",
                "peak2_pos_norm", "peak2_height", "peak2_fwhm_norm", "separation_norm"]


def spectrum_curves(name: str, base: Optional[SystemParams] = None, grid: Optional[GridSpec] = None,
                    noise: Optional[NoiseModel] = None):
    """Evaluate a spectrum preset; returns (grid, [(curve, SpectrumResult)])."""
    grid = grid or GridSpec()
    kind = SPECTRUM_OF[name]
    results = []
    omega = None
    for curve in curves_for(name, base):
        p = curve.params
        d = derive_constants(p)
        ss = steady_state_at_delta(p, d, p.detuning_spec.delta)
        omega = grid.build(p.omega_m)
        res = compute_spectra(ss, d, p, [kind], omega, noise or default_noise(p), PROMINENCE[name])[kind]
        results.append((curve, res))
    return omega, results


def _run_spectrum_preset(name, base, out, grid, noise):
    kind = SPECTRUM_OF[name]
    omega, results = spectrum_curves(name, base, grid, noise)
    wm = results[0][0].params.omega_m
    cols = ["omega", "omega_over_omega_m"]
    table = {"omega": omega, "omega_over_omega_m": omega / wm}
    for curve, res in results:
        cols.append(f"{kind}[{curve.label}]")
        table[cols[-1]] = res.values
        if kind == "SQ":
            cols.append(f"{kind}_scaled[{curve.label}]")
            table[cols[-1]] = res.scaled
    rows = [{c: table[c][i] for c in cols} for i in range(len(omega))]
    data_csv = write_csv(out / f"{name}.csv", rows, cols)

    peak_rows = []
    for curve, res in results:
        p = curve.params
        row = {"curve": curve.label, "G_over_kappa": p.parametric_gain / p.kappa,
               "power_mw": p.laser_power * 1e3, "delta_over_omega_m": res.operating_point.delta / wm,
               "photon_number": res.operating_point.photon_number, "stable": 1, "npeaks": len(res.peaks),
               "separation_norm": peak_separation(res.peaks) / wm}
        top = sorted(sorted(res.peaks, key=lambda pk: pk.prominence, reverse=True)[:2], key=lambda pk: pk.position)
        for j, pk in enumerate(top, start=1):
            row[f"peak{j}_pos_norm"] = pk.position / wm
            row[f"peak{j}_height"] = pk.height
            row[f"peak{j}_fwhm_norm"] = pk.fwhm / wm
        peak_rows.append(row)
    peaks_csv = write_csv(out / f"{name}_peaks.csv", peak_rows, PEAK_COLUMNS)

    ycol = "S_Q x gamma_m" if kind == "SQ" else kind
    series = [(curve.label, list(omega / wm), list(res.scaled if kind == "SQ" else res.values))
              for curve, res in results]
    svg = out / f"{name}.svg"
    svg.write_text(line_chart(series, "omega/omega_m", ycol, name))
    return [data_csv, peaks_csv, svg]


def _run_roots_preset(name, base, out, workers, noise):
    base = base or reference_params()
    rows = []
    for pw in ROOT_POWERS:
        p = base.replace(laser_power=pw * 1e-3, parametric_phase=math.pi / 4,
                         detuning_spec=EffectiveDetuning(base.omega_m))
        spec = SweepSpec("G", ROOT_GAINS, ("roots", "stability", "splitting_estimate", "photon_number"))
        rows += run_sweep(p, spec, noise, workers)
    cols = columns(spec.outputs)
    data_csv = write_csv(out / "fig2_fig3.csv", rows, cols)
    part = "re" if name == "fig2" else "im"
    series = []
    for pw in ROOT_POWERS:
        sel = [r for r in rows if abs(r["power_mw"] - pw) < 1e-9]
        for i in (1, 2):
            series.append((f"root{i} {pw:g} mW", [r["G_over_kappa"] for r in sel],
                           [r.get(f"root{i}_{part}_norm", float("nan")) for r in sel]))
    label = "Re(omega)/omega_m" if part == "re" else "Im(omega)/omega_m"
    svg = out / f"{name}.svg"
    svg.write_text(line_chart(series, "G/kappa", label, name))
    return [data_csv, svg]


def run_preset(name: str, out_dir, base: Optional[SystemParams] = None, grid: Optional[GridSpec] = None,
               noise: Optional[NoiseModel] = None, workers: int = 1) -> list:
    """Write the preset's CSV/SVG files plus a manifest into ``out_dir``; returns the paths."""
    if name not in PRESETS:
        raise ValueError(f"unknown preset {name!r}; choose from {PRESETS}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = base or reference_params()
    if name in ("fig2", "fig3"):
        files = _run_roots_preset(name, base, out, workers, noise)
    else:
        files = _run_spectrum_preset(name, base, out, grid, noise)
    manifest = write_manifest(out, base, files, {"preset": name})
    return files + [manifest]
