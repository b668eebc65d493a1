"""Parameter sweeps, stability-boundary bisection and result serialization."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from functools import partial
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from ._version import __version__
from .errors import NMSplitError, OperatingPointError, ParameterError
from .linear_dynamics import roots_of_d, routh_hurwitz
from .params import (BareDetuning, EffectiveDetuning, SystemParams, derive_constants, params_to_config,
                     validate_params)
from .spectra import KINDS, NoiseModel, compute_spectra, default_noise, peak_separation
from .steady_state import steady_states

# axis name -> unit multiplier description; values are given in normalized units
AXES = {
    "G": "parametric gain in units of kappa",
    "power": "laser power in mW",
    "delta": "effective detuning in units of omega_m",
    "delta0": "bare detuning in units of omega_m",
}
AXIS_ALIASES = {
    "ParametricGain": "G",
    "LaserPower": "power",
    "EffectiveDetuning": "delta",
    "BareDetuning": "delta0",
}
OUTPUTS = ("roots", "eigenvalues", "stability", "SQ", "Scout", "Sxout", "Syout",
           "splitting_estimate", "photon_number")
MAX_PEAKS = 2


def canonical_axis(axis: str) -> str:
    axis = AXIS_ALIASES.get(axis, axis)
    if axis not in AXES:
        raise ParameterError("axis", f"unknown axis {axis!r}; choose from {sorted(AXES)}")
    return axis


@dataclass(frozen=True)
class GridSpec:
    points: int = 4001
    lo: float = 0.2  # omega / omega_m
    hi: float = 1.8

    def __post_init__(self):
        if self.points < 5:
            raise ParameterError("grid_points", "need at least 5 grid points")
        if not (0 <= self.lo < self.hi):
            raise ParameterError("grid", "need 0 <= lo < hi")

    def build(self, omega_m: float) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.points) * omega_m


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple
    outputs: tuple = ("roots", "stability", "splitting_estimate", "photon_number")
    grid: GridSpec = field(default_factory=GridSpec)

    def __post_init__(self):
        object.__setattr__(self, "axis", canonical_axis(self.axis))
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ParameterError("values", "sweep needs at least one value")
        if not all(math.isfinite(v) for v in vals):
            raise ParameterError("values", "sweep values must be finite")
        diffs = np.diff(vals)
        if len(vals) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ParameterError("values", "sweep values must be strictly monotone")
        object.__setattr__(self, "values", vals)
        unknown = [o for o in self.outputs if o not in OUTPUTS]
        if unknown:
            raise ParameterError("outputs", f"unknown output {unknown[0]!r}")
        object.__setattr__(self, "outputs", tuple(self.outputs))

    @property
    def spectra(self) -> tuple:
        return tuple(k for k in KINDS if k in self.outputs)


def apply_axis(p: SystemParams, axis: str, value: float) -> SystemParams:
    axis = canonical_axis(axis)
    if axis == "G":
        if value < 0:
            raise ParameterError("parametric_gain_over_kappa", "must be >= 0")
        return p.replace(parametric_gain=value * p.kappa)
    if axis == "power":
        if value < 0:
            raise ParameterError("laser_power_mw", "must be >= 0")
        return p.replace(laser_power=value * 1e-3)
    if axis == "delta":
        return p.replace(detuning_spec=EffectiveDetuning(value * p.omega_m))
    return p.replace(detuning_spec=BareDetuning(value * p.omega_m))


def frange(start: float, stop: float, step: float) -> list:
    """Inclusive range built from integer multiples of ``step`` (no drift)."""
    if step == 0 or (stop - start) / step < 0:
        raise ParameterError("range", "step must move start towards stop")
    n = int(math.floor((stop - start) / step + 1e-9))
    return [round(start + i * step, 12) for i in range(n + 1)]


# -- rows --------------------------------------------------------------------

def columns(spec_outputs: Sequence[str]) -> list:
    cols = [
        "axis", "axis_value", "branch_index", "n_branches",
        "G_over_kappa", "power_mw", "delta", "delta_over_omega_m", "photon_number",
        "rh1", "rh2", "rh3", "stable",
        "root1_re", "root1_im", "root2_re", "root2_im",
        "root1_re_norm", "root1_im_norm", "root2_re_norm", "root2_im_norm",
        "omega_plus", "omega_minus", "omega_plus_norm", "omega_minus_norm",
        "refined_plus_re", "refined_plus_im", "refined_minus_re", "refined_minus_im",
        "g_squared",
    ]
    if "eigenvalues" in spec_outputs:
        for i in range(1, 5):
            cols += [f"eig{i}_re", f"eig{i}_im"]
    for kind in KINDS:
        if kind not in spec_outputs:
            continue
        cols.append(f"{kind}_npeaks")
        for j in range(1, MAX_PEAKS + 1):
            cols += [f"{kind}_peak{j}_pos", f"{kind}_peak{j}_pos_norm",
                     f"{kind}_peak{j}_height", f"{kind}_peak{j}_fwhm"]
        cols.append(f"{kind}_separation_norm")
    cols.append("error")
    return cols


def _base_row(axis, value, p):
    return {
        "axis": axis,
        "axis_value": value,
        "G_over_kappa": p.parametric_gain / p.kappa,
        "power_mw": p.laser_power * 1e3,
    }


def analyze_point(p: SystemParams, outputs: Sequence[str] = OUTPUTS, grid: Optional[np.ndarray] = None,
                  noise: Optional[NoiseModel] = None, rel_prominence: float = 0.05,
                  axis: str = "", axis_value=None) -> list:
    """One row dict per operating branch of ``p``."""
    d = derive_constants(p)
    base = _base_row(axis, axis_value, p)
    try:
        branches = steady_states(p, d)
    except NMSplitError as exc:
        return [dict(base, error=str(exc))]
    rows = []
    wm = p.omega_m
    spectra_kinds = [k for k in KINDS if k in outputs]
    for ss in branches:
        row = dict(base)
        row.update(branch_index=ss.branch_index, n_branches=len(branches), delta=ss.delta,
                   delta_over_omega_m=ss.delta / wm, photon_number=ss.photon_number)
        errors = []
        try:
            rh = routh_hurwitz(ss, d, p)
            row.update(rh1=rh.rh_values[0], rh2=rh.rh_values[1], rh3=rh.rh_values[2], stable=int(rh.stable))
            if "eigenvalues" in outputs:
                for i, ev in enumerate(1j * rh.eigenvalues_A, start=1):
                    row[f"eig{i}_re"] = ev.real
                    row[f"eig{i}_im"] = ev.imag
            ma = roots_of_d(ss, d, p)
            for i, r in enumerate(ma.positive_branch[:2], start=1):
                row[f"root{i}_re"] = r.real
                row[f"root{i}_im"] = r.imag
                row[f"root{i}_re_norm"] = r.real / wm
                row[f"root{i}_im_norm"] = r.imag / wm
            row["g_squared"] = ma.g_squared
            if ma.omega_plus is not None:
                row.update(omega_plus=ma.omega_plus, omega_minus=ma.omega_minus,
                           omega_plus_norm=ma.omega_plus / wm, omega_minus_norm=ma.omega_minus / wm,
                           refined_plus_re=ma.omega_plus_refined.real,
                           refined_plus_im=ma.omega_plus_refined.imag,
                           refined_minus_re=ma.omega_minus_refined.real,
                           refined_minus_im=ma.omega_minus_refined.imag)
            else:
                errors.append(ma.estimate_note)
            if spectra_kinds:
                if not rh.stable:
                    errors.append("unstable: no stationary spectrum")
                else:
                    res = compute_spectra(ss, d, p, spectra_kinds, grid, noise, rel_prominence)
                    for kind in spectra_kinds:
                        peaks = res[kind].peaks
                        row[f"{kind}_npeaks"] = len(peaks)
                        top = sorted(sorted(peaks, key=lambda pk: pk.prominence, reverse=True)[:MAX_PEAKS],
                                     key=lambda pk: pk.position)
                        for j, pk in enumerate(top, start=1):
                            row[f"{kind}_peak{j}_pos"] = pk.position
                            row[f"{kind}_peak{j}_pos_norm"] = pk.position / wm
                            row[f"{kind}_peak{j}_height"] = pk.height
                            row[f"{kind}_peak{j}_fwhm"] = pk.fwhm
                        row[f"{kind}_separation_norm"] = peak_separation(peaks) / wm
        except NMSplitError as exc:
            errors.append(str(exc))
        row["error"] = "; ".join(e for e in errors if e)
        rows.append(row)
    return rows


def _sweep_worker(p, spec, noise, rel_prominence, value):
    q = apply_axis(p, spec.axis, value)
    grid = spec.grid.build(q.omega_m) if spec.spectra else None
    return analyze_point(q, spec.outputs, grid, noise, rel_prominence, spec.axis, value)


def run_sweep(p: SystemParams, spec: SweepSpec, noise: Optional[NoiseModel] = None,
              workers: int = 1, rel_prominence: float = 0.05) -> list:
    """Evaluate every axis value; rows come back in axis order whatever the pool does."""
    noise = noise or default_noise(p)
    job = partial(_sweep_worker, p, spec, noise, rel_prominence)
    if workers > 1 and len(spec.values) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(job, spec.values))
    else:
        chunks = [job(v) for v in spec.values]
    return [row for chunk in chunks for row in chunk]


# -- stability boundary ------------------------------------------------------

@dataclass(frozen=True)
class BoundaryResult:
    axis: str
    critical_value: float
    stable_side: float
    unstable_side: float
    failing_conditions: tuple
    iterations: int


def _stable(p, axis, value) -> bool:
    q = apply_axis(p, axis, value)
    d = derive_constants(q)
    try:
        ss = steady_states(q, d)[0]
    except OperatingPointError:
        # at the parametric threshold there is no finite operating point to be stable
        return False
    return routh_hurwitz(ss, d, q).stable


def _failing(p, axis, value) -> tuple:
    q = apply_axis(p, axis, value)
    d = derive_constants(q)
    try:
        ss = steady_states(q, d)[0]
    except OperatingPointError:
        return ()
    return tuple(routh_hurwitz(ss, d, q).failing)


def stability_boundary(p: SystemParams, axis: str, lo: float, hi: float, rtol: float = 1e-9) -> BoundaryResult:
    """Bisect the Routh-Hurwitz verdict along ``axis`` between ``lo`` and ``hi``.

    Stops once the bracket is narrower than ``rtol`` times the initial width.
    """
    axis = canonical_axis(axis)
    if axis == "delta0":
        raise ParameterError("axis", "boundary search needs a single operating branch; use G, power or delta")
    if not lo < hi:
        raise ParameterError("lo", "need lo < hi")
    s_lo, s_hi = _stable(p, axis, lo), _stable(p, axis, hi)
    if s_lo == s_hi:
        raise ParameterError("bracket", f"stability verdict is {s_lo} at both ends")
    a, b = lo, hi
    stable_at_a = s_lo
    tol = rtol * (hi - lo)
    it = 0
    while b - a > tol:
        mid = 0.5 * (a + b)
        if _stable(p, axis, mid) == stable_at_a:
            a = mid
        else:
            b = mid
        it += 1
    stable_side, unstable_side = (a, b) if stable_at_a else (b, a)
    failing = _failing(p, axis, unstable_side)
    return BoundaryResult(axis, 0.5 * (a + b), stable_side, unstable_side, failing, it)


# -- serialization -----------------------------------------------------------

def fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return format(v, ".16e") if math.isfinite(v) else repr(v)
    return str(value)


def csv_text(rows: Sequence[dict], cols: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for row in rows:
        writer.writerow([fmt(row.get(c)) for c in cols])
    return buf.getvalue()


def write_csv(path, rows, cols) -> Path:
    path = Path(path)
    path.write_text(csv_text(rows, cols))
    return path


def read_csv(path) -> tuple:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        body = [r for r in reader if r]
    return header, body


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _jsonable(obj):
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, np.ndarray):
        return [_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, (list, tuple)):
        return [_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    return obj


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n")
    return path


def write_manifest(out_dir, p: SystemParams, files: Sequence, extra: Optional[dict] = None) -> Path:
    """manifest.json listing every output file with its sha256."""
    out_dir = Path(out_dir)
    d = derive_constants(p)
    manifest = {
        "tool": "nmsplit",
        "version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "params": params_to_config(p),
        "derived": asdict(d),
        "diagnostics": [asdict(x) for x in validate_params(p)],
        "files": [{"path": Path(f).name, "sha256": sha256_file(f)} for f in files],
    }
    if extra:
        manifest.update(extra)
    return write_json(out_dir / "manifest.json", manifest)
