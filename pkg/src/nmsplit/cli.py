"""Command-line front end.

Exit codes: 0 success, 1 usage/config error, 2 physics-domain refusal
(unstable operating point with spectra requested, invalid estimate).
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from .errors import EstimateInvalid, NMSplitError, ParameterError, UnstableOperatingPoint
from .linear_dynamics import roots_of_d, routh_hurwitz
from .params import derive_constants, load_config, reference_params, validate_params
from .presets import PRESETS, run_preset
from .spectra import EXACT, HIGH_T, KINDS, NoiseModel, compute_spectra, default_noise
from .steady_state import steady_states
from .svgplot import line_chart
from .sweep import (AXES, GridSpec, SweepSpec, columns, frange, read_csv, run_sweep, stability_boundary,
                    write_csv, write_json, write_manifest, analyze_point)

log = logging.getLogger("nmsplit")


def _params(args):
    if args.config:
        return load_config(args.config)
    return reference_params()


def _noise(args, p):
    if args.noise is None:
        return default_noise(p)
    return NoiseModel(EXACT if args.noise == "exact" else HIGH_T, p.temperature)


def _grid(args):
    return GridSpec(points=args.grid_points, lo=args.grid_lo, hi=args.grid_hi)


def _kinds(text):
    if text in (None, "", "none"):
        return []
    kinds = [k.strip() for k in text.split(",") if k.strip()]
    for k in kinds:
        if k not in KINDS:
            raise ParameterError("spectra", f"unknown spectrum {k!r}; choose from {KINDS}")
    return kinds


def _out(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _warn(p):
    for diag in validate_params(p):
        log.warning("%s", diag.message)


def cmd_point(args) -> int:
    p = _params(args)
    _warn(p)
    kinds = _kinds(args.spectra)
    noise = _noise(args, p)
    grid_spec = _grid(args)
    out = _out(args)
    d = derive_constants(p)
    branches = steady_states(p, d)
    omega = grid_spec.build(p.omega_m)
    wm = p.omega_m

    report = {"branches": []}
    files = []
    spectra_written = 0
    for ss in branches:
        rh = routh_hurwitz(ss, d, p)
        ma = roots_of_d(ss, d, p)
        entry = {
            "steady_state": {"branch_index": ss.branch_index, "delta": ss.delta, "c_s": ss.c_s,
                             "q_s": ss.q_s, "p_s": ss.p_s, "photon_number": ss.photon_number},
            "stability": {"rh_values": list(rh.rh_values), "rh_pass": list(rh.rh_pass), "stable": rh.stable,
                          "eigenvalues_A": rh.eigenvalues_A, "eigen_stable": rh.eigen_stable},
            "modes": {"d_roots": ma.d_roots, "positive_branch": ma.positive_branch,
                      "omega_plus": ma.omega_plus, "omega_minus": ma.omega_minus,
                      "omega_plus_refined": ma.omega_plus_refined, "omega_minus_refined": ma.omega_minus_refined,
                      "g_squared": ma.g_squared, "phi": ma.phi, "estimate_note": ma.estimate_note,
                      "degenerate": ma.degenerate},
            "spectra": {},
        }
        if kinds and rh.stable:
            res = compute_spectra(ss, d, p, kinds, omega, noise, args.prominence)
            cols = ["omega", "omega_over_omega_m"]
            table = {"omega": omega, "omega_over_omega_m": omega / wm}
            for kind in kinds:
                cols.append(kind)
                table[kind] = res[kind].values
                if kind == "SQ":
                    cols.append("SQ_scaled")
                    table["SQ_scaled"] = res[kind].scaled
                entry["spectra"][kind] = {"peaks": [
                    {"position": pk.position, "position_norm": pk.position / wm, "height": pk.height,
                     "fwhm": pk.fwhm, "prominence": pk.prominence} for pk in res[kind].peaks]}
            rows = [{c: table[c][i] for c in cols} for i in range(len(omega))]
            files.append(write_csv(out / f"spectra_b{ss.branch_index}.csv", rows, cols))
            spectra_written += 1
        elif kinds:
            entry["spectra_refused"] = "unstable operating point: no stationary spectrum"
        report["branches"].append(entry)

    rows = analyze_point(p, ["roots", "stability"], None, noise, args.prominence, "point", None)
    files.append(write_csv(out / "point.csv", rows, columns(["roots", "stability"])))
    files.append(write_json(out / "point.json", report))
    write_manifest(out, p, files, {"command": "point"})
    for b in report["branches"]:
        ss = b["steady_state"]
        peaks = {k: len(v["peaks"]) for k, v in b["spectra"].items()}
        print(f"branch {ss['branch_index']}: Delta/omega_m={ss['delta'] / wm:.6g} "
              f"|c_s|^2={ss['photon_number']:.6g} stable={b['stability']['stable']} peaks={peaks}")
    if kinds and spectra_written == 0:
        print("error: operating point is unstable; spectra refused", file=sys.stderr)
        return 2
    return 0


def _values(args):
    if args.values:
        return [float(v) for v in args.values.split(",") if v.strip()]
    if args.range:
        parts = args.range.split(":")
        if len(parts) != 3:
            raise ParameterError("range", "expected start:stop:step")
        return frange(*(float(x) for x in parts))
    raise ParameterError("values", "give --values or --range")


def cmd_sweep(args) -> int:
    p = _params(args)
    _warn(p)
    outputs = [o.strip() for o in args.outputs.split(",") if o.strip()]
    spec = SweepSpec(args.axis, _values(args), outputs, _grid(args))
    out = _out(args)
    rows = run_sweep(p, spec, _noise(args, p), args.workers, args.prominence)
    csv_path = write_csv(out / "sweep.csv", rows, columns(spec.outputs))
    write_manifest(out, p, [csv_path], {"command": "sweep", "axis": spec.axis, "values": list(spec.values)})
    failures = sum(1 for r in rows if r.get("error"))
    print(f"wrote {len(rows)} rows to {csv_path} ({failures} with errors)")
    return 0


def cmd_boundary(args) -> int:
    p = _params(args)
    res = stability_boundary(p, args.axis, args.lo, args.hi)
    out = _out(args)
    path = write_json(out / "boundary.json", {
        "axis": res.axis, "axis_units": AXES[res.axis], "critical_value": res.critical_value,
        "stable_side": res.stable_side, "unstable_side": res.unstable_side,
        "failing_conditions": list(res.failing_conditions), "iterations": res.iterations,
    })
    write_manifest(out, p, [path], {"command": "boundary"})
    print(f"{res.axis} critical value {res.critical_value:.6g} ({AXES[res.axis]}); "
          f"failing condition(s) {list(res.failing_conditions)}")
    return 0


def cmd_plot(args) -> int:
    header, body = read_csv(args.csv)
    if not header or not body:
        raise ParameterError("csv", "no data rows")
    ycols = [c.strip() for c in args.y.split(",") if c.strip()]
    for c in [args.x] + ycols:
        if c not in header:
            raise ParameterError("column", f"unknown column {c!r}")

    def num(s):
        try:
            return float(s)
        except ValueError:
            return math.nan

    ix = header.index(args.x)
    group = header.index(args.group) if args.group else None
    if args.group and args.group not in header:
        raise ParameterError("column", f"unknown column {args.group!r}")
    series = []
    for c in ycols:
        iy = header.index(c)
        keys = sorted({r[group] for r in body}, key=num) if group is not None else [None]
        for key in keys:
            sel = [r for r in body if group is None or r[group] == key]
            label = c if key is None else f"{c} ({args.group}={num(key):g})"
            series.append((label, [num(r[ix]) for r in sel], [num(r[iy]) for r in sel]))
    out = Path(args.output) if args.output else Path(args.csv).with_suffix(".svg")
    out.write_text(line_chart(series, args.xlabel or args.x, args.ylabel or ",".join(ycols), args.title))
    print(f"wrote {out}")
    return 0


def cmd_preset(args) -> int:
    base = load_config(args.config) if args.config else None
    noise = None
    if args.noise:
        T = (base or reference_params()).temperature
        noise = NoiseModel(EXACT if args.noise == "exact" else HIGH_T, T)
    files = run_preset(args.name, args.out, base, _grid(args), noise, args.workers)
    for f in files:
        print(f)
    return 0


def _common(sp, grid=True):
    sp.add_argument("--config", help="JSON config (defaults to the reference parameter set)")
    sp.add_argument("--out", default="out", help="output directory")
    sp.add_argument("--noise", choices=["exact", "hight"], help="thermal noise model")
    sp.add_argument("--workers", type=int, default=1, help="worker processes for sweeps")
    if grid:
        sp.add_argument("--grid-points", type=int, default=4001)
        sp.add_argument("--grid-lo", type=float, default=0.2, help="grid start in omega/omega_m")
        sp.add_argument("--grid-hi", type=float, default=1.8, help="grid end in omega/omega_m")
        sp.add_argument("--prominence", type=float, default=0.05,
                        help="peak prominence threshold as a fraction of the global maximum")


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1; 2 is reserved for physics refusals."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser():
    parser = _Parser(prog="nmsplit", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("point", help="analyze one parameter set")
    _common(sp)
    sp.add_argument("--spectra", default="SQ", help="comma list of SQ,Scout,Sxout,Syout or 'none'")
    sp.set_defaults(func=cmd_point)

    sp = sub.add_parser("sweep", help="sweep one parameter")
    _common(sp)
    sp.add_argument("--axis", required=True, help="G (units of kappa), power (mW), delta or delta0 (omega_m)")
    sp.add_argument("--values", help="comma-separated axis values")
    sp.add_argument("--range", help="start:stop:step (inclusive)")
    sp.add_argument("--outputs", default="roots,stability,splitting_estimate,photon_number")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("boundary", help="bisect the stability boundary along one axis")
    _common(sp, grid=False)
    sp.add_argument("--axis", required=True)
    sp.add_argument("--lo", type=float, required=True)
    sp.add_argument("--hi", type=float, required=True)
    sp.set_defaults(func=cmd_boundary)

    sp = sub.add_parser("plot", help="SVG line chart from a CSV produced by this tool")
    sp.add_argument("csv")
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True, help="comma-separated column names")
    sp.add_argument("--group", help="split curves by the values of this column")
    sp.add_argument("--output")
    sp.add_argument("--xlabel")
    sp.add_argument("--ylabel")
    sp.add_argument("--title", default="")
    sp.set_defaults(func=cmd_plot)

    sp = sub.add_parser("preset", help="reproduce a figure")
    sp.add_argument("name", choices=PRESETS)
    _common(sp)
    sp.set_defaults(func=cmd_preset)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (UnstableOperatingPoint, EstimateInvalid) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParameterError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NMSplitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
