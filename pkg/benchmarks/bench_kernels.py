"""Compiled vs pure-Python kernel timings.

    python3 benchmarks/bench_kernels.py [--repeat N] [--grid-points N]
"""
import argparse
import timeit

import numpy as np

from nmsplit import _pykernels, derive_constants, reference_params, steady_state_at_delta
from nmsplit.linear_dynamics import coupling_bracket, d_coefficients
from nmsplit.spectra import default_noise, radiation_bracket_const

try:
    from nmsplit import _ckernels
except ImportError:
    _ckernels = None


def operating_point():
    p = reference_params(parametric_gain_over_kappa=1.3)
    d = derive_constants(p)
    return p, d, steady_state_at_delta(p, d, p.omega_m)


def cases(grid_points):
    p, d, ss = operating_point()
    w = np.linspace(0.2, 1.8, grid_points) * p.omega_m
    wc = default_noise(p).symmetric_weight(w)
    kc = 4 * p.omega_m**3 * d.chi**2 * coupling_bracket(ss, p).real
    sq_args = (w, wc, p.omega_m, d.gamma_m, p.kappa, ss.delta, p.parametric_gain, kc,
               8 * p.omega_m**2 * d.chi**2 * p.kappa, ss.photon_number, radiation_bracket_const(ss, p).real)
    vef_args = (w, p.omega_m, d.gamma_m, p.kappa, ss.delta, p.parametric_gain, p.parametric_phase,
                d.chi, ss.c_s, kc)
    # quartic in omega, normalized to omega_m so the iteration is well scaled
    coeffs = np.asarray(d_coefficients(ss, d, p), dtype=complex)
    coeffs = coeffs / coeffs[0] * p.omega_m ** -np.arange(len(coeffs))
    return {
        "durand_kerner (d quartic)": ("durand_kerner", (coeffs,)),
        f"sq_grid ({grid_points} pts)": ("sq_grid", sq_args),
        f"vef_grid ({grid_points} pts)": ("vef_grid", vef_args),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--grid-points", type=int, default=4001)
    args = ap.parse_args()

    backends = [("python", _pykernels)] + ([("cython", _ckernels)] if _ckernels else [])
    print(f"{'kernel':32s}" + "".join(f"{name:>14s}" for name, _ in backends) + ("    speedup" if _ckernels else ""))
    for label, (fname, fargs) in cases(args.grid_points).items():
        times = []
        for _, mod in backends:
            fn = getattr(mod, fname)
            number = 1 if fname != "durand_kerner" else 200
            best = min(timeit.repeat(lambda: fn(*fargs), number=number, repeat=args.repeat)) / number
            times.append(best)
        row = f"{label:32s}" + "".join(f"{t * 1e3:11.3f} ms" for t in times)
        if len(times) == 2:
            row += f"  {times[0] / times[1]:8.1f}x"
        print(row)
    if _ckernels is None:
        print("compiled extension not built; only the fallback was timed")


if __name__ == "__main__":
    main()
