"""Physical constants, system inputs and derived coupling constants.

All frequencies are angular (rad/s) internally. The JSON config uses
Hz-style keys (``kappa_hz`` is kappa/2pi, ...) which are converted once in
:func:`params_from_config`.

Mirror quadratures are the dimensionless Q, P with [Q, P] = 2i, and
``kappa`` is the cavity amplitude decay rate (total linewidth 2*kappa).
"""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Union

from .errors import ParameterError


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.054571817e-34  # J s
    k_B: float = 1.380649e-23  # J/K
    c_light: float = 2.99792458e8  # m/s


CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class EffectiveDetuning:
    """Effective detuning Delta (rad/s), already including the radiation-pressure shift."""

    delta: float


@dataclass(frozen=True)
class BareDetuning:
    """Bare detuning Delta0 = omega_c - omega_L (rad/s); the effective one is solved for."""

    delta0: float


DetuningSpec = Union[EffectiveDetuning, BareDetuning]


@dataclass(frozen=True)
class SystemParams:
    lambda_laser: float  # m
    cavity_length: float  # m
    mass: float  # kg
    kappa: float  # rad/s
    omega_m: float  # rad/s
    quality_factor: float
    temperature: float  # K
    parametric_gain: float  # rad/s
    parametric_phase: float  # rad
    laser_power: float  # W
    detuning_spec: DetuningSpec = field(default_factory=lambda: EffectiveDetuning(0.0))

    def __post_init__(self):
        for name in ("lambda_laser", "cavity_length", "mass", "kappa", "omega_m",
                     "quality_factor"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(name, f"must be strictly positive, got {value!r}")
        if not (math.isfinite(self.laser_power) and self.laser_power >= 0):
            raise ParameterError("laser_power", f"must be >= 0, got {self.laser_power!r}")
        if not (math.isfinite(self.temperature) and self.temperature >= 0):
            raise ParameterError("temperature", f"must be >= 0, got {self.temperature!r}")
        if not (math.isfinite(self.parametric_gain) and self.parametric_gain >= 0):
            raise ParameterError("parametric_gain", f"must be >= 0, got {self.parametric_gain!r}")
        if not math.isfinite(self.parametric_phase):
            raise ParameterError("parametric_phase", "must be finite")
        if not isinstance(self.detuning_spec, (EffectiveDetuning, BareDetuning)):
            raise ParameterError("detuning_spec", "must be EffectiveDetuning or BareDetuning")
        d = getattr(self.detuning_spec, "delta", None)
        if d is None:
            d = self.detuning_spec.delta0
        if not math.isfinite(d):
            raise ParameterError("detuning_spec", "detuning must be finite")

    @property
    def gamma_m(self) -> float:
        return self.omega_m / self.quality_factor

    def replace(self, **changes) -> "SystemParams":
        data = {f: getattr(self, f) for f in self.__dataclass_fields__}
        data.update(changes)
        return SystemParams(**data)


@dataclass(frozen=True)
class DerivedConstants:
    omega_L: float
    omega_c: float
    chi: float
    epsilon: float
    gamma_m: float


def derive_constants(p: SystemParams, consts: PhysicalConstants = CONSTANTS) -> DerivedConstants:
    """Laser/cavity frequencies, optomechanical coupling chi, drive epsilon and gamma_m.

    ``omega_c`` equals ``omega_L`` when the detuning is given as an effective
    detuning, otherwise ``omega_L + Delta0``.
    """
    for name in ("lambda_laser", "cavity_length", "mass", "omega_m", "quality_factor"):
        if not getattr(p, name) > 0:
            raise ParameterError(name, "must be strictly positive")
    omega_L = 2.0 * math.pi * consts.c_light / p.lambda_laser
    if isinstance(p.detuning_spec, BareDetuning):
        omega_c = omega_L + p.detuning_spec.delta0
    else:
        omega_c = omega_L
    chi = (omega_c / p.cavity_length) * math.sqrt(consts.hbar / (2.0 * p.mass * p.omega_m)) / p.omega_m
    epsilon = math.sqrt(2.0 * p.kappa * p.laser_power / (consts.hbar * omega_L))
    return DerivedConstants(
        omega_L=omega_L,
        omega_c=omega_c,
        chi=chi,
        epsilon=epsilon,
        gamma_m=p.omega_m / p.quality_factor,
    )


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str


def validate_params(p: SystemParams, consts: PhysicalConstants = CONSTANTS) -> list[Diagnostic]:
    """Regime warnings for the resolved-sideband analysis. Never raises."""
    out = []
    if isinstance(p.detuning_spec, EffectiveDetuning):
        delta = p.detuning_spec.delta
    else:
        delta = p.detuning_spec.delta0
    gamma_m = p.omega_m / p.quality_factor
    if p.omega_m <= p.kappa:
        out.append(Diagnostic("omega_m<=kappa", "omega_m <= kappa: not in the resolved-sideband regime"))
    if delta <= 2.0 * p.parametric_gain:
        out.append(Diagnostic("delta<=2G", "Δ ≤ 2G: cavity mode has no real effective frequency"))
    if p.kappa <= gamma_m:
        out.append(Diagnostic("kappa<=gamma_m", "κ ≤ γ_m not ≫: mechanical damping not negligible"))
    if p.omega_m <= gamma_m / 2.0:
        out.append(Diagnostic("omega_m<=gamma_m/2", "mechanical oscillator is overdamped"))
    # angular free spectral range pi*c/L
    if p.omega_m >= 0.01 * math.pi * consts.c_light / p.cavity_length:
        out.append(Diagnostic("adiabatic", "omega_m is not much smaller than the free spectral range"))
    return out


# -- config I/O --------------------------------------------------------------

CONFIG_KEYS = (
    "lambda_nm",
    "cavity_length_mm",
    "mass_ng",
    "kappa_hz",
    "omega_m_hz",
    "quality_factor",
    "temperature_mk",
    "parametric_gain_over_kappa",
    "parametric_phase_rad",
    "laser_power_mw",
    "detuning_mode",
    "detuning_over_omega_m",
)

REFERENCE_CONFIG = {
    "lambda_nm": 1064.0,
    "cavity_length_mm": 25.0,
    "mass_ng": 145.0,
    "kappa_hz": 215e3,
    "omega_m_hz": 947e3,
    "quality_factor": 6700.0,
    "temperature_mk": 300.0,
    "parametric_gain_over_kappa": 0.0,
    "parametric_phase_rad": math.pi / 4,
    "laser_power_mw": 6.9,
    "detuning_mode": "effective",
    "detuning_over_omega_m": 1.0,
}


def _number(cfg, key):
    try:
        value = cfg[key]
    except KeyError:
        raise ParameterError(key, "missing required key") from None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParameterError(key, f"expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ParameterError(key, "must be finite")
    return value


def params_from_config(cfg: dict) -> SystemParams:
    """Build :class:`SystemParams` from a flat config dict (units as in the key names).

    Errors are :class:`ParameterError` carrying the config key.
    """
    unknown = sorted(set(cfg) - set(CONFIG_KEYS))
    if unknown:
        raise ParameterError(unknown[0], "unknown config key")
    positive = ("lambda_nm", "cavity_length_mm", "mass_ng", "kappa_hz", "omega_m_hz",
                "quality_factor")
    values = {k: _number(cfg, k) for k in CONFIG_KEYS if k != "detuning_mode"}
    for key in positive:
        if values[key] <= 0:
            raise ParameterError(key, f"must be strictly positive, got {values[key]!r}")
    for key in ("temperature_mk", "parametric_gain_over_kappa", "laser_power_mw"):
        if values[key] < 0:
            raise ParameterError(key, f"must be >= 0, got {values[key]!r}")
    mode = cfg.get("detuning_mode")
    if mode not in ("effective", "bare"):
        raise ParameterError("detuning_mode", f"must be 'effective' or 'bare', got {mode!r}")

    kappa = 2.0 * math.pi * values["kappa_hz"]
    omega_m = 2.0 * math.pi * values["omega_m_hz"]
    detuning = values["detuning_over_omega_m"] * omega_m
    spec = EffectiveDetuning(detuning) if mode == "effective" else BareDetuning(detuning)
    return SystemParams(
        lambda_laser=values["lambda_nm"] * 1e-9,
        cavity_length=values["cavity_length_mm"] * 1e-3,
        mass=values["mass_ng"] * 1e-12,
        kappa=kappa,
        omega_m=omega_m,
        quality_factor=values["quality_factor"],
        temperature=values["temperature_mk"] * 1e-3,
        parametric_gain=values["parametric_gain_over_kappa"] * kappa,
        parametric_phase=values["parametric_phase_rad"],
        laser_power=values["laser_power_mw"] * 1e-3,
        detuning_spec=spec,
    )


def params_to_config(p: SystemParams) -> dict:
    """Inverse of :func:`params_from_config`."""
    if isinstance(p.detuning_spec, EffectiveDetuning):
        mode, detuning = "effective", p.detuning_spec.delta
    else:
        mode, detuning = "bare", p.detuning_spec.delta0
    return {
        "lambda_nm": p.lambda_laser * 1e9,
        "cavity_length_mm": p.cavity_length * 1e3,
        "mass_ng": p.mass * 1e12,
        "kappa_hz": p.kappa / (2.0 * math.pi),
        "omega_m_hz": p.omega_m / (2.0 * math.pi),
        "quality_factor": p.quality_factor,
        "temperature_mk": p.temperature * 1e3,
        "parametric_gain_over_kappa": p.parametric_gain / p.kappa,
        "parametric_phase_rad": p.parametric_phase,
        "laser_power_mw": p.laser_power * 1e3,
        "detuning_mode": mode,
        "detuning_over_omega_m": detuning / p.omega_m,
    }


def load_config(path) -> SystemParams:
    try:
        cfg = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParameterError("config", f"invalid JSON: {exc}") from None
    if not isinstance(cfg, dict):
        raise ParameterError("config", "top level must be an object")
    return params_from_config(cfg)


def reference_params(**overrides) -> SystemParams:
    """Experimental parameter set used throughout the figures, with config-key overrides."""
    cfg = dict(REFERENCE_CONFIG)
    cfg.update(overrides)
    return params_from_config(cfg)


def derived_as_dict(d: DerivedConstants) -> dict:
    return asdict(d)
