"""Normal-mode splitting of a cavity-optomechanical system with an intracavity
degenerate parametric amplifier: steady states, stability, normal modes and
fluctuation spectra."""
from .errors import (EstimateInvalid, NMSplitError, OperatingPointError, ParameterError,
                     RootFindingError, UnstableOperatingPoint)
from .kernels import BACKEND
from .linear_dynamics import (ModeAnalysis, StabilityReport, d_omega, drift_matrix, eigenvalues_iA,
                              refined_splitting, roots_of_d, routh_hurwitz, splitting_estimate)
from .params import (CONSTANTS, BareDetuning, DerivedConstants, EffectiveDetuning, PhysicalConstants,
                     SystemParams, derive_constants, load_config, reference_params, params_from_config,
                     validate_params)
from .spectra import (NoiseModel, Peak, SpectrumResult, find_peaks, output_coefficients, output_spectra,
                      sq_spectrum)
from .steady_state import SteadyState, solve_branches, steady_state_at_delta, steady_states

from ._version import __version__

__all__ = [
    "BACKEND", "CONSTANTS", "BareDetuning", "DerivedConstants", "EffectiveDetuning", "EstimateInvalid",
    "ModeAnalysis", "NMSplitError", "NoiseModel", "OperatingPointError", "ParameterError", "Peak",
    "PhysicalConstants", "RootFindingError", "SpectrumResult", "StabilityReport", "SteadyState",
    "SystemParams", "UnstableOperatingPoint", "__version__", "d_omega", "derive_constants", "drift_matrix",
    "eigenvalues_iA", "find_peaks", "load_config", "output_coefficients", "output_spectra", "reference_params",
    "params_from_config", "refined_splitting", "roots_of_d", "routh_hurwitz", "solve_branches",
    "splitting_estimate", "sq_spectrum", "steady_state_at_delta", "steady_states", "validate_params",
]
