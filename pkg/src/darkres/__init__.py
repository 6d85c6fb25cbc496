"""Steady-state probe response of a laser-driven four-level atom.

The package computes the exact steady-state density matrix of a ladder
system with a perturbing side state, converts the probe coherence into a
complex susceptibility, and locates the spectral features (gain spikes,
vanishing-absorption detunings, dispersion slopes) through which a weak
incoherent pump steers the probe group velocity between sub- and
superluminal.  Closed-form weak-probe solutions double as independent
oracles for the numeric solver.
"""

from ._version import __version__
from .analytic import (
    DressedStates,
    coupling_hamiltonian,
    dressed_states,
    group_index_analytic,
    lambda_threshold,
    rho23_incoherent,
    rho23_limit,
    rho23_weak_probe,
    spike_half_width,
)
from .errors import ConfigError, NumericError, ParameterError, SimulationError
from .model import (
    DampingTable,
    MediumParams,
    Regime,
    RegimeFlag,
    SystemParams,
    damping_table,
    validate_params,
)
from .observables import (
    ChiPoint,
    FeatureReport,
    Method,
    auto_zero_bracket,
    chi_at,
    chi_prefactor,
    chi_spectrum,
    dispersion_slope,
    find_absorption_zero,
    find_absorption_zero_auto,
    find_gain_threshold,
    group_index,
    locate_features,
    probe_coherence,
    susceptibility,
)
from .steady_state import (
    DensityMatrix,
    LinearProblem,
    assemble,
    residual,
    solve_linear,
    steady_state,
)
from .sweep import (
    Axis,
    Output,
    Spacing,
    SweepSpec,
    SweepTable,
    parse_config,
    run_sweep,
    write_csv,
)

__all__ = [
    "__version__",
    "SystemParams", "MediumParams", "DampingTable", "Regime", "RegimeFlag",
    "validate_params", "damping_table",
    "DensityMatrix", "LinearProblem", "assemble", "solve_linear",
    "steady_state", "residual",
    "DressedStates", "dressed_states", "coupling_hamiltonian",
    "rho23_weak_probe", "rho23_limit", "rho23_incoherent",
    "spike_half_width", "lambda_threshold", "group_index_analytic",
    "Method", "ChiPoint", "FeatureReport", "susceptibility", "chi_prefactor",
    "chi_at", "chi_spectrum", "probe_coherence", "dispersion_slope",
    "group_index", "find_absorption_zero", "find_absorption_zero_auto",
    "find_gain_threshold", "auto_zero_bracket", "locate_features",
    "Axis", "Spacing", "Output", "SweepSpec", "SweepTable",
    "parse_config", "run_sweep", "write_csv",
    "SimulationError", "ParameterError", "ConfigError", "NumericError",
]
