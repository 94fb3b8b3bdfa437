"""Delay-induced oscillations in a two-population interaction model.

The package splits along the natural workflow: model (equilibria and
their delay-free verdicts), stability (characteristic equation and
critical delays), normal_form (direction and amplitude of the
bifurcating cycle), integrator (time-domain validation), cli (config
driven runs producing reports, tables and figures).
"""
from .model import (
    Equilibrium,
    EquilibriumLabel,
    ModelParams,
    Stability,
    State,
    coexistence,
    distributed_w_oracle,
    equilibria,
    estar_exists,
    reduced_rhs,
)
from .stability import (
    CharCoeffs,
    GCubic,
    HopfCandidate,
    Transversality,
    char_coeffs,
    char_value,
    g_cubic,
    h1_holds,
    hopf_candidates,
    s0,
    transversality_sign,
)
from .normal_form import (
    Direction,
    Linearization,
    NormalForm,
    ResonanceError,
    compute_normal_form,
    classify,
    eigen_residuals,
    gammas,
    left_eigvec,
    linearize,
    predicted_amplitude,
    predicted_component_amplitudes,
    right_eigvec,
    second_order,
)
from .integrator import (
    Classification,
    CycleMetrics,
    HistoryKind,
    HistorySpec,
    SimulationDiverged,
    Trajectory,
    W0Policy,
    cycle_metrics,
    fft_period,
    simulate,
    simulate_distributed,
)
from .cli import AnalysisReport, Command, ConfigError, RunConfig, parse_config, run

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "CharCoeffs",
    "Classification",
    "Command",
    "ConfigError",
    "CycleMetrics",
    "Direction",
    "Equilibrium",
    "EquilibriumLabel",
    "GCubic",
    "HistoryKind",
    "HistorySpec",
    "HopfCandidate",
    "Linearization",
    "ModelParams",
    "NormalForm",
    "ResonanceError",
    "RunConfig",
    "SimulationDiverged",
    "Stability",
    "State",
    "Trajectory",
    "Transversality",
    "W0Policy",
    "char_coeffs",
    "char_value",
    "classify",
    "coexistence",
    "compute_normal_form",
    "cycle_metrics",
    "distributed_w_oracle",
    "eigen_residuals",
    "equilibria",
    "estar_exists",
    "fft_period",
    "g_cubic",
    "gammas",
    "h1_holds",
    "hopf_candidates",
    "left_eigvec",
    "linearize",
    "parse_config",
    "predicted_amplitude",
    "predicted_component_amplitudes",
    "reduced_rhs",
    "right_eigvec",
    "run",
    "s0",
    "second_order",
    "simulate",
    "simulate_distributed",
    "transversality_sign",
    "__version__",
]
