"""Chebyshev-Fourier spectral solver for the 2D cubic nonlinear
Schrodinger equation on the compactified real line times a torus, with a
fully explicit 4th-order split-step time integrator."""

__version__ = "0.1.0"

from .config import ConfigError, RunConfig, list_presets, resolve_preset
from .diagnostics import (
    ConvergenceResult,
    Monitors,
    ResolutionReport,
    RunDiagnostics,
    convergence_study,
    energy,
    energy_farfield_subtracted,
    linf_norm,
    resolution_report,
    tau_residual,
    transverse_peak,
)
from .domain import (
    CompactifiedLine,
    LinearOperator1D,
    apply_tau_conditions,
    assemble_second_derivative,
    build_line,
    matching_condition_matrix,
)
from .propagator import (
    FactorizationError,
    IRK4Tableau,
    LinearStepPlan,
    SplittingScheme,
    StopPolicy,
    StopReason,
    build_step_plan,
    evolve,
    linear_substep,
    nonlinear_substep,
    plan_for_step,
    yoshida4,
    yoshida_step,
)
from .runner import RunResult, run_config
from .solutions import InitialData, peregrine, peregrine_compactified, sample_initial
from .spectral import (
    ChebyshevGrid,
    FourierGrid,
    cheb_coefficients,
    cheb_diff_matrix,
    cheb_values,
    clenshaw_curtis_weights,
    fourier_derivative,
)
from .state import State2D

__all__ = [name for name in dir() if not name.startswith("_")]
