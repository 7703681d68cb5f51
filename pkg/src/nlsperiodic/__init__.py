"""Periodic and anti-periodic standing-wave toolkit for 1-D NLS profiles.

Computes and verifies standing-wave profiles u of i psi_t + psi_xx +
b f(psi) = 0 with psi = e^{-iat} u(x): phase-plane analysis of the profile
equation, constrained variational solvers (fixed mass, Nehari manifold),
linearized spectra, a realifying coefficient rearrangement, and the
parameter-region classification of the triple-power nonlinearity.
"""

from .errors import NonConvergenceError, PreconditionError
from .linearization import SpectrumReport, constant_spectrum, hill_spectrum
from .minimizers import (
    MinimizationResult,
    MinimizeConfig,
    action_identity_values,
    mass_threshold,
    minimize_mass,
    minimize_nehari,
    reference_solution,
)
from .nonlinearity import (
    HypothesisReport,
    MultiPower,
    NonlinearitySpec,
    SinglePower,
    TriplePower,
    audit_hypotheses,
    default_audit_grid,
    eval_A,
    eval_h,
    eval_k,
    evaluate,
)
from .profile_ode import (
    CriticalPoint,
    LevelSetError,
    Orbit,
    PhasePortrait,
    PotentialParams,
    classify_equilibrium,
    critical_points,
    integrate_orbit,
    orbit_period,
    phase_portrait,
)
from .rearrangement import fourier_rearrange
from .spectral import (
    FunctionalValues,
    PeriodicField,
    align_phase,
    center_peak,
    distance_mod_phase,
    functionals,
    gradient_energy,
    nehari_project,
    ode_residual,
    random_field,
)
from .triple_power import (
    RegionAnalysis,
    analyze_region,
    classify_portrait,
    half_kink_omega,
    region_boundaries,
    region_label,
    scan_region_map,
    stationary_radii,
)

__version__ = "0.1.0"

__all__ = [
    "NonConvergenceError",
    "PreconditionError",
    "SpectrumReport",
    "constant_spectrum",
    "hill_spectrum",
    "MinimizationResult",
    "MinimizeConfig",
    "action_identity_values",
    "mass_threshold",
    "minimize_mass",
    "minimize_nehari",
    "reference_solution",
    "HypothesisReport",
    "MultiPower",
    "NonlinearitySpec",
    "SinglePower",
    "TriplePower",
    "audit_hypotheses",
    "default_audit_grid",
    "eval_A",
    "eval_h",
    "eval_k",
    "evaluate",
    "CriticalPoint",
    "LevelSetError",
    "Orbit",
    "PhasePortrait",
    "PotentialParams",
    "classify_equilibrium",
    "critical_points",
    "integrate_orbit",
    "orbit_period",
    "phase_portrait",
    "fourier_rearrange",
    "FunctionalValues",
    "PeriodicField",
    "align_phase",
    "center_peak",
    "distance_mod_phase",
    "functionals",
    "gradient_energy",
    "nehari_project",
    "ode_residual",
    "random_field",
    "RegionAnalysis",
    "analyze_region",
    "classify_portrait",
    "half_kink_omega",
    "region_boundaries",
    "region_label",
    "scan_region_map",
    "stationary_radii",
    "__version__",
]
