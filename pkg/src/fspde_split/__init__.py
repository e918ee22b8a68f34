"""Splitting integrator for semilinear heat equations driven by
fractional space-time noise, with exactly solvable one-mode oracles.

The package is organised bottom-up:

* :mod:`fspde_split.noise` samples exact fractional Gaussian increment
  lattices (circulant embedding, per-mode counter-based streams);
* :mod:`fspde_split.fou` evaluates second moments of damped scalar
  modes and their discretisation errors without simulation;
* :mod:`fspde_split.lemmas` turns those oracles into scaling checks;
* :mod:`fspde_split.spectral` holds the sine basis, semigroup and
  smoothing factors;
* :mod:`fspde_split.flows` provides closed-form drift flow maps and a
  Runge-Kutta fallback;
* :mod:`fspde_split.scheme` is the splitting integrator itself;
* :mod:`fspde_split.study` runs coupled-lattice convergence studies;
* :mod:`fspde_split.service` exposes studies, lemma checks and noise
  sampling over HTTP; :mod:`fspde_split.cli` is a thin client.
"""

from .noise import (
    HurstModel,
    NoiseLattice,
    NoiseSamplingError,
    coarsen,
    exact_covariance_matrix,
    fgn_autocovariance,
    sample_fgn_path,
    sample_noise_lattice,
)
from .fou import (
    FouSpec,
    continuous_fou_variance_oracle,
    discrete_fou_variance,
    isometry_variance_plus,
    kernel_KH,
    kernel_KH_dt,
    scheme_error_variance_oracle,
    stationary_quadratic_form,
    temporal_increment_variance,
)
from .lemmas import LemmaCheck, LemmaReport, verify_lemmas
from .spectral import (
    PhysicalField,
    SpectralField,
    dst_forward,
    dst_inverse,
    interior_grid,
    l2_norm,
    laplacian_eigenvalues,
    semigroup_apply,
    semigroup_factors,
    smoothed_increment_apply,
    smoothing_factors,
    sobolev_norm,
)
from .flows import (
    DriftSplit,
    FlowDivergenceError,
    ScalarFlow,
    cubic_linear_flow,
    ode_flow,
    ode_oracle,
    poly_flow,
    psi,
)
from .scheme import (
    SchemeConfig,
    SchemeDivergenceError,
    TrajectoryState,
    initial_field,
    run_linear,
    run_trajectory,
    step,
)
from .study import (
    ConvergenceReport,
    StudyConfig,
    convergence_study,
    emit_report,
    fit_rate,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "HurstModel", "NoiseLattice", "NoiseSamplingError", "coarsen",
    "exact_covariance_matrix", "fgn_autocovariance", "sample_fgn_path",
    "sample_noise_lattice",
    "FouSpec", "continuous_fou_variance_oracle", "discrete_fou_variance",
    "isometry_variance_plus", "kernel_KH", "kernel_KH_dt",
    "scheme_error_variance_oracle", "stationary_quadratic_form",
    "temporal_increment_variance",
    "LemmaCheck", "LemmaReport", "verify_lemmas",
    "PhysicalField", "SpectralField", "dst_forward", "dst_inverse",
    "interior_grid", "l2_norm", "laplacian_eigenvalues", "semigroup_apply",
    "semigroup_factors", "smoothed_increment_apply", "smoothing_factors",
    "sobolev_norm",
    "DriftSplit", "FlowDivergenceError", "ScalarFlow", "cubic_linear_flow",
    "ode_flow", "ode_oracle", "poly_flow", "psi",
    "SchemeConfig", "SchemeDivergenceError", "TrajectoryState",
    "initial_field", "run_linear", "run_trajectory", "step",
    "ConvergenceReport", "StudyConfig", "convergence_study", "emit_report",
    "fit_rate",
]
