//! Simulation and analysis toolkit for a diffusive Leslie-Gower
//! predator-prey system with a free boundary: front-fixed PDE integration,
//! closed-form spectral thresholds, semi-wave and wavefront profiles, and
//! spreading/vanishing classification with a rigorous speed bracket.

pub mod config;
pub mod dichotomy;
pub mod error;
pub mod model;
pub mod runner;
pub mod solver;
pub mod spectral;
pub mod waves;

pub use dichotomy::{
    classify, critical_d_rules, speed_estimate, thresholds, ClassificationReport, ClassifyConfig,
    SpeedEstimate, ThresholdSet, Verdict,
};
pub use config::{parse_config, parse_sweep, serialize, RunConfig, SweepSpec};
pub use error::{Error, Result};
pub use model::{
    apriori_bounds, equilibria, make_initial_profile, nondimensionalize, squeeze_limits,
    AprioriBounds, DimensionalParameters, Equilibria, InitialProfile, Parameters, ProfileFamily,
};
pub use runner::{run_single, run_sweep, RunOutcome, RunRecord, SweepSummary};
pub use solver::{
    boundary_flux, ode_envelopes, run, transform_coefficients, Cutoff, DtPolicy,
    MovingDomainState, SolverConfig, Trajectory,
};
pub use spectral::{critical_diffusivity, critical_length, principal_eigenvalue, EigenProblemSpec};
pub use waves::{
    asymptotic_speed, minimal_wave_speed, semi_wave_slope, solve_semi_wave,
    solve_wavefront, FrontProfile, SemiWaveSolution,
};
