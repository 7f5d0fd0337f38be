//! Time integration of a lumped mass-spring system damped by a yield
//! dashpot (Bingham for a unit flow exponent, Norton power law otherwise).
//!
//! The velocity is given implicitly as a function of the dashpot force, so
//! the governing system is a nonsmooth differential-algebraic equation. The
//! integrator is a generalized trapezoidal scheme with independent weights
//! for the momentum balance (`alpha`) and the spring rate equation
//! (`beta`); each step reduces to a stick test on a trial force followed,
//! on the flowing branch, by a scalar solve for the dashpot force.

pub mod analysis;
pub mod config;
pub mod constitutive;
pub mod integrator;
pub mod output;
pub mod rootfind;
pub mod simulate;

pub use analysis::{
    convergence_study, dissipated_energy_total, energy_balance_residual, error_norm,
    AnalysisError, ConvergenceReport, ErrorReport,
};
pub use config::{parse_config, render_config, ConfigError, PresetId};
pub use constitutive::{
    invert_phi, phi, phi_derivative, DashpotParams, InvalidParam, SystemParams,
};
pub use integrator::{
    discrete_residuals, initialize, predictor, solve_dashpot_linear, solve_dashpot_nonlinear,
    step, IntegratorParams, State, StepDiagnostics, StepError,
};
pub use rootfind::{solve_bracketed, RootError, RootResult, SolverControls};
pub use simulate::{
    eval_forcing, run, run_benchmark, run_with_stride, ForcingSpec, RunConfig, RunError,
    Trajectory,
};
