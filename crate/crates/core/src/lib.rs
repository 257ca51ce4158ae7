//! Finite-volume solvers for the genetic-drift diffusion equation
//! `f_t + j_x = 0` with current `j = -(x(1-x) f)_x` and zero-current
//! boundaries on `[0,1]`.
//!
//! The diffusion coefficient degenerates at both ends, so the density piles
//! up into Dirac-like boundary spikes; a discretization is only trustworthy
//! if it conserves both the total probability and the expectation, which pin
//! the limiting spike weights to `1-p` and `p`. Three implicit finite-volume
//! schemes are provided:
//!
//! * the upwind scheme (`O(h)` artificial viscosity),
//! * a split central scheme (`O(h^2)` artificial viscosity),
//! * the whole-flux central scheme, which conserves both functionals.
//!
//! The first two equilibrate to equal boundary spikes no matter the initial
//! mean; the whole-flux scheme reproduces the correct weights. The exact
//! stencil differences between the schemes are available as standalone
//! residuals, and [`viscosity`] carries the closed-form regularized steady
//! state whose vanishing-viscosity limit explains the artificial behavior.
//! [`oracle`] adds a seeded Monte Carlo ensemble of the underlying
//! Wright-Fisher chain as an independent stochastic check.
//!
//! All numerics are generic over the scalar type ([`Real`]); the `f64`
//! aliases below are the intended entry point.

pub mod diagnostics;
mod error;
pub mod grid;
pub mod integrate;
pub mod linalg;
pub mod oracle;
mod scalar;
pub mod scheme;
pub mod viscosity;

pub use error::{Error, Result};
pub use scalar::Real;

pub use diagnostics::{
    discrete_expectation, discrete_probability, interior_mass, steady_report, weighted_norm,
    DiagnosticRecord, DiagnosticsTrace, SteadyStateReport,
};
pub use grid::{build_grid, gaussian_initial, Grid, InitialCondition, State};
pub use integrate::{run, run_from, step, RunConfig, Trajectory};
pub use linalg::{solve_dense, solve_tridiagonal, TridiagonalSystem};
pub use oracle::{
    ensemble_mean_trace, fixation_probability, one_step_moments, wf_step, ChainConfig,
    FixationEstimate, GenerationMoment,
};
pub use scheme::{
    assemble_operator, flux_divergence, half_node_flux, lambda_residual, lambda_tilde_residual,
    OperatorSystem, SchemeKind, SchemeOperator, SolverPath,
};
pub use viscosity::{
    f_epsilon, gauss_legendre, pair_with_test_function, TestFunction, ViscosityProfile,
};

/// Double-precision aliases; the reference tables require `f64`.
pub type Grid64 = Grid<f64>;
pub type State64 = State<f64>;
pub type InitialCondition64 = InitialCondition<f64>;
pub type SchemeOperator64 = SchemeOperator<f64>;
pub type RunConfig64 = RunConfig<f64>;
pub type Trajectory64 = Trajectory<f64>;
pub type ViscosityProfile64 = ViscosityProfile<f64>;
