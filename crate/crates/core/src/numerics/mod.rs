//! Numerical kernels shared by the solver pipelines.

mod linalg;
mod ode;

pub use linalg::{eigenvalues, lyapunov_residual, lyapunov_solve, spectral_abscissa};
pub use ode::{
    integrate, OdeSpec, SolveReport, Tolerances, DEFAULT_ATOL, DEFAULT_MAX_STEPS, DEFAULT_RTOL,
};
