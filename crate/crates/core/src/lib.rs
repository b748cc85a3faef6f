//! Gaussian-state entanglement in cavity optomechanics.
//!
//! Three pipelines share one covariance toolkit:
//!
//! * [`bo_closed`]: two mirrors coupled through two cavity modes in the
//!   Born-Oppenheimer limit, closed form per photon-number branch.
//! * [`bo_dissipative`]: the same model with cavity and mirror loss,
//!   integrated through the characteristic function.
//! * [`langevin`]: driven steady state of the linearized Langevin equations,
//!   solved as a Lyapunov equation.
//!
//! [`run`] ties these to JSON configs and CSV output.

// `!(x > 0.0)` rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod bo_closed;
pub mod bo_dissipative;
pub mod config;
pub mod error;
pub mod gaussian;
pub mod grid;
pub mod langevin;
pub mod numerics;
pub mod run;
pub mod weights;

pub use error::{Error, Result};
pub use gaussian::{log_negativity, CovarianceMatrix, NegativityValue, TwoModeCM};
pub use config::{load_config, write_config, Pipeline, RunConfig};
pub use run::{run, RunOutcome, SweepResult};
