use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("unphysical covariance: {0}")]
    Unphysical(String),

    #[error("mode index out of range: ({i}, {j}) with {modes} modes")]
    ModeIndex { i: usize, j: usize, modes: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("Born-Oppenheimer domain violation for branch n = {n}: {reason}")]
    BranchDomain { n: i64, reason: String },

    #[error("integrator step size underflow at t = {t} (h = {h:e})")]
    StepUnderflow { t: f64, h: f64 },

    #[error("integrator exceeded {max_steps} steps at t = {t}")]
    MaxSteps { t: f64, max_steps: usize },

    #[error("time grid must be strictly ascending (index {index})")]
    TimeGrid { index: usize },

    #[error("eigenvalue iteration did not converge")]
    EigenConvergence,

    #[error("system is not stable (spectral abscissa {abscissa:e}); check is_stable before solving")]
    Unstable { abscissa: f64 },

    #[error("singular linear system: {0}")]
    Singular(&'static str),

    #[error(
        "steady-state iteration did not converge after {iterations} iterations \
         (residual {residual:e}, last a_s = {last_a}, b_s = {last_b})"
    )]
    SteadyStateNonConvergence {
        iterations: usize,
        residual: f64,
        last_a: num_complex::Complex64,
        last_b: num_complex::Complex64,
    },

    #[error("steady-state amplitudes are not phase-aligned: {0}")]
    PhaseReference(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
