use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode at site {q} is not reachable after {n} steps")]
    UnreachableMode { n: usize, q: i64 },

    #[error("site {q} has the wrong parity for {n} steps")]
    OddParity { n: usize, q: i64 },

    #[error("mode index {index} out of range for {n} steps")]
    IndexOutOfRange { n: usize, index: usize },

    #[error("states live at different steps ({left} and {right})")]
    StepMismatch { left: usize, right: usize },

    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("coherent field carries no photons")]
    ZeroField,

    #[error("quadrature did not converge: estimated error {estimate:e} with {points} points")]
    QuadratureNotConverged { estimate: f64, points: usize },

    #[error("two-photon input must sit at step 0 on site 0, found {mode}")]
    InputNotAtOrigin { mode: String },

    #[error("asymptotic coefficients need at least one step")]
    ZeroSteps,

    #[error("cannot parse mode label {0:?}")]
    ModeParse(String),
}
