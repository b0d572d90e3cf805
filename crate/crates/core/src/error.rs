use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid zero configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "quadrature did not converge on [{a}, {b}]: value {value:.6e}, error estimate {error:.3e} \
         after {subdivisions} subdivisions"
    )]
    QuadratureNonConvergence {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("no intersecting interval at level {level} for ({left}, {right})")]
    NoIntersectingInterval { level: usize, left: f64, right: f64 },

    #[error("infeasible constraint set: {0}")]
    InfeasibleConstraints(String),

    #[error("coefficient expansion lost conjugate symmetry: imaginary part {0:.3e}")]
    ConjugateSymmetry(f64),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}
