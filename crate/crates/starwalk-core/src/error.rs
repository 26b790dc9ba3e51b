//! Error type shared by every module in the crate.

use num_complex::Complex64;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A size parameter is zero, inconsistent, or out of range.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// An argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An oracle instance is malformed (no marked vertex, bad value table).
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    /// A sweep or generator configuration is unsatisfiable.
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A fit was requested on data that cannot support it.
    #[error("invalid data: {0}")]
    InvalidData(String),

    /// The grouped eigenvalue condition was evaluated at a pole.
    #[error("residual evaluated at a pole of class {class_index} (phase {phase})")]
    PoleEvaluation { class_index: usize, phase: f64 },

    /// Root iteration hit the cap; `best_roots` is the best iterate seen.
    #[error("root finding did not converge in {iterations} iterations (best residual {best_residual:.3e})")]
    Convergence {
        iterations: usize,
        best_residual: f64,
        best_roots: Vec<Complex64>,
    },

    /// The reduced polynomial has no double root, so the perturbation moves
    /// eigenvalues only at first order and no quadratic speedup exists.
    #[error("no quadratic speedup: {0}")]
    NoSpeedup(String),

    /// A dense construction would exceed the configured dimension cap.
    #[error("resource limit: {0}")]
    ResourceLimit(String),

    /// A numerical routine produced a result that fails its own contract.
    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
