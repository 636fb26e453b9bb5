//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("singular matrix: pivot {index} has magnitude {magnitude:e}")]
    SingularMatrix { index: usize, magnitude: f64 },

    #[error("matrix is not positive definite: pivot {index} = {pivot:e}")]
    NotPositiveDefinite { index: usize, pivot: f64 },

    #[error("matrix is not Hermitian: defect {defect:e}")]
    NotHermitian { defect: f64 },

    #[error("matrix is not symmetric: defect {defect:e}")]
    NotSymmetric { defect: f64 },

    #[error("matrix is not symplectic: defect {defect:e}")]
    NotSymplectic { defect: f64 },

    #[error("matrix is not unitary: defect {defect:e}")]
    NotUnitary { defect: f64 },

    #[error("non-finite entry")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimensionMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("ill-conditioned matrix: condition estimate {cond:e}")]
    IllConditioned { cond: f64 },

    #[error("automorphy factor is numerically singular")]
    SingularFactor,

    #[error("Cayley conjugation verification failed: residual {residual:e}")]
    ConjugationMismatch { residual: f64 },

    #[error("quadratic form has non-real value: imaginary part {imag:e}")]
    FormNotReal { imag: f64 },

    #[error("jet order too low: need {needed}, have {have}")]
    JetOrderTooLow { needed: usize, have: usize },

    #[error("unsupported dimension n={n}, m={m}")]
    UnsupportedDimension { n: usize, m: usize },

    #[error("unsupported order {0}")]
    UnsupportedOrder(usize),

    #[error("unsupported polynomial degree {0}")]
    UnsupportedDegree(usize),

    #[error("index out of range")]
    IndexOutOfRange,

    #[error("iteration limit reached after {0} steps")]
    IterationLimit(usize),

    #[error("quadrature did not converge: last correction {last_delta:e}")]
    QuadratureNotConverged { last_delta: f64 },

    #[error("pair ({0}, {1}) is not coprime")]
    NotCoprime(i64, i64),

    #[error("quadrature grid too coarse: off-diagonal mass {offdiag:e}")]
    GridTooCoarse { offdiag: f64 },
}
