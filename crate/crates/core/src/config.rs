//! Numeric tolerances shared by constructors and operations.

/// One configuration record for every tolerance used by the crate.
///
/// All constructors and operations that need a tolerance either take a
/// `&Tolerances` explicitly or use [`Tolerances::default`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Maximum accepted asymmetry before a constructor rejects its input.
    pub sym_tol: f64,
    /// Cholesky pivots must exceed this for a positive-definite certificate.
    pub posdef_tol: f64,
    /// Maximum defect of `tM J M - J` accepted for a symplectic matrix.
    pub symplectic_tol: f64,
    /// Residual bound for linear-algebra post conditions.
    pub lin_tol: f64,
    /// LU pivots below this magnitude are treated as singular.
    pub pivot_tol: f64,
    /// Condition-number ceiling for inverses and metric inversion.
    pub cond_max: f64,
    /// Slack applied to fundamental-domain membership margins.
    pub memb_tol: f64,
    /// Relative step for the metric-field central differences inside the
    /// generic Laplace-Beltrami operator.
    pub h_lb: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sym_tol: 1e-12,
            posdef_tol: 1e-12,
            symplectic_tol: 1e-10,
            lin_tol: 1e-12,
            pivot_tol: 1e-14,
            cond_max: 1e14,
            memb_tol: 1e-9,
            h_lb: 1e-5,
        }
    }
}

impl Tolerances {
    pub const fn new() -> Self {
        Tolerances {
            sym_tol: 1e-12,
            posdef_tol: 1e-12,
            symplectic_tol: 1e-10,
            lin_tol: 1e-12,
            pivot_tol: 1e-14,
            cond_max: 1e14,
            memb_tol: 1e-9,
            h_lb: 1e-5,
        }
    }
}
