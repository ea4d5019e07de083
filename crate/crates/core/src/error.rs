use thiserror::Error;

/// Failure modes of the q-series, recurrence and continued-fraction routines.
///
/// Every numerical hazard surfaces here instead of leaking a NaN or an
/// infinity into a result.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QError {
    #[error("invalid context: {0}")]
    InvalidContext(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("balance condition violated: relative defect {defect:e} exceeds {tol:e}")]
    BalanceViolated { defect: f64, tol: f64 },

    #[error("zero denominator in {what}")]
    ZeroDenominator { what: String },

    #[error("divergent series {what}: limiting term ratio {ratio:e} is not below 1")]
    Divergent { what: String, ratio: f64 },

    #[error("no convergence within {terms} terms ({what})")]
    MaxTermsExceeded { what: String, terms: usize },

    #[error("degenerate parameters: {0}")]
    DegenerateParameters(String),

    #[error("minimal solution lost at n = {n}: estimated relative error {estimate:e}")]
    MinimalityLost { n: i64, estimate: f64 },

    #[error("zero pivot at continued-fraction index {index}")]
    ZeroPivot { index: usize },

    #[error("continued fraction not converged at depth {depth}: estimated error {est_error:e}")]
    NonConvergent { depth: usize, est_error: f64 },

    #[error("non-finite value produced in {0}")]
    NonFinite(String),
}

pub type Result<T> = std::result::Result<T, QError>;

impl QError {
    /// Variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            QError::InvalidContext(_) => "InvalidContext",
            QError::InvalidParameters(_) => "InvalidParameters",
            QError::BalanceViolated { .. } => "BalanceViolated",
            QError::ZeroDenominator { .. } => "ZeroDenominator",
            QError::Divergent { .. } => "Divergent",
            QError::MaxTermsExceeded { .. } => "MaxTermsExceeded",
            QError::DegenerateParameters(_) => "DegenerateParameters",
            QError::MinimalityLost { .. } => "MinimalityLost",
            QError::ZeroPivot { .. } => "ZeroPivot",
            QError::NonConvergent { .. } => "NonConvergent",
            QError::NonFinite(_) => "NonFinite",
        }
    }
}
