use thiserror::Error;

/// Errors raised by the numerical pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("oscillator order {n} exceeds the supported maximum {max}")]
    UnsupportedOrder { n: usize, max: usize },

    #[error("no eigenvalue at or below E_max = {e_max}")]
    EmptySpectrum { e_max: f64 },

    #[error("root finder did not converge on the bracket [{lo}, {hi}]")]
    Convergence { lo: f64, hi: f64 },

    #[error("no state with n = {n} and parity {parity}")]
    NoSuchState { n: usize, parity: String },

    #[error(
        "basis is incomplete: projection residual {residual:.3e} exceeds {limit:.1e}; \
         try E_max >= {suggested_e_max}"
    )]
    IncompleteBasis { residual: f64, limit: f64, suggested_e_max: f64 },

    #[error("state is not normalized: norm^2 = {norm_sq}")]
    Normalization { norm_sq: f64 },

    #[error("invalid configuration: {0}")]
    Configuration(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:.3e}")]
    PsdViolation { eigenvalue: f64 },

    #[error("position {x} lies outside the domain [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
}

impl Error {
    /// `true` for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Convergence { .. } | Error::PsdViolation { .. } | Error::IncompleteBasis { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
