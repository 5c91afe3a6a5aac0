use thiserror::Error;

/// Errors raised by the growth, sampling, zero-finding and covariance routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("coefficient sequence is not entire: {0}")]
    NonEntireSequence(String),

    #[error("invalid index {0}: b_n is defined for n >= 1")]
    InvalidIndex(usize),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("fewer than two dominant terms (n(r) = {0})")]
    TooFewDominantTerms(usize),

    #[error("tail bound {log_tol} not reached below degree cap {cap}")]
    TruncationFailure { log_tol: f64, cap: usize },

    #[error("|z| = {modulus} lies outside the certified disk of radius {r_max}")]
    OutOfCertifiedDisk { modulus: f64, r_max: f64 },

    #[error("operation needs a Gaussian ensemble, got {0}")]
    UnsupportedEnsemble(String),

    #[error("Rouche margin unverifiable at r = {r}: min |f| on circle {min_modulus:e} vs tail {tail:e}")]
    RoucheMarginUnverifiable { r: f64, min_modulus: f64, tail: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("root within the boundary exclusion of |z| = {0} could not be avoided")]
    BoundaryRootUnresolved(f64),

    #[error("f(0) = 0; factor out the zero at the origin first")]
    ZeroAtOrigin,

    #[error("rare event infeasible: expected holes below 10 starting at r = {r} (estimated P = {p:e})")]
    RareEventInfeasible { r: f64, p: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
