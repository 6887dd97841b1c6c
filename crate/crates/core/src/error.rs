use thiserror::Error;

/// Failure modes shared by all numerical routines in the crate.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("{what}: argument {value} outside the domain")]
    Domain { what: &'static str, value: f64 },

    #[error("{what}: pole at k = {k} (denominator {denominator:e} inside the guard band)")]
    Pole {
        what: &'static str,
        k: f64,
        denominator: f64,
    },

    #[error("{what}: singular denominator {denominator:e}")]
    Singular {
        what: &'static str,
        denominator: f64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("insufficient data: need at least {needed}, got {got}")]
    InsufficientData { needed: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
