use num::BigUint;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("shell index {index} out of range 0..={max}")]
    ShellIndex { index: usize, max: usize },

    #[error("{0}")]
    Domain(String),

    #[error("state space has {states} entries, exceeding the brute-force cap {cap}")]
    CapExceeded { states: BigUint, cap: u64 },

    #[error(
        "Wilson eigenvalue hypothesis violated: alpha = 1 - n/(d(n-1)) = {alpha} is not in (1/2, 1); requires d(n-1) > 2n"
    )]
    WilsonHypothesis { alpha: f64 },

    #[error("numeric mode mismatch: {0}")]
    ModeMismatch(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
