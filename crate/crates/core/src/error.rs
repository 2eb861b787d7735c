use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not symmetric (|h[{row}][{col}] - h[{col}][{row}]| = {asymmetry:e})")]
    NotSymmetric {
        row: usize,
        col: usize,
        asymmetry: f64,
    },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("Fock truncation too coarse: trace deviates from 1 by {deviation:e} (allowed {allowed:e})")]
    TruncationTooCoarse { deviation: f64, allowed: f64 },

    #[error("expectation value {0} lies outside [-1, 1]")]
    InvalidMean(f64),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("integration step too large: norm drifted by {drift:e}")]
    StepSizeTooLarge { drift: f64 },

    #[error("photon cutoff {got} is below the required {required}")]
    PhotonCutoffTooSmall { got: usize, required: usize },

    #[error("unknown channel `{name}`; valid channels: {valid}")]
    UnknownChannel { name: String, valid: String },

    #[error("oracle dimension {dim} exceeds the limit {limit}; lower alpha or raise the limit")]
    ResourceLimit { dim: usize, limit: usize },

    #[error("malformed CSV: {0}")]
    Parse(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
