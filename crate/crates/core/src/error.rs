use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("spectrum is not Hermitian-symmetric (relative asymmetry {asymmetry:e})")]
    MalformedSpectrum { asymmetry: f64 },

    #[error("state became non-finite at t = {t}")]
    NonfiniteState { t: f64 },

    #[error("unsupported L^p exponent {0}; monitored exponents are 1, 2, 4 and infinity")]
    UnsupportedNorm(f64),

    #[error("need at least {required} samples in the fit window, found {found}")]
    InsufficientSamples { found: usize, required: usize },

    #[error("non-positive value {value:e} at t = {t}; shrink the fit window")]
    NonpositiveValue { t: f64, value: f64 },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("config line {line}: {message}")]
    ConfigParse { line: usize, message: String },

    #[error("config key `{key}`: {message}")]
    ConfigDomain { key: String, message: String },

    #[error("checkpoint {path}: {kind}")]
    Checkpoint { path: PathBuf, kind: CheckpointError },

    #[error("time series: {0}")]
    TimeSeries(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckpointError {
    #[error("bad magic bytes")]
    BadMagic,
    #[error("file truncated")]
    Truncated,
    #[error("non-finite payload")]
    NonfinitePayload,
    #[error("invalid header: {0}")]
    InvalidHeader(String),
}
