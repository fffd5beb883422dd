use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("degenerate binning: {0}")]
    DegenerateBinning(String),
    #[error("no objects segmented")]
    NoObjects,
    #[error("invalid histogram: {0}")]
    InvalidHistogram(String),
    #[error("invalid raster: {0}")]
    InvalidRaster(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("insufficient support: {0}")]
    InsufficientSupport(String),
    #[error("degenerate target: {0}")]
    DegenerateTarget(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{0}")]
    IllegalAction(String),
    #[error("unknown query template: {0}")]
    UnknownQuery(String),
    #[error("invalid scene: {0}")]
    InvalidScene(String),
    #[error("undefined rate: {0}")]
    UndefinedRate(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
