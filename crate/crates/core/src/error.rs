use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("complex dimension {0} outside supported range 1..={max}", max = crate::MAX_DIM)]
    UnsupportedDimension(usize),

    #[error("invalid multi-index {indices:?} for dimension {n}")]
    InvalidIndex { indices: Vec<usize>, n: usize },

    #[error("bidegree mismatch: expected {expected}, found {found}")]
    Bidegree { expected: String, found: String },

    #[error("bandwidth overflow on axis {axis}: {requested} exceeds cap {cap}")]
    BandwidthOverflow {
        axis: usize,
        requested: u32,
        cap: u32,
    },

    #[error("backend capability mismatch: {0}")]
    Capability(String),

    #[error("chart-local field not integrable")]
    NotIntegrable,

    #[error("expected a real {0}")]
    NotReal(&'static str),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid structure constants: {0}")]
    InvalidStructure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}
