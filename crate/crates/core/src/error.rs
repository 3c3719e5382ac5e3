use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of supported range: {0}")]
    OutOfRange(String),

    #[error("order overflow: {0}")]
    OrderOverflow(String),

    #[error("not a subgroup: {0}")]
    NotSubgroup(String),

    #[error("invalid element: {0}")]
    InvalidElement(String),

    #[error("incomplete irrep list: sum of squared degrees {sum} != group order {order}")]
    IncompleteIrreps { sum: usize, order: usize },

    #[error("degenerate split; retry with new random seed ({0})")]
    DegenerateSplit(String),

    #[error("non-integral value {value} where an integer was expected ({context})")]
    NonIntegral { value: f64, context: String },

    #[error("imaginary part {0:e} exceeds tolerance (broken irrep?)")]
    NotReal(f64),

    #[error("missing frame for irrep tuple {0}")]
    MissingFrame(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("hypothesis not met: {0}")]
    Hypothesis(String),

    #[error("broken character table: {0}")]
    BrokenTable(String),

    #[error("invalid embedding: {0}")]
    Embedding(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
