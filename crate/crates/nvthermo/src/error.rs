use thiserror::Error;

pub type Result<T> = std::result::Result<T, NvError>;

#[derive(Debug, Error)]
pub enum NvError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("capacity error: {0}")]
    Capacity(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    /// Eigenstate labeling could not be resolved; expected near level
    /// anticrossings where product-basis character is lost.
    #[error("ambiguous state labels (max overlap below {threshold}): states {states:?}")]
    Ambiguity { threshold: f64, states: Vec<usize> },

    #[error("lookup error: {0}")]
    Lookup(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("rank error: {0}")]
    Rank(String),

    #[error("{path}:{line}:{col}: parse error: {msg}")]
    Parse {
        path: String,
        line: usize,
        col: usize,
        msg: String,
    },

    #[error("extrapolation error: {0}")]
    OutOfRange(String),

    #[error("derivative undefined at table boundary: {0}")]
    Boundary(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
