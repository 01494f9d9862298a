use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Permutation data is not a rotation system with a fixed-point-free pairing.
    #[error("malformed map: {0}")]
    MalformedMap(String),

    /// Euler characteristic or labels do not describe a surface.
    #[error("inconsistent map: {0}")]
    InconsistentMap(String),

    #[error("signature mismatch: expected {expected}, found {found}")]
    SignatureMismatch { expected: String, found: String },

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("edge {0} is not a diagonal")]
    NotADiagonal(usize),

    #[error("wrong contraction kind: {0}")]
    WrongContractionKind(String),

    #[error("arrangement has {count} automorphisms; signature {signature} is not stable")]
    Unstable { signature: String, count: usize },

    #[error("budget exceeded: {0}")]
    Budget(String),

    /// A checked structural claim failed. Always a bug or a counterexample.
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("parity undefined for an even number of colors ({0})")]
    EvenColorCount(usize),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("integer overflow in exact linear algebra")]
    Overflow,

    #[error("bad input: {0}")]
    BadInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status: 2 for a failed invariant, 3 for an exhausted
    /// budget, 4 for unusable input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) | Error::Dimension(_) | Error::Overflow => 2,
            Error::Budget(_) => 3,
            _ => 4,
        }
    }
}
