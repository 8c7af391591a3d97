use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{op}: dimension mismatch ({}x{} vs {}x{})", left.0, left.1, right.0, right.1)]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("{0}: integer overflow")]
    Overflow(&'static str),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field order {0} exceeds the supported bound 2^20")]
    FieldTooLarge(u64),

    #[error("no primitive polynomial found for GF({p}^{e})")]
    NoPrimitivePolynomial { p: u32, e: u32 },

    #[error("zero has no discrete logarithm")]
    ZeroLog,

    #[error("incompatible field pair: {0}")]
    IncompatibleFields(String),

    #[error("{divisor} does not divide {value} ({what})")]
    NotDivisible {
        what: &'static str,
        divisor: u64,
        value: u64,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("layers overlap at ({row}, {col})")]
    LayerOverlap { row: usize, col: usize },

    #[error("certificate failed: {0}")]
    CertificateFailed(String),

    #[error("not an association scheme: {0}")]
    NotAScheme(String),

    #[error("spectrum mismatch: {0}")]
    SpectrumMismatch(String),

    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when the error reports a failed mathematical check rather than bad input.
    pub fn is_check_failure(&self) -> bool {
        matches!(
            self,
            Error::CertificateFailed(_)
                | Error::NotAScheme(_)
                | Error::SpectrumMismatch(_)
                | Error::LayerOverlap { .. }
        )
    }
}
