use alloc::string::String;
use num_bigint::BigInt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(BigInt),

    #[error("matrix is not in Γ_{n}({level})")]
    WrongLevel { n: usize, level: BigInt },

    #[error("invalid symbol: {0}")]
    InvalidSymbol(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("positions must be pairwise distinct and within 1..={n}")]
    InvalidPositions { n: usize },

    #[error("entry {0} is zero")]
    ZeroEntry(usize),

    #[error("entries are not coprime (gcd {0})")]
    NotCoprime(BigInt),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("size cap {cap} exceeded (reached {reached} elements)")]
    CapExceeded { cap: usize, reached: usize },

    #[error("generator {index} is not invertible modulo {modulus}")]
    NonInvertibleGenerator { index: usize, modulus: u64 },

    #[error("generating set does not generate the group (Cayley graph is disconnected)")]
    NotGenerating,

    #[error("eigensolver did not reach tolerance: residual {residual:e} after {iterations} matrix-vector products")]
    Tolerance { residual: f64, iterations: usize },

    #[error("internal invariant violated: {0}")]
    InternalInvariant(&'static str),
}
