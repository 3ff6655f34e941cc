//! Crate-wide error type.

use crate::sparsity::NonSparseWitness;

/// Errors reported by automaton construction, analysis and arithmetic.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("digit {digit} out of range for base {base}")]
    DigitOutOfRange { digit: u32, base: u32 },

    #[error("base mismatch: {left} vs {right}")]
    BaseMismatch { left: u32, right: u32 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("direction mismatch: operation requires {required} input")]
    DirectionMismatch { required: &'static str },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("alphabet too large: base {base} with dimension {dim}")]
    AlphabetTooLarge { base: u32, dim: usize },

    #[error("automaton is not sparse: state {} has distinct return cycles", .witness.state)]
    NotSparse { witness: NonSparseWitness },

    #[error("bases {k} and {l} are multiplicatively dependent")]
    DependentBases { k: u64, l: u64 },

    #[error("malformed exponential sum: evaluation produced a non-integral value")]
    NonIntegralValue,

    #[error("forms do not agree: {x} vs {y}")]
    FormsDisagree { x: String, y: String },
}

pub type Result<T> = std::result::Result<T, Error>;
