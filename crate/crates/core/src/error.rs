//! Error type shared by every stage of the pipeline.

use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("term mixes A-local and B-local symbols: {0}")]
    MixedTerm(String),
    #[error("fresh constant `{0}` has no definition")]
    UnknownFreshConstant(String),
    #[error("invalid schema: {0}")]
    Schema(String),
    #[error("unsupported literal for this theory: {0}")]
    UnsupportedLiteral(String),
    #[error("unsupported connective for this theory: {0}")]
    UnsupportedConnective(String),
    #[error("no separating term for {0}")]
    NoSeparator(String),
    #[error("clause cannot be separated: {0}")]
    NotSeparable(String),
    #[error("input is satisfiable; no interpolant exists")]
    NotUnsat,
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("clause set is not Horn")]
    NotHorn,
    #[error("no refutation available")]
    NoProof,
    #[error("extension signatures overlap: {0}")]
    SignatureOverlap(String),
    #[error("parse error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
