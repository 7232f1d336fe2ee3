use thiserror::Error;

/// Errors produced by fan construction, intersection computations and parsing.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("vectors are linearly dependent")]
    RankDeficient,

    #[error("not a Fano input: {0}")]
    NotFano(String),

    #[error("generator {index} is not a vertex of the spanning polytope")]
    NonVertexGenerator { index: usize },

    #[error("spanning polytope has a non-simplicial facet ({0} vertices)")]
    NonSimplicialFacet(usize),

    #[error("fan is not complete: {0}")]
    NotComplete(String),

    #[error("fan is not simplicial")]
    NotSimplicial,

    #[error("structural error: {0}")]
    Structure(String),

    #[error("surface has Picard number {got}, expected {expected}")]
    PicardMismatch { expected: i64, got: i64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid input: {0}")]
    Validation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
