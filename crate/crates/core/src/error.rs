use thiserror::Error;

pub type Result<T> = std::result::Result<T, MolrError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MolrError {
    #[error("bad dimensions: {0}")]
    BadDimensions(String),
    #[error("row {0} is not a permutation of the symbol set")]
    RowNotPermutation(usize),
    #[error("column {0} repeats symbol {1}")]
    ColumnRepeat(usize, u8),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("rectangles {0} and {1} are not orthogonal: pair ({2}, {3}) repeats")]
    NotOrthogonal(usize, usize, u8, u8),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("isotopism is not an autotopism of the representative")]
    NotAnAutotopism,
    #[error("{0} is not a prime power")]
    NotAPrimePower(usize),
    #[error("order {0} is too small for a MOLS construction")]
    NTooSmall(usize),
    #[error("cyclic map does not stabilize the Galois construction")]
    NotGaloisConstruction,
    #[error("expected a complete set of n-1 MOLS of order n")]
    NotAFullMolsSet,
    #[error("the selected lines are concurrent")]
    ConcurrentLines,
    #[error("line {0} is a row line")]
    LineIsARow(usize),
    #[error("wrong shape: {0}")]
    WrongShape(String),
    #[error("class budget exceeded at level k={level} with {classes} classes")]
    BudgetExceeded { level: usize, classes: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
