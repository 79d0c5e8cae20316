use thiserror::Error;

use crate::report::ValidationReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("homogeneity violation: {0}")]
    Homogeneity(String),
    #[error("bilinear form is degenerate: {0}")]
    SingularForm(String),
    #[error("endomorphism is not invertible: {0}")]
    SingularEndomorphism(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("product table is incompatible with the bracket: {0}")]
    IncompatibleProduct(String),
    #[error("extension hypotheses fail:\n{0}")]
    Hypothesis(ValidationReport),
    #[error("algebra has trivial center")]
    NoCenter,
    #[error("no nonzero rational eigenvalue on the center: {0}")]
    NoRationalEigenvalue(String),
    #[error("no homogeneous dual vector with the required pairing: {0}")]
    DegeneratePair(String),
    #[error("unknown catalog entry: {0}")]
    UnknownEntry(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
