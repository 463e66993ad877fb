use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("operation undefined on the zero polynomial: {0}")]
    ZeroPolynomial(&'static str),
    #[error("exact division left a nonzero remainder")]
    InexactDivision,
    #[error("degree {degree} exceeds the cap {cap}")]
    DegreeCapExceeded { degree: usize, cap: usize },
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("singular pencil: determinant vanishes identically (Kronecker singular case out of scope)")]
    SingularPencil,
    #[error("{what}: size {size} exceeds the limit {limit}")]
    CostGuard { what: &'static str, size: usize, limit: usize },
    #[error("adjugate vanishes at the root; use the nullspace basis instead")]
    HigherGeometricMultiplicity,
    #[error("root has multiplicity {0}; the Jordan path is required")]
    MultipleRoot(u32),
    #[error("not definite: {0}")]
    NotDefinite(String),
    #[error("exact path unavailable: {0}")]
    PathUnavailable(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
