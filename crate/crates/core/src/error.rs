use thiserror::Error;

/// Violated identity reported by algebra validation, with the witness indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraViolation {
    /// c_{ij}^k nonzero although deg(k) != deg(i) + deg(j).
    Degree { i: usize, j: usize, k: usize },
    /// Associativity fails on the basis quadruple (i, j, k) at output l.
    Associativity { i: usize, j: usize, k: usize, l: usize },
    /// 1 * b_j != b_j (left) or b_j * 1 != b_j (right), failing at output k.
    LeftUnit { j: usize, k: usize },
    RightUnit { j: usize, k: usize },
    /// The unit vector has a component outside degree 0.
    UnitDegree { index: usize },
}

impl std::fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgebraViolation::Degree { i, j, k } => {
                write!(f, "degree additivity fails at c_({i},{j})^{k}")
            }
            AlgebraViolation::Associativity { i, j, k, l } => {
                write!(f, "associativity fails on ({i},{j},{k}) at output {l}")
            }
            AlgebraViolation::LeftUnit { j, k } => write!(f, "left unit law fails at (1*b{j})_{k}"),
            AlgebraViolation::RightUnit { j, k } => write!(f, "right unit law fails at (b{j}*1)_{k}"),
            AlgebraViolation::UnitDegree { index } => {
                write!(f, "unit has a component on basis vector {index} of nonzero degree")
            }
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus out of range: {0} (need 2 <= p < 2^31)")]
    ModulusOutOfRange(u64),
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),
    #[error("invalid chain map: {0}")]
    InvalidMap(String),
    #[error("invalid poset: {0}")]
    InvalidPoset(String),
    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),
    #[error("algebra validation failed: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Algebra(Vec<AlgebraViolation>),
    #[error("unknown preset: {0}")]
    UnknownPreset(String),
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("unsupported scenario: {0}")]
    Unsupported(String),
    #[error("malformed document: {0}")]
    Document(String),
}

pub type Result<T> = std::result::Result<T, Error>;
