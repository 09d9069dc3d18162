use thiserror::Error;

/// Errors raised by field construction, exact linear algebra and the
/// decomposition pipelines.
///
/// `Defect` is special: it reports that a construction step failed an
/// internal consistency assertion that the underlying theory guarantees.
/// Encountering it means a bug, not bad input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension modulus must be monic of degree >= 2")]
    BadModulus,
    #[error("extension modulus is reducible over the prime field")]
    ReducibleModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    Singular,
    #[error("the zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),
    #[error("expected a monic polynomial")]
    NotMonic,
    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("characteristic polynomials are not coprime (gcd has degree {gcd_degree})")]
    NotCoprime { gcd_degree: usize },
    #[error("matrix is not good cyclic")]
    NotGoodCyclic,
    #[error("matrix is a scalar multiple of the identity")]
    ScalarInput,
    #[error("trace condition violated: {0}")]
    TraceMismatch(String),
    #[error("operation requires characteristic {expected}, field has characteristic {found}")]
    WrongCharacteristic { expected: u64, found: u64 },
    #[error("matrices are not similar")]
    NotSimilar,
    #[error("similarity witness does not conjugate its source to its target")]
    BadWitness,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("not decomposable: {0}")]
    NotDecomposable(String),
    #[error("input exceeds the enumeration bound for this oracle")]
    EnumerationBound,
    #[error("complete factorization is not supported over this field")]
    UnsupportedFactorization,
    #[error("internal consistency check failed: {0}")]
    Defect(String),
}

pub type Result<T> = std::result::Result<T, Error>;
