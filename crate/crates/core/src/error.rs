use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MswError {
    #[error("{0} is not a prime in [2, 65536]")]
    NotPrime(u64),
    #[error("field mismatch: GF({left}) vs GF({right})")]
    FieldMismatch { left: u32, right: u32 },
    #[error("shape mismatch: expected {expected:?}, found {found:?}")]
    ShapeMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("entry {value} out of range for GF({p})")]
    EntryOutOfRange { value: u64, p: u32 },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("enumeration of {count} elements exceeds cap {cap}")]
    EnumerationTooLarge { count: u128, cap: u64 },
    #[error("scan of {count} spaces exceeds ceiling {ceiling}")]
    ScanTooLarge { count: u128, ceiling: u128 },
    #[error("split index {d} invalid for size {n}")]
    BadSplit { d: usize, n: usize },
    #[error("matrix is not a member of the space")]
    NotMember,
    #[error("subspace is not invariant under the space")]
    NotInvariant,
    #[error("matrices do not form a basis of the alternating space")]
    NotABasis,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = MswError> = std::result::Result<T, E>;
