use thiserror::Error;

/// Errors raised by the exact-arithmetic operations in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus not prime: {0}")]
    NotPrime(u64),

    #[error("modulus {0} out of range (must be below 2^31)")]
    ModulusTooLarge(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch between operands")]
    FieldMismatch,

    #[error("generator not invertible")]
    NotInvertible,

    #[error("empty seed set")]
    EmptySeeds,

    #[error("empty weight set")]
    EmptyWeightSet,

    #[error("duplicate weight {0:?}")]
    DuplicateWeight(Vec<i64>),

    #[error("zero cocharacter")]
    ZeroCocharacter,

    #[error("pairing needs an unconjugated cocharacter")]
    ConjugatedPairing,

    #[error("invalid flag: {0}")]
    InvalidFlag(String),

    #[error("subspace is not invariant under the generators")]
    NotInvariant,

    #[error("generator {0} is not unipotent")]
    NotUnipotent(usize),

    #[error("generated group is not unipotent (no common fixed vector on a quotient)")]
    NotUnipotentGroup,

    #[error("trivial subgroup")]
    TrivialSubgroup,

    #[error("limit does not exist")]
    LimitAbsent,

    #[error("operation needs a finite base field")]
    InfiniteField,

    #[error("empty generator tuple")]
    EmptyTuple,

    #[error("generator index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("enumeration budget exceeded: needs {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("invalid literal {0:?}")]
    InvalidLiteral(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}
