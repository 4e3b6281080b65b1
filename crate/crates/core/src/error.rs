use thiserror::Error;

use crate::ring::RingId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("ring mismatch: {0:?} vs {1:?}")]
    RingMismatch(RingId, RingId),

    #[error("operation undefined for the zero element")]
    ZeroInput,

    #[error("division by zero")]
    DivisionByZero,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cannot parse element {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("bound {requested} exceeds the configured limit {limit}")]
    BoundExceeded { requested: u64, limit: u64 },

    #[error("divisor lattice has {count} elements, budget is {budget}")]
    BudgetExceeded { count: u128, budget: u128 },

    #[error("Mersenne number with exponent {0} is not prime")]
    CompositeMersenne(u64),

    #[error("unsupported cyclotomic index p = {0}")]
    UnsupportedIndex(u32),

    #[error("cyclotomic index mismatch: {0} vs {1}")]
    IndexMismatch(u32, u32),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
