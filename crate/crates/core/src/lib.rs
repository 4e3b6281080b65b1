pub(crate) mod decimal;
pub mod cyclotomic;
pub mod divisor;
pub mod error;
pub mod factorization;
pub mod mersenne;
pub mod rational;
pub mod search;
pub mod verify;
pub mod ring;

pub use error::{Error, Result};
pub use ring::{QuadInt, RingId, Unit};
