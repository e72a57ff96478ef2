pub mod classify;
pub mod constructions;
pub mod error;
pub mod exact;
pub mod gmod;
pub mod sl2;
pub mod wigner;

pub use error::{Error, Result};
pub use exact::{QMatrix, Rational, SqrtRational, SqrtSum};
