//! Evaluation of unilateral and bilateral basic hypergeometric series and
//! numerical, exact and certified verification of summation and
//! transformation identities between them.

pub mod cli;
pub mod error;
pub mod identities;
pub mod numerics;
pub mod qfactorial;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{Field, Mode, Scalar, Tolerance};
