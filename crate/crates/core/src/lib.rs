//! Exact arithmetic for the leading-term congruence of cyclotomic units over
//! real quadratic fields and for Kolyvagin systems valued in graded augmentation quotients.

pub mod arith;
pub mod cyclo;
pub mod darmon;
pub mod error;
pub mod groupring;
pub mod kolysys;
pub mod localsym;
pub mod quadfield;

pub use error::{Error, Result};
