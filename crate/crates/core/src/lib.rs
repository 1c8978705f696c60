//! Arithmetic of binary cubic forms, quadratic class groups and 3-isogenies,
//! with the counting experiments built on them.

pub mod arith;
pub mod classgroups;
pub mod constants;
pub mod curves;
pub mod error;
pub mod forms;
pub mod localconditions;
pub mod selmer;
pub mod sieve;
pub mod verify;

pub use error::{Error, Result};
