//! Exact verification engine for SL₂(q)/PSL₂(q) with q ≡ 5, 13 (mod 24).

pub mod algebra;
pub mod char_table;
pub mod complex;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod group;
pub mod linalg;
pub mod report;
pub mod runner;
pub mod unitary;
pub mod verifier;

pub use error::{Error, Result};
