//! Exact computations in the Temperley-Lieb algebra at roots of unity.

pub mod algebra;
pub mod cell;
pub mod clifford;
pub mod diagram;
pub mod dims;
pub mod error;
pub mod fusion;
pub mod jw;
pub mod linalg;
pub mod modp;
mod par;
pub mod scalars;
pub mod series;
pub mod trace_form;
pub mod verify;

pub use error::{Error, Result};
