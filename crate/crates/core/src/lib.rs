//! Tangles, ends and ultrafilter tangles of finite and finitely presented
//! infinite graphs.

pub mod abstract_sep;
pub mod axioms;
pub mod blocks;
pub mod checks;
pub mod components;
pub mod ends;
pub mod error;
pub mod finite;
pub mod finite_tangle;
pub mod sampling;
pub mod schema;
pub mod semilinear;
pub mod separation;
pub mod symset;
pub mod tangle;
pub mod topology;
pub mod ultrafilter;

pub use error::{Error, Result};
