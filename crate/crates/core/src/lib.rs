//! Ricci operator signatures of left-invariant Riemannian metrics on
//! low-dimensional Lie groups.

pub mod a49;
pub mod algebra;
pub mod curvature;
pub mod error;
pub mod metric;
pub mod search;
pub mod signature;
pub mod table3;

pub use error::{Error, Result};
