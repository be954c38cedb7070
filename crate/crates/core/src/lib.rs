//! Robin functions, capacities and condensers on finitely connected planar
//! domains, computed with a P1 finite element solver and cross-checked
//! against closed forms.

pub mod condenser;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod records;
pub mod robin;
pub mod solver;

pub use error::{Error, Result};
pub use num_complex::Complex64;
