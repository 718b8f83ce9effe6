//! Exact detection of torsion points on C_ab curves embedded in their
//! Jacobians, via Wronskians of Hasse–Schmidt derivatives.

pub mod bounds;
pub mod cli;
pub mod curve;
pub mod error;
pub mod exact_arith;
pub mod hasse_schmidt;
pub mod local;
pub mod poly;
pub mod torsion;
pub mod wronskian;

pub use error::{Error, Result};
