//! Linear network coding over finite rings and modules.
//!
//! The crate covers the algebra (rings, modules, tensor products, matrix-field
//! quotients), networks and their fractional versions, linear codes and their
//! verification, code transports between modules, and exhaustive solvers.

pub mod algebra;
pub mod codes;
mod error;
pub mod generators;
pub mod network;
pub mod solver;
pub mod transforms;

pub use error::{Error, Result};
