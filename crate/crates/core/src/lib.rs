//! Simulation library for the growth random walk (a walker that attaches
//! leaves to the tree it walks on), its loop-process comparison, couplings
//! and estimators.

pub mod couplings;
mod error;
pub mod loops;
pub mod process;
pub mod rng;
pub mod statistics;
pub mod topology;

pub use error::{Error, Result};

/// Index of a vertex in a [`process::TreeState`].
pub type VertexId = u32;
