//! Finite views of rooted trees: balls, canonical codes, the local metric.

pub mod ball;
pub mod canon;
pub mod metric;

pub use ball::{extract_ball, max_degree_within, RootedBall};
pub use canon::{canonical_encode, leaf_code, path_code, rooted_isomorphic, CanonicalCode};
pub use metric::{rho_distance, Rho};
