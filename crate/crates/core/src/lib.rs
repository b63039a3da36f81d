//! Spectral conditions for odd `[1, b]`-factors in regular graphs.
//!
//! The crate provides the eigenvalue threshold `rho(r, b)` together with the
//! extremal graphs attaining it, a dense symmetric eigensolver with quotient
//! matrix tools, two independent deciders for factor existence, and a
//! harness that cross-checks all of them numerically.

pub mod exec;
pub mod factor;
pub mod graph;
pub mod io;
pub mod spectral;
pub mod thresholds;
pub mod verify;

pub use exec::Execution;
pub use graph::{Graph, GraphError, VertexSet};
