//! Sparse goal-conditioned value completion on graphs.
//!
//! A sparse set of goal-distance labels is extended to the whole graph by a
//! member of the graph p-Laplacian family (harmonic at `p = 2`, Picard
//! iteration for finite `p`, and the midrange AMLE operator at `p = ∞`). The
//! completed value field drives a deterministic argmin-Q greedy planner, and
//! the [`certificates`] module checks when local value error is small enough,
//! relative to the true action gap, for that planner to be guaranteed to
//! reach the goal.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: unit-cost (or positively weighted) undirected graphs,
//!   shortest-path distances, subdivision, fill distance, and the local
//!   geometry classes of the distance function.
//! - [`instances`]: maze layouts, sparse boundary sampling, the seven-vertex
//!   worked example, and random lattice candidates.
//! - [`solvers`]: harmonic, finite-p and AMLE Dirichlet extensions, residuals,
//!   harmonic measure and an exact rational path.
//! - [`planner`]: greedy steps, rollouts with cycle extraction, basins.
//! - [`certificates`]: action gaps, local errors, half-gap tests, Kendall-τ,
//!   fill-distance and anti-admissibility certificates.
//! - [`harness`]: experiment grids, audits, statistics and report files.
//!
//! ```
//! use graphpde::instances::builtin_g7;
//! use graphpde::solvers::{solve_amle, solve_harmonic};
//! use graphpde::planner::greedy_step;
//!
//! let g7 = builtin_g7();
//! let harmonic = solve_harmonic(&g7.graph, &g7.boundary, 1e-12).unwrap();
//! let amle = solve_amle(&g7.graph, &g7.boundary, 100_000, 1e-12).unwrap();
//! let s = g7.vertex(4);
//! assert_eq!(greedy_step(&g7.graph, &harmonic, g7.boundary.goal, s).unwrap(), g7.vertex(1));
//! assert_eq!(greedy_step(&g7.graph, &amle, g7.boundary.goal, s).unwrap(), g7.vertex(3));
//! ```

pub mod certificates;
pub mod error;
pub mod graph;
pub mod harness;
pub mod instances;
pub mod planner;
pub mod rng;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::{DistanceField, GeometryClass, Graph};
pub use instances::{BoundaryCondition, MazeLayout};
pub use planner::{Outcome, RolloutResult};
pub use solvers::{Method, ValueField};

/// Vertex identifiers are dense and 0-based.
pub type Vertex = usize;
