//! Large neighborhood search for pure-binary integer linear programs.
//!
//! The crate bundles everything needed to run destroy/repair search on
//! binary ILPs without an external solver:
//!
//! - [`model`] — the canonical instance/assignment data model;
//! - [`simplex`] — a bounded-variable two-phase simplex for the `[0,1]` box;
//! - [`exact`] — branch-and-bound and a brute-force enumerator;
//! - [`lns`] — the search engine and its destroy heuristics, including the
//!   local-branching-relaxation family;
//! - [`generators`] — seeded benchmark families (vertex cover, independent
//!   set, set covering, multiple knapsack);
//! - [`io`] — canonical JSON instances, an MPS-subset reader, and run
//!   persistence;
//! - [`metrics`] — primal gap / primal integral / survival-rate evaluation.
//!
//! All numeric code is generic over [`scalar::Scalar`]; the aliases below fix
//! the shipped `f64` precision.

pub mod exact;
pub mod generators;
pub mod io;
pub mod lns;
pub mod metrics;
pub mod model;
pub mod scalar;
pub mod simplex;

pub use scalar::Scalar;

/// Shipped-precision instance type.
pub type Instance = model::IlpInstance<f64>;
/// Shipped-precision 0/1 assignment.
pub type Solution = model::Assignment<f64>;
/// Shipped-precision point of the `[0,1]` box relaxation.
pub type RelaxedPoint = model::FractionalAssignment<f64>;
