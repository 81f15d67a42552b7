//! Synchronized traveling-salesman agencies on unit-capacity graphs.
//!
//! - [`graph`]: graphs, bridges, 2-factors, tree stretch metrics.
//! - [`agency`]: walks, tours, agencies, crash detection, strength.
//! - [`construct`]: constructive families of feasible agencies.
//! - [`solver`]: exhaustive oracles for small instances.

pub mod agency;
pub mod construct;
pub mod graph;
pub mod render;
pub mod solver;

pub use agency::{
    check_feasibility, find_crashes, is_feasible, is_tour, strength, validate_walk, Agency,
    AgencyError, CrashEvent, CrashKind, Rational, StrengthReport, WalkError,
};
pub use graph::{Edge, Graph, GraphError, Node};
