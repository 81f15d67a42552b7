//! Constructive procedures that produce feasible agencies. Every public
//! constructor re-verifies its output with [`crate::check_feasibility`]
//! before returning it.

mod cubic;
mod delay;
mod occupancy;
mod puzzle;
mod tight_trees;

pub use cubic::{cubic_agency, cubic_agency_capped, minimal_parking_vector, round_up_to_four, CubicAgency, ParkingVector};
pub use delay::hamiltonian_delay_agency;
pub use occupancy::{
    full_occupancy_agency, full_occupancy_noparking_agency, DEFAULT_NOPARKING_STEP_CAP,
};
pub use puzzle::{
    tree_max_agents, tree_puzzle_agency, tree_puzzle_plan, PuzzlePlan, PuzzleStep,
    PLANNER_SEARCH_MAX_NODES,
};
pub use tight_trees::{build_example1, build_example2};

use thiserror::Error;

use crate::agency::{check_feasibility, Agency, AgencyError};
use crate::graph::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("constructed agency failed verification: {0}")]
    Verification(#[from] AgencyError),
    #[error("not a Hamiltonian cycle: {0}")]
    NotHamiltonian(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("parking padding reached T = {achieved}, target was {target}")]
    PaddingInfeasible { achieved: usize, target: usize },
    #[error("graph is not 2-edge-connected; no full-occupancy agency exists")]
    NotTwoEdgeConnected,
    #[error("edges lying on 2-factors do not span the graph connectedly; no agency exists")]
    TwoFactorUnionDisconnected,
    #[error("an agency exists but needs T = {q} * {t1} steps, above the cap {cap}")]
    HorizonCapExceeded { q: u128, t1: usize, cap: u128 },
    #[error("k = {k} exceeds the tree maximum {max} (n - stretch formula)")]
    TooManyAgents { k: usize, max: usize },
    #[error("planner failed: {0}")]
    Planner(String),
}

fn verified(g: &Graph, a: Agency) -> Result<Agency, ConstructError> {
    check_feasibility(g, &a)?;
    Ok(a)
}
