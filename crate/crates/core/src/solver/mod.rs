//! Exhaustive oracles for desk-scale instances.

mod reach;
mod search;
mod sweep;

use std::fmt;
use std::str::FromStr;

use serde_json::json;
use thiserror::Error;

use crate::agency::Agency;
use crate::graph::GraphError;

pub use reach::{config_reachability_max_k, REACHABILITY_MAX_NODES};
pub use search::{decide_agency, max_agents_for_horizon, min_horizon};
pub use sweep::{tree_bound_sweep, Counterexample, SweepReport, TreeBound};

/// Environment variable overriding the default caps, e.g. `n=10,k=6,t=20`.
pub const CAPS_ENV: &str = "SYNCTSP_CAPS";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("{what} = {value} exceeds the solver cap {cap} (raise with --force or {CAPS_ENV})")]
    CapExceeded { what: &'static str, value: usize, cap: usize },
    #[error("graph must be a tree")]
    NotTree,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Upper limits on instance size for the exhaustive search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub nodes: usize,
    pub agents: usize,
    pub horizon: usize,
}

impl Caps {
    pub const DEFAULT: Caps = Caps { nodes: 8, agents: 4, horizon: 16 };
    /// Limits imposed by the bitmask representation, used by `--force`.
    pub const FORCED: Caps = Caps { nodes: 64, agents: 64, horizon: 4096 };

    /// Defaults, overridden field by field from `SYNCTSP_CAPS` when set.
    pub fn from_env() -> Result<Caps, SolveError> {
        match std::env::var(CAPS_ENV) {
            Ok(s) => s.parse(),
            Err(_) => Ok(Caps::DEFAULT),
        }
    }

    pub fn check(&self, nodes: usize, agents: usize, horizon: usize) -> Result<(), SolveError> {
        for (what, value, cap) in [
            ("n", nodes, self.nodes),
            ("k", agents, self.agents),
            ("T", horizon, self.horizon),
        ] {
            if value > cap {
                return Err(SolveError::CapExceeded { what, value, cap });
            }
        }
        if nodes > Caps::FORCED.nodes {
            return Err(SolveError::CapExceeded { what: "n", value: nodes, cap: Caps::FORCED.nodes });
        }
        Ok(())
    }
}

impl Default for Caps {
    fn default() -> Self {
        Caps::DEFAULT
    }
}

impl FromStr for Caps {
    type Err = SolveError;

    fn from_str(s: &str) -> Result<Caps, SolveError> {
        let mut caps = Caps::DEFAULT;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| SolveError::Invalid(format!("cap entry `{part}` is not key=value")))?;
            let value: usize = value
                .trim()
                .parse()
                .map_err(|_| SolveError::Invalid(format!("cap `{key}` has non-integer value `{value}`")))?;
            match key.trim() {
                "n" => caps.nodes = value,
                "k" => caps.agents = value,
                "t" | "T" => caps.horizon = value,
                other => return Err(SolveError::Invalid(format!("unknown cap `{other}`"))),
            }
        }
        Ok(caps)
    }
}

impl fmt::Display for Caps {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={},k={},t={}", self.nodes, self.agents, self.horizon)
    }
}

/// Outcome of [`decide_agency`]: a witness, or a certificate that the
/// losslessly pruned search space was exhausted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Witness(Agency),
    Absent { nodes_expanded: u64 },
}

impl Decision {
    pub fn witness(&self) -> Option<&Agency> {
        match self {
            Decision::Witness(a) => Some(a),
            Decision::Absent { .. } => None,
        }
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, Decision::Absent { .. })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        match self {
            Decision::Witness(a) => {
                let agency: serde_json::Value =
                    serde_json::from_str(&a.to_json()).expect("agency JSON is valid");
                json!({ "result": "witness", "agency": agency })
            }
            Decision::Absent { nodes_expanded } => {
                json!({ "result": "absent", "nodes_expanded": nodes_expanded })
            }
        }
    }
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool.
/// Results do not depend on the thread count.
pub fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}
