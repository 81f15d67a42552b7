//! Exhaustive checks of the tree lower bounds over all small trees.

use serde_json::json;

use crate::agency::Agency;
use crate::graph::{graph_to_json, nonisomorphic_trees, Graph};

use super::{decide_agency, Caps, Decision, SolveError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeBound {
    /// `T/k >= 4` for every feasible agency.
    Ratio4,
    /// `T/k >= 5` when `T = 2n - 2`.
    Ratio5Shortest,
}

impl TreeBound {
    pub fn label(self) -> &'static str {
        match self {
            TreeBound::Ratio4 => "T/k >= 4",
            TreeBound::Ratio5Shortest => "T/k >= 5 at T = 2n-2",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub bound: TreeBound,
    pub graph: Graph,
    pub agency: Agency,
}

#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    pub trees: usize,
    pub instances: [usize; 2],
    pub counterexamples: Vec<Counterexample>,
    pub nodes_expanded: u64,
}

impl SweepReport {
    pub fn count(&self, bound: TreeBound) -> usize {
        self.counterexamples.iter().filter(|c| c.bound == bound).count()
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        let found: Vec<serde_json::Value> = self
            .counterexamples
            .iter()
            .map(|c| {
                let graph: serde_json::Value = serde_json::from_str(&graph_to_json(&c.graph)).unwrap();
                let agency: serde_json::Value = serde_json::from_str(&c.agency.to_json()).unwrap();
                json!({ "bound": c.bound.label(), "graph": graph, "agency": agency })
            })
            .collect();
        json!({
            "trees": self.trees,
            "instances_ratio4": self.instances[0],
            "instances_ratio5_shortest": self.instances[1],
            "counterexamples_ratio4": self.count(TreeBound::Ratio4),
            "counterexamples_ratio5_shortest": self.count(TreeBound::Ratio5Shortest),
            "counterexamples": found,
            "nodes_expanded": self.nodes_expanded,
        })
    }
}

/// For every tree with `4 <= n <= max_n`: all `(k, T)` with `k <= 3` and
/// `T <= min(15, 4k - 1)`, and all `k > T/5` (up to the agent cap) at
/// `T = 2n - 2`. Parking is allowed, which only enlarges the search.
pub fn tree_bound_sweep(max_n: usize, caps: &Caps) -> Result<SweepReport, SolveError> {
    caps.check(max_n, 1, 1)?;
    let mut report = SweepReport::default();
    for n in 4..=max_n {
        for g in nonisomorphic_trees(n) {
            report.trees += 1;
            let probe = |bound: TreeBound, k: usize, t: usize, report: &mut SweepReport| {
                let slot = match bound {
                    TreeBound::Ratio4 => 0,
                    TreeBound::Ratio5Shortest => 1,
                };
                report.instances[slot] += 1;
                match decide_agency(&g, k, t, true, caps)? {
                    Decision::Witness(agency) => report.counterexamples.push(Counterexample {
                        bound,
                        graph: g.clone(),
                        agency,
                    }),
                    Decision::Absent { nodes_expanded } => report.nodes_expanded += nodes_expanded,
                }
                Ok::<(), SolveError>(())
            };
            for k in 1..=3usize.min(caps.agents) {
                for t in 1..=15.min(4 * k - 1).min(caps.horizon) {
                    probe(TreeBound::Ratio4, k, t, &mut report)?;
                }
            }
            let t = 2 * n - 2;
            if t <= caps.horizon {
                for k in (t / 5 + 1)..=n.min(caps.agents) {
                    probe(TreeBound::Ratio5Shortest, k, t, &mut report)?;
                }
            }
        }
    }
    Ok(report)
}
