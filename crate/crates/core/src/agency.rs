//! Walks, tours, agencies, crash detection and strength.
//!
//! An agency is `k` rows of `T + 1` node ids. Row `i` is the tour of agent
//! `i`; the last entry repeats the first, and every time index is read
//! modulo `T`. Two agents crash in a node when they occupy it at the same
//! time, and in an edge when they traverse it in opposite directions during
//! the same step. The wrap step `T-1 -> T` is an ordinary step because
//! `a(T) = a(0)`.

use std::collections::HashMap;
use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Node};

pub type Rational = Ratio<u64>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("walk is empty")]
    Empty,
    #[error("position {index} holds node {node}, outside 0..{n}")]
    NodeOutOfRange { index: usize, node: Node, n: usize },
    #[error("parking at step {t} but parking is not allowed")]
    ParkingForbidden { t: usize },
    #[error("step {t} uses non-edge ({from}, {to})")]
    NonEdge { t: usize, from: Node, to: Node },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AgencyError {
    #[error("agency needs k >= 1 and T >= 1")]
    Empty,
    #[error("row {row} has {len} entries, expected T + 1 = {expected}")]
    RowLength { row: usize, len: usize, expected: usize },
    #[error("declared {field} = {declared} but schedule implies {actual}")]
    HeaderMismatch { field: &'static str, declared: usize, actual: usize },
    #[error("row {row} is not a walk: {source}")]
    Walk { row: usize, source: WalkError },
    #[error("row {row} is not a tour: {reason}")]
    NotTour { row: usize, reason: String },
    #[error("agency has {0} crash(es)")]
    Crashes(usize),
    #[error("strength bound violated: {0}")]
    StrengthBound(String),
    #[error("invalid agency file: {0}")]
    Parse(String),
}

/// Checks `nodes` against the walk definition on `g`.
pub fn validate_walk(g: &Graph, nodes: &[Node], allow_parking: bool) -> Result<(), WalkError> {
    if nodes.is_empty() {
        return Err(WalkError::Empty);
    }
    if let Some((index, &node)) = nodes.iter().enumerate().find(|(_, &v)| v >= g.n()) {
        return Err(WalkError::NodeOutOfRange { index, node, n: g.n() });
    }
    for (t, w) in nodes.windows(2).enumerate() {
        if w[0] == w[1] {
            if !allow_parking {
                return Err(WalkError::ParkingForbidden { t });
            }
        } else if !g.has_edge(w[0], w[1]) {
            return Err(WalkError::NonEdge { t, from: w[0], to: w[1] });
        }
    }
    Ok(())
}

fn tour_problem(g: &Graph, nodes: &[Node], allow_parking: bool) -> Option<String> {
    if let Err(e) = validate_walk(g, nodes, allow_parking) {
        return Some(e.to_string());
    }
    if nodes.len() < 2 {
        return Some("a tour needs T >= 1".into());
    }
    if nodes.first() != nodes.last() {
        return Some(format!(
            "not closed: starts at {} and ends at {}",
            nodes[0],
            nodes[nodes.len() - 1]
        ));
    }
    let mut seen = vec![false; g.n()];
    for &v in nodes {
        seen[v] = true;
    }
    seen.iter()
        .position(|&s| !s)
        .map(|v| format!("node {v} is never visited"))
}

/// A closed walk that visits every node.
pub fn is_tour(g: &Graph, nodes: &[Node], allow_parking: bool) -> bool {
    tour_problem(g, nodes, allow_parking).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Agency {
    horizon: usize,
    allow_parking: bool,
    schedule: Vec<Vec<Node>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AgencyFile {
    #[serde(rename = "T")]
    horizon: usize,
    k: usize,
    allow_parking: bool,
    schedule: Vec<Vec<Node>>,
}

impl Agency {
    /// Checks only the shape (`k >= 1`, `T >= 1`, rows of length `T + 1`);
    /// tour and crash conditions are checked by [`is_feasible`].
    pub fn new(
        horizon: usize,
        allow_parking: bool,
        schedule: Vec<Vec<Node>>,
    ) -> Result<Self, AgencyError> {
        if horizon == 0 || schedule.is_empty() {
            return Err(AgencyError::Empty);
        }
        for (row, r) in schedule.iter().enumerate() {
            if r.len() != horizon + 1 {
                return Err(AgencyError::RowLength {
                    row,
                    len: r.len(),
                    expected: horizon + 1,
                });
            }
        }
        Ok(Agency {
            horizon,
            allow_parking,
            schedule,
        })
    }

    /// Agent `i` follows `base` delayed by `i * delay` time units, cyclically.
    pub fn from_delays(
        base: &[Node],
        agents: usize,
        delay: usize,
        allow_parking: bool,
    ) -> Result<Self, AgencyError> {
        let horizon = base.len();
        let schedule = (0..agents)
            .map(|i| {
                (0..=horizon)
                    .map(|t| base[(t + horizon * agents * delay.max(1) - i * delay) % horizon])
                    .collect()
            })
            .collect();
        Agency::new(horizon, allow_parking, schedule)
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn agents(&self) -> usize {
        self.schedule.len()
    }

    pub fn allow_parking(&self) -> bool {
        self.allow_parking
    }

    pub fn schedule(&self) -> &[Vec<Node>] {
        &self.schedule
    }

    pub fn row(&self, agent: usize) -> &[Node] {
        &self.schedule[agent]
    }

    /// Position of `agent` at time `t mod T`.
    pub fn position(&self, agent: usize, t: usize) -> Node {
        self.schedule[agent][t % self.horizon]
    }

    /// Every row shifted so that new time `t` is old time `t + offset`.
    pub fn rotated(&self, offset: usize) -> Agency {
        let schedule = self
            .schedule
            .iter()
            .map(|r| (0..=self.horizon).map(|t| r[(t + offset) % self.horizon]).collect())
            .collect();
        Agency { schedule, ..self.clone() }
    }

    /// Every row read backwards.
    pub fn reversed(&self) -> Agency {
        let schedule = self
            .schedule
            .iter()
            .map(|r| r.iter().rev().copied().collect())
            .collect();
        Agency { schedule, ..self.clone() }
    }

    /// Rows reordered: new row `i` is old row `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Agency {
        let schedule = perm.iter().map(|&i| self.schedule[i].clone()).collect();
        Agency { schedule, ..self.clone() }
    }

    /// Compact JSON with sorted keys and a trailing newline.
    pub fn to_json(&self) -> String {
        let file = AgencyFile {
            horizon: self.horizon,
            k: self.agents(),
            allow_parking: self.allow_parking,
            schedule: self.schedule.clone(),
        };
        let value = serde_json::to_value(file).expect("agency serializes");
        let mut out = serde_json::to_string(&value).expect("value serializes");
        out.push('\n');
        out
    }

    pub fn from_json(text: &str) -> Result<Self, AgencyError> {
        let file: AgencyFile = serde_json::from_str(text).map_err(|e| {
            AgencyError::Parse(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        if file.k != file.schedule.len() {
            return Err(AgencyError::HeaderMismatch {
                field: "k",
                declared: file.k,
                actual: file.schedule.len(),
            });
        }
        Agency::new(file.horizon, file.allow_parking, file.schedule)
    }

    /// One line per agent, one column per time unit `0..=T`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("agent");
        for t in 0..=self.horizon {
            out.push_str(&format!(",t{t}"));
        }
        out.push('\n');
        for (i, row) in self.schedule.iter().enumerate() {
            out.push_str(&i.to_string());
            for v in row {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CrashKind {
    /// Both agents at `node`.
    Node { node: Node },
    /// Agent A moves `from -> to` while agent B moves `to -> from`.
    Edge { from: Node, to: Node },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CrashEvent {
    pub time: usize,
    pub agent_a: usize,
    pub agent_b: usize,
    #[serde(flatten)]
    pub kind: CrashKind,
}

impl fmt::Display for CrashEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CrashKind::Node { node } => write!(
                f,
                "node crash: agents {} and {} at node {} at t={}",
                self.agent_a, self.agent_b, node, self.time
            ),
            CrashKind::Edge { from, to } => write!(
                f,
                "edge crash: agents {} and {} on edge ({}, {}) during t={}->{}",
                self.agent_a,
                self.agent_b,
                from,
                to,
                self.time,
                self.time + 1
            ),
        }
    }
}

/// All node and edge crashes, sorted by `(time, agent_a, agent_b)`.
///
/// Node crashes use a per-time occupancy map; edge crashes a per-step map of
/// directed moves, so the cost is `O(k T)` plus the number of crashes.
pub fn find_crashes(_g: &Graph, a: &Agency) -> Vec<CrashEvent> {
    let mut out = Vec::new();
    let mut occupants: HashMap<Node, Vec<usize>> = HashMap::new();
    let mut moves: HashMap<(Node, Node), Vec<usize>> = HashMap::new();
    for t in 0..a.horizon {
        occupants.clear();
        moves.clear();
        for (i, row) in a.schedule.iter().enumerate() {
            occupants.entry(row[t]).or_default().push(i);
            if row[t] != row[t + 1] {
                moves.entry((row[t], row[t + 1])).or_default().push(i);
            }
        }
        for (&node, agents) in &occupants {
            for (x, &i) in agents.iter().enumerate() {
                for &j in &agents[x + 1..] {
                    out.push(CrashEvent {
                        time: t,
                        agent_a: i,
                        agent_b: j,
                        kind: CrashKind::Node { node },
                    });
                }
            }
        }
        for (&(from, to), agents) in &moves {
            let Some(opposite) = moves.get(&(to, from)) else {
                continue;
            };
            for &i in agents {
                for &j in opposite {
                    if i < j {
                        out.push(CrashEvent {
                            time: t,
                            agent_a: i,
                            agent_b: j,
                            kind: CrashKind::Edge { from, to },
                        });
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// First reason the agency is not feasible, if any.
pub fn check_feasibility(g: &Graph, a: &Agency) -> Result<(), AgencyError> {
    for (row, r) in a.schedule.iter().enumerate() {
        validate_walk(g, r, a.allow_parking).map_err(|source| AgencyError::Walk { row, source })?;
        if let Some(reason) = tour_problem(g, r, a.allow_parking) {
            return Err(AgencyError::NotTour { row, reason });
        }
    }
    let crashes = find_crashes(g, a);
    if crashes.is_empty() {
        Ok(())
    } else {
        Err(AgencyError::Crashes(crashes.len()))
    }
}

pub fn is_feasible(g: &Graph, a: &Agency) -> bool {
    check_feasibility(g, a).is_ok()
}

/// `alpha1 = n/k`, `alpha2 = T/n`, `alpha = max(alpha1, alpha2)`, exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StrengthReport {
    pub nodes: usize,
    pub agents: usize,
    pub horizon: usize,
    pub alpha1: Rational,
    pub alpha2: Rational,
    pub alpha: Rational,
}

impl StrengthReport {
    pub fn new(nodes: usize, agents: usize, horizon: usize) -> Self {
        let alpha1 = Rational::new(nodes as u64, agents as u64);
        let alpha2 = Rational::new(horizon as u64, nodes as u64);
        StrengthReport {
            nodes,
            agents,
            horizon,
            alpha1,
            alpha2,
            alpha: alpha1.max(alpha2),
        }
    }

    pub fn horizon_per_agent(&self) -> Rational {
        Rational::new(self.horizon as u64, self.agents as u64)
    }

    /// `sqrt(T/k) <= alpha <= T/k`, with the square root compared by squaring.
    pub fn sandwich_holds(&self) -> bool {
        let ratio = self.horizon_per_agent();
        self.alpha * self.alpha >= ratio && self.alpha <= ratio
    }
}

fn decimal(r: Rational) -> String {
    format!("{:.6}", *r.numer() as f64 / *r.denom() as f64)
}

impl fmt::Display for StrengthReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "alpha1 = {} ({})", self.alpha1, decimal(self.alpha1))?;
        writeln!(f, "alpha2 = {} ({})", self.alpha2, decimal(self.alpha2))?;
        write!(f, "alpha  = {} ({})", self.alpha, decimal(self.alpha))
    }
}

/// Strength of a feasible agency. Infeasible input is rejected.
pub fn strength(g: &Graph, a: &Agency) -> Result<StrengthReport, AgencyError> {
    check_feasibility(g, a)?;
    let report = StrengthReport::new(g.n(), a.agents(), a.horizon());
    if !report.sandwich_holds() {
        return Err(AgencyError::StrengthBound(format!(
            "alpha = {} outside [sqrt(T/k), T/k] with T/k = {}",
            report.alpha,
            report.horizon_per_agent()
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    fn agency(rows: &[&[Node]]) -> Agency {
        let horizon = rows[0].len() - 1;
        Agency::new(horizon, true, rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn walks() {
        let p3 = families::path(3);
        assert_eq!(validate_walk(&p3, &[0, 1, 1, 2], true), Ok(()));
        assert_eq!(
            validate_walk(&p3, &[0, 1, 1, 2], false),
            Err(WalkError::ParkingForbidden { t: 1 })
        );
        assert_eq!(
            validate_walk(&p3, &[0, 2], true),
            Err(WalkError::NonEdge { t: 0, from: 0, to: 2 })
        );
        assert_eq!(
            validate_walk(&p3, &[0, 3], true),
            Err(WalkError::NodeOutOfRange { index: 1, node: 3, n: 3 })
        );
    }

    #[test]
    fn tours() {
        let p3 = families::path(3);
        assert!(is_tour(&p3, &[0, 1, 2, 1, 0], true));
        assert!(!is_tour(&p3, &[0, 1, 0], true));
        assert!(!is_tour(&p3, &[0, 1, 2, 1], true));
        assert!(is_tour(&families::complete(3), &[0, 1, 2, 0], false));
    }

    #[test]
    fn head_on_swap_on_an_edge() {
        let p2 = families::path(2);
        let a = agency(&[&[0, 1, 0], &[1, 0, 1]]);
        let crashes = find_crashes(&p2, &a);
        assert_eq!(crashes.len(), 2);
        assert_eq!(
            crashes[0],
            CrashEvent { time: 0, agent_a: 0, agent_b: 1, kind: CrashKind::Edge { from: 0, to: 1 } }
        );
        assert_eq!(crashes[1].time, 1);
        assert!(!is_feasible(&p2, &a));
    }

    #[test]
    fn rotation_on_triangle_is_feasible() {
        let k3 = families::complete(3);
        let a = agency(&[&[0, 1, 2, 0], &[1, 2, 0, 1], &[2, 0, 1, 2]]);
        assert!(find_crashes(&k3, &a).is_empty());
        assert!(is_feasible(&k3, &a));
        let s = strength(&k3, &a).unwrap();
        assert_eq!(s.alpha1, Rational::from_integer(1));
        assert_eq!(s.alpha2, Rational::from_integer(1));
        assert_eq!(s.alpha, Rational::from_integer(1));
    }

    #[test]
    fn identical_tours_crash_every_tick() {
        let k3 = families::complete(3);
        let a = agency(&[&[0, 1, 2, 0], &[0, 1, 2, 0]]);
        let crashes = find_crashes(&k3, &a);
        let times: Vec<usize> = crashes.iter().map(|c| c.time).collect();
        assert_eq!(times, vec![0, 1, 2]);
        assert!(crashes.iter().all(|c| matches!(c.kind, CrashKind::Node { .. })));
    }

    #[test]
    fn wrap_step_edge_crash_is_detected() {
        // the swap happens only on the step T-1 -> T
        let p3 = families::path(3);
        let a = agency(&[&[0, 1, 2, 1, 1, 0], &[1, 2, 1, 0, 0, 1]]);
        let crashes = find_crashes(&p3, &a);
        assert!(crashes
            .iter()
            .any(|c| c.time == 4 && matches!(c.kind, CrashKind::Edge { .. })));
    }

    #[test]
    fn single_agent_is_feasible() {
        let p3 = families::path(3);
        assert!(is_feasible(&p3, &agency(&[&[0, 1, 2, 1, 0]])));
    }

    #[test]
    fn strength_rejects_infeasible() {
        let p2 = families::path(2);
        assert!(matches!(
            strength(&p2, &agency(&[&[0, 1, 0], &[1, 0, 1]])),
            Err(AgencyError::Crashes(2))
        ));
    }

    #[test]
    fn shape_errors() {
        assert_eq!(Agency::new(0, true, vec![vec![0]]), Err(AgencyError::Empty));
        assert!(matches!(
            Agency::new(2, true, vec![vec![0, 1]]),
            Err(AgencyError::RowLength { row: 0, len: 2, expected: 3 })
        ));
        let text = r#"{"T":2,"allow_parking":true,"k":2,"schedule":[[0,1,0]]}"#;
        assert!(matches!(
            Agency::from_json(text),
            Err(AgencyError::HeaderMismatch { field: "k", .. })
        ));
    }

    #[test]
    fn json_has_sorted_keys() {
        let a = agency(&[&[0, 1, 0]]);
        assert_eq!(
            a.to_json(),
            "{\"T\":2,\"allow_parking\":true,\"k\":1,\"schedule\":[[0,1,0]]}\n"
        );
        assert_eq!(Agency::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn delays() {
        let a = Agency::from_delays(&[0, 1, 2], 3, 1, false).unwrap();
        assert_eq!(a.row(0), &[0, 1, 2, 0]);
        assert_eq!(a.row(1), &[2, 0, 1, 2]);
        assert_eq!(a.row(2), &[1, 2, 0, 1]);
    }

    #[test]
    fn csv_export() {
        let a = agency(&[&[0, 1, 0], &[1, 1, 1]]);
        assert_eq!(a.to_csv(), "agent,t0,t1,t2\n0,0,1,0\n1,1,1,1\n");
    }
}
