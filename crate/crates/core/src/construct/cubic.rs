//! Agencies with `T = 2n`, `k = n/2` on 3-regular 3-edge-connected graphs.
//!
//! Take a 2-factor whose cycles all have length at least 5 and a set `N` of
//! matching edges forming a spanning tree of the cycle contraction. The base
//! tour walks each cycle once and each `N` edge twice; every node off `N`
//! is held for `p(v)` time units. When every cycle's parking sum is a
//! multiple of 4, agents released every 4 time units never crash.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::agency::Agency;
use crate::graph::{
    contract_cycles, find_girth5_two_factor_capped, ContractedForest, Graph, GraphError, Node,
    TwoFactor, DEFAULT_TWO_FACTOR_MAX_NODES,
};

use super::{verified, ConstructError};

/// `4 * ceil(s / 4)`.
pub fn round_up_to_four(s: usize) -> usize {
    s.div_ceil(4) * 4
}

/// Hold times in `1..=4` for the nodes outside `V(N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParkingVector {
    pub park: BTreeMap<Node, u8>,
}

impl ParkingVector {
    /// Sum of hold times over each cycle of `f`, indexed like `f.cycles`.
    pub fn cycle_sums(&self, f: &TwoFactor) -> Vec<usize> {
        f.cycles
            .iter()
            .map(|c| c.iter().filter_map(|v| self.park.get(v)).map(|&p| p as usize).sum())
            .collect()
    }

    pub fn is_four_cyclic(&self, f: &TwoFactor) -> bool {
        self.park.values().all(|p| (1..=4).contains(p))
            && self.cycle_sums(f).iter().all(|s| s % 4 == 0)
    }

    pub fn total(&self) -> usize {
        self.park.values().map(|&p| p as usize).sum()
    }
}

fn matched_nodes(cf: &ContractedForest) -> BTreeSet<Node> {
    cf.tree_edges.iter().flat_map(|&(u, v)| [u, v]).collect()
}

/// Per cycle, all ones except the smallest free node, which takes the
/// remainder so that the cycle sums to `round_up_to_four(free count)`.
pub fn minimal_parking_vector(
    g: &Graph,
    f: &TwoFactor,
    cf: &ContractedForest,
) -> Result<ParkingVector, ConstructError> {
    f.validate(g)?;
    let matched = matched_nodes(cf);
    let mut park = BTreeMap::new();
    for cycle in &f.cycles {
        let mut free: Vec<Node> = cycle.iter().copied().filter(|v| !matched.contains(v)).collect();
        free.sort_unstable();
        let Some((&first, rest)) = free.split_first() else {
            continue;
        };
        let remainder = round_up_to_four(free.len()) - rest.len();
        assert!((1..=4).contains(&remainder), "remainder {remainder} out of range");
        park.insert(first, remainder as u8);
        for &v in rest {
            park.insert(v, 1);
        }
    }
    Ok(ParkingVector { park })
}

/// Raises hold times by multiples of 4 per cycle, largest cycle first (by
/// free-node count, ties by cycle index), nodes in id order toward 4.
/// Returns the extra time that could not be placed.
fn pad(pv: &mut ParkingVector, f: &TwoFactor, mut extra: usize) -> usize {
    let mut order: Vec<(usize, Vec<Node>)> = f
        .cycles
        .iter()
        .map(|c| {
            let mut free: Vec<Node> = c.iter().copied().filter(|v| pv.park.contains_key(v)).collect();
            free.sort_unstable();
            (free.len(), free)
        })
        .enumerate()
        .map(|(i, (len, free))| (len * 1000 + (999 - i.min(999)), free))
        .collect();
    order.sort_by_key(|o| std::cmp::Reverse(o.0));
    for (_, free) in order {
        loop {
            let room: usize = free.iter().map(|v| 4 - pv.park[v] as usize).sum();
            if extra < 4 || room < 4 {
                break;
            }
            let mut budget = 4;
            for v in &free {
                let p = pv.park.get_mut(v).unwrap();
                let add = budget.min(4 - *p as usize);
                *p += add as u8;
                budget -= add;
            }
            extra -= 4;
        }
    }
    extra
}

/// Cycle traversal from `entry`, crossing every child tree edge out and back.
fn traverse(
    f: &TwoFactor,
    children: &BTreeMap<Node, Node>,
    cycle: usize,
    entry: Node,
    closing: bool,
    out: &mut Vec<Node>,
    cycle_of: &[usize],
) {
    let c = &f.cycles[cycle];
    let start = c.iter().position(|&v| v == entry).unwrap();
    for step in 0..c.len() {
        let y = c[(start + step) % c.len()];
        out.push(y);
        if let Some(&z) = children.get(&y) {
            traverse(f, children, cycle_of[z], z, true, out, cycle_of);
            out.push(y);
        }
    }
    if closing {
        out.push(entry);
    }
}

/// The unparked base tour: cycle edges once, tree edges twice.
fn base_tour(g: &Graph, f: &TwoFactor, cf: &ContractedForest) -> Vec<Node> {
    // orient tree edges away from cycle 0
    let mut children = BTreeMap::new();
    let mut reached = vec![false; f.cycles.len()];
    reached[0] = true;
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(ci) = queue.pop_front() {
        for &(u, v) in &cf.tree_edges {
            for (a, b) in [(u, v), (v, u)] {
                if cf.cycle_of[a] == ci && !reached[cf.cycle_of[b]] {
                    reached[cf.cycle_of[b]] = true;
                    children.insert(a, b);
                    queue.push_back(cf.cycle_of[b]);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(2 * g.n());
    traverse(f, &children, 0, f.cycles[0][0], false, &mut out, &cf.cycle_of);
    out
}

/// Everything the cubic construction produced, for inspection and tests.
#[derive(Debug, Clone)]
pub struct CubicAgency {
    pub two_factor: TwoFactor,
    pub forest: ContractedForest,
    pub minimal: ParkingVector,
    pub parking: ParkingVector,
    pub agency: Agency,
}

pub fn cubic_agency(g: &Graph) -> Result<CubicAgency, ConstructError> {
    cubic_agency_capped(g, DEFAULT_TWO_FACTOR_MAX_NODES)
}

pub fn cubic_agency_capped(g: &Graph, max_nodes: usize) -> Result<CubicAgency, ConstructError> {
    let f = find_girth5_two_factor_capped(g, max_nodes)?;
    let cf = contract_cycles(g, &f)?;
    let minimal = minimal_parking_vector(g, &f, &cf)?;
    let target = 2 * g.n();
    let fixed = 4 * cf.tree_edges.len();
    let minimal_t = fixed + minimal.total();
    if minimal_t > target {
        return Err(ConstructError::PaddingInfeasible { achieved: minimal_t, target });
    }
    let mut parking = minimal.clone();
    let left = pad(&mut parking, &f, target - minimal_t);
    if left > 0 {
        return Err(ConstructError::PaddingInfeasible { achieved: target - left, target });
    }
    debug_assert!(parking.is_four_cyclic(&f));

    let mut walk = Vec::with_capacity(target);
    for v in base_tour(g, &f, &cf) {
        let hold = parking.park.get(&v).copied().unwrap_or(1);
        walk.extend(std::iter::repeat_n(v, hold as usize));
    }
    if walk.len() != target {
        return Err(ConstructError::Graph(GraphError::Precondition(format!(
            "base tour has length {} instead of {target}",
            walk.len()
        ))));
    }
    let agency = verified(g, Agency::from_delays(&walk, target / 4, 4, true)?)?;
    Ok(CubicAgency {
        two_factor: f,
        forest: cf,
        minimal,
        parking,
        agency,
    })
}
