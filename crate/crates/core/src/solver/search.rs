//! Depth-first search over joint crash-free steps.
//!
//! Every pruning rule below only discards states from which no completion
//! exists, so exhausting the search certifies absence.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::agency::Agency;
use crate::graph::{automorphisms, Graph, Node};

use super::{Caps, Decision, SolveError};

/// Automorphism-based start reduction is applied up to this many nodes.
const SYMMETRY_MAX_NODES: usize = 8;

struct Search<'a> {
    g: &'a Graph,
    dist: &'a [Vec<usize>],
    /// `g` is bipartite and parking is forbidden.
    parity: bool,
    horizon: usize,
    parking: bool,
    start: Vec<Node>,
    full: u64,
    memo: HashSet<u128>,
    memo_enabled: bool,
    pos_bits: u32,
    expanded: u64,
    trace: Vec<Vec<Node>>,
}

impl Search<'_> {
    /// Whether an agent at `p` with visited set `mask` can still cover the
    /// rest of the graph and be back at `s` within `r` time units.
    fn promising(&self, p: Node, mask: u64, s: Node, r: usize) -> bool {
        let d = self.dist[p][s];
        if d > r {
            return false;
        }
        // each move flips the color class, so the parity of r is forced
        if self.parity && (r - d) % 2 == 1 {
            return false;
        }
        let missing = self.full & !mask;
        if missing == 0 {
            return true;
        }
        // at most one new node per time unit, plus the final return to s
        // which has been visited already
        if missing.count_ones() as usize + 1 > r {
            return false;
        }
        let row = &self.dist[p];
        let mut rest = missing;
        while rest != 0 {
            let w = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if row[w].saturating_add(self.dist[w][s]) > r {
                return false;
            }
        }
        true
    }

    fn key(&self, t: usize, pos: &[Node], masks: &[u64]) -> u128 {
        let mut key = t as u128;
        for (&p, &m) in pos.iter().zip(masks) {
            key = (key << self.pos_bits | p as u128) << self.g.n() | m as u128;
        }
        key
    }

    fn dfs(&mut self, t: usize, pos: &[Node], masks: &[u64]) -> bool {
        if t == self.horizon {
            return pos == self.start.as_slice() && masks.iter().all(|&m| m == self.full);
        }
        self.expanded += 1;
        let key = self.memo_enabled.then(|| self.key(t, pos, masks));
        if let Some(key) = key {
            if self.memo.contains(&key) {
                return false;
            }
        }
        let k = pos.len();
        let mut targets = Vec::with_capacity(k);
        let mut new_masks = masks.to_vec();
        if self.assign(t, pos, masks, &mut targets, &mut new_masks) {
            return true;
        }
        if let Some(key) = key {
            self.memo.insert(key);
        }
        false
    }

    /// Chooses the next position of agent `targets.len()` and recurses.
    fn assign(
        &mut self,
        t: usize,
        pos: &[Node],
        masks: &[u64],
        targets: &mut Vec<Node>,
        new_masks: &mut Vec<u64>,
    ) -> bool {
        let i = targets.len();
        if i == pos.len() {
            self.trace.push(targets.clone());
            let next = targets.clone();
            let found = self.dfs(t + 1, &next, new_masks);
            if !found {
                self.trace.pop();
            }
            return found;
        }
        let p = pos[i];
        let r = self.horizon - t - 1;
        let mut options: Vec<Node> = self.g.neighbors(p).to_vec();
        if self.parking {
            let at = options.partition_point(|&w| w < p);
            options.insert(at, p);
        }
        for y in options {
            if targets.contains(&y) {
                continue;
            }
            // swap across an edge with an agent already assigned
            if y != p && (0..i).any(|j| pos[j] == y && targets[j] == p) {
                continue;
            }
            let mask = masks[i] | 1 << y;
            if !self.promising(y, mask, self.start[i], r) {
                continue;
            }
            targets.push(y);
            new_masks[i] = mask;
            if self.assign(t, pos, masks, targets, new_masks) {
                return true;
            }
            targets.pop();
        }
        new_masks[i] = masks[i];
        false
    }

    fn run(mut self) -> (Option<Agency>, u64) {
        let masks: Vec<u64> = self.start.iter().map(|&s| 1 << s).collect();
        let r = self.horizon;
        let ok = self
            .start
            .iter()
            .zip(&masks)
            .all(|(&s, &m)| self.promising(s, m, s, r));
        let start = self.start.clone();
        self.trace.push(start.clone());
        if !ok || !self.dfs(0, &start, &masks) {
            return (None, self.expanded);
        }
        let k = start.len();
        let rows = (0..k).map(|a| self.trace.iter().map(|c| c[a]).collect()).collect();
        let agency = Agency::new(self.horizon, self.parking, rows).expect("search builds well-formed rows");
        (Some(agency), self.expanded)
    }
}

fn is_bipartite(g: &Graph) -> bool {
    let mut color = vec![u8::MAX; g.n()];
    for s in 0..g.n() {
        if color[s] != u8::MAX {
            continue;
        }
        color[s] = 0;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if color[w] == u8::MAX {
                    color[w] = 1 - color[v];
                    stack.push(w);
                } else if color[w] == color[v] {
                    return false;
                }
            }
        }
    }
    true
}

/// Start sets worth searching, in lexicographic order.
///
/// Agents are interchangeable, so starts are sorted sets. Every node is
/// visited, so rotating time makes node 0 occupied at time 0. Among sets
/// related by an automorphism fixing node 0, only the lexicographically
/// smallest is kept.
fn start_sets(g: &Graph, k: usize) -> Vec<Vec<Node>> {
    let n = g.n();
    let stabilizer: Vec<Vec<Node>> = if n <= SYMMETRY_MAX_NODES {
        automorphisms(g).into_iter().filter(|p| p[0] == 0).collect()
    } else {
        Vec::new()
    };
    let mut out = Vec::new();
    let mut set = vec![0];
    fn extend(n: usize, k: usize, set: &mut Vec<Node>, stab: &[Vec<Node>], out: &mut Vec<Vec<Node>>) {
        if set.len() == k {
            let minimal = stab.iter().all(|perm| {
                let mut image: Vec<Node> = set.iter().map(|&v| perm[v]).collect();
                image.sort_unstable();
                image >= *set
            });
            if minimal {
                out.push(set.clone());
            }
            return;
        }
        for v in set.last().unwrap() + 1..n {
            set.push(v);
            extend(n, k, set, stab, out);
            set.pop();
        }
    }
    extend(n, k, &mut set, &stabilizer, &mut out);
    out
}

/// Decides whether `g` has a feasible agency of `k` agents with horizon `t`.
pub fn decide_agency(
    g: &Graph,
    k: usize,
    t: usize,
    allow_parking: bool,
    caps: &Caps,
) -> Result<Decision, SolveError> {
    let n = g.n();
    if n == 0 || k == 0 || t == 0 {
        return Err(SolveError::Invalid("need n, k and T all at least 1".into()));
    }
    caps.check(n, k, t)?;
    if k > n {
        return Ok(Decision::Absent { nodes_expanded: 0 });
    }
    let dist = g.distance_matrix();
    let parity = !allow_parking && is_bipartite(g);
    let pos_bits = usize::BITS - (n - 1).leading_zeros();
    let memo_enabled = 6 + k * (pos_bits as usize + n) <= 128 && t < 64;
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let expanded = AtomicU64::new(0);
    let witness = start_sets(g, k).into_par_iter().find_map_first(|start| {
        let search = Search {
            g,
            dist: &dist,
            parity,
            horizon: t,
            parking: allow_parking,
            start,
            full,
            memo: HashSet::new(),
            memo_enabled,
            pos_bits,
            expanded: 0,
            trace: Vec::with_capacity(t + 1),
        };
        let (found, count) = search.run();
        expanded.fetch_add(count, Ordering::Relaxed);
        found
    });
    Ok(match witness {
        Some(a) => Decision::Witness(a),
        None => Decision::Absent { nodes_expanded: expanded.into_inner() },
    })
}

/// Smallest `T <= t_max` admitting a feasible agency of `k` agents.
///
/// A closed walk of length `T` visits at most `T` distinct nodes, so the
/// scan starts at `n` (or 1 on a single node).
pub fn min_horizon(
    g: &Graph,
    k: usize,
    t_max: usize,
    allow_parking: bool,
    caps: &Caps,
) -> Result<Option<Agency>, SolveError> {
    caps.check(g.n(), k, t_max)?;
    for t in g.n().max(1)..=t_max {
        if let Decision::Witness(a) = decide_agency(g, k, t, allow_parking, caps)? {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// Largest `k <= k_max` admitting a feasible agency with horizon `t`, with
/// its witness; `(0, None)` if there is none.
pub fn max_agents_for_horizon(
    g: &Graph,
    t: usize,
    k_max: usize,
    allow_parking: bool,
    caps: &Caps,
) -> Result<(usize, Option<Agency>), SolveError> {
    let k_max = k_max.min(g.n());
    caps.check(g.n(), k_max, t)?;
    for k in (1..=k_max).rev() {
        if let Decision::Witness(a) = decide_agency(g, k, t, allow_parking, caps)? {
            return Ok((k, Some(a)));
        }
    }
    Ok((0, None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agency::is_feasible;
    use crate::graph::families;

    fn decide(g: &Graph, k: usize, t: usize, parking: bool) -> Decision {
        decide_agency(g, k, t, parking, &Caps::DEFAULT).unwrap()
    }

    #[test]
    fn p2_two_agents_absent() {
        assert!(decide(&families::path(2), 2, 8, true).is_absent());
    }

    #[test]
    fn k3_rotation() {
        let d = decide(&families::complete(3), 3, 3, true);
        let a = d.witness().unwrap();
        assert!(is_feasible(&families::complete(3), a));
    }

    #[test]
    fn witnesses_are_feasible() {
        for g in [families::path(4), families::star(4), families::cycle(5), families::complete(4)] {
            for k in 1..=3 {
                for t in [6, 8] {
                    for parking in [true, false] {
                        if let Decision::Witness(a) = decide(&g, k, t, parking) {
                            assert!(is_feasible(&g, &a), "{g:?} k={k} t={t}");
                            assert_eq!(a.allow_parking(), parking);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn min_horizons() {
        let caps = Caps::DEFAULT;
        let t = |g: &Graph, k| min_horizon(g, k, 16, true, &caps).unwrap().map(|a| a.horizon());
        assert_eq!(t(&families::path(3), 1), Some(4));
        assert_eq!(t(&families::complete(3), 3), Some(3));
        assert_eq!(t(&families::star(4), 1), Some(6));
        assert_eq!(t(&families::path(2), 2), None);
    }

    #[test]
    fn max_agents() {
        let caps = Caps::DEFAULT;
        assert_eq!(max_agents_for_horizon(&families::complete(3), 3, 4, true, &caps).unwrap().0, 3);
        assert_eq!(max_agents_for_horizon(&families::path(2), 6, 4, true, &caps).unwrap().0, 1);
        assert_eq!(max_agents_for_horizon(&families::path(2), 1, 4, true, &caps).unwrap().0, 0);
        assert_eq!(max_agents_for_horizon(&families::star(4), 12, 4, true, &caps).unwrap().0, 2);
    }

    #[test]
    fn no_parking_parity() {
        // P3 without parking: 0 1 2 1 0 needs T = 4; T = 5 is odd on a
        // bipartite graph
        assert!(decide(&families::path(3), 1, 4, false).witness().is_some());
        assert!(decide(&families::path(3), 1, 5, false).is_absent());
        assert!(decide(&families::path(3), 1, 5, true).witness().is_some());
    }

    #[test]
    fn caps_enforced() {
        assert!(matches!(
            decide_agency(&families::path(9), 1, 16, true, &Caps::DEFAULT),
            Err(SolveError::CapExceeded { what: "n", .. })
        ));
    }

    #[test]
    fn thread_count_does_not_change_witness() {
        let g = families::cycle(6);
        let one = super::super::with_threads(Some(1), || decide(&g, 2, 8, true));
        let four = super::super::with_threads(Some(4), || decide(&g, 2, 8, true));
        assert_eq!(one, four);
        let a = super::super::with_threads(Some(1), || decide(&families::path(2), 2, 6, true));
        let b = super::super::with_threads(Some(3), || decide(&families::path(2), 2, 6, true));
        assert_eq!(a, b);
    }

    #[test]
    fn start_sets_use_symmetry() {
        // star center 0: all leaf pairs are equivalent
        assert_eq!(start_sets(&families::star(5), 2), vec![vec![0, 1]]);
        assert_eq!(start_sets(&families::path(3), 2).len(), 2);
    }
}
