//! Agencies with `k = n`: every node is occupied at every time unit, so all
//! motion is rotation of agents around cycles.

use std::collections::VecDeque;

use num_integer::Integer;

use crate::agency::Agency;
use crate::graph::{
    canonical_edge, enumerate_two_factors_capped, is_two_edge_connected, Graph, Node, TwoFactor,
    DEFAULT_TWO_FACTOR_MAX_NODES,
};

use super::{verified, ConstructError};

/// Cap on `T = q * T1` for the no-parking construction.
pub const DEFAULT_NOPARKING_STEP_CAP: u128 = 1_000_000;

/// BFS spanning tree restricted to `allowed` edges, as sorted child lists.
fn spanning_tree(g: &Graph, allowed: impl Fn(Node, Node) -> bool) -> Vec<Vec<Node>> {
    let mut children = vec![Vec::new(); g.n()];
    let mut seen = vec![false; g.n()];
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for &w in g.neighbors(v) {
            if !seen[w] && allowed(v, w) {
                seen[w] = true;
                children[v].push(w);
                queue.push_back(w);
            }
        }
    }
    children
}

/// Closed depth-first walk of the tree from `root`, both endpoints included.
fn tree_walk(children: &[Vec<Node>], root: Node) -> Vec<Node> {
    let n = children.len();
    let mut adj = vec![Vec::new(); n];
    for (v, cs) in children.iter().enumerate() {
        for &c in cs {
            adj[v].push(c);
            adj[c].push(v);
        }
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    fn visit(adj: &[Vec<Node>], v: Node, parent: Option<Node>, out: &mut Vec<Node>) {
        out.push(v);
        for &c in &adj[v] {
            if Some(c) != parent {
                visit(adj, c, Some(v), out);
                out.push(v);
            }
        }
    }
    let mut out = Vec::new();
    visit(&adj, root, None, &mut out);
    out
}

/// Occupancy bookkeeping shared by both constructions: `at[v]` is the agent
/// on `v`, and `trace` holds every configuration so far.
struct Rotor {
    at: Vec<usize>,
    trace: Vec<Vec<Node>>,
    seen: Vec<Vec<bool>>,
}

impl Rotor {
    fn new(n: usize) -> Self {
        let mut seen = vec![vec![false; n]; n];
        for (a, s) in seen.iter_mut().enumerate() {
            s[a] = true;
        }
        Rotor {
            at: (0..n).collect(),
            trace: vec![(0..n).collect()],
            seen,
        }
    }

    fn position(&self, agent: usize) -> Node {
        self.trace.last().unwrap()[agent]
    }

    fn covered(&self, agent: usize) -> bool {
        self.seen[agent].iter().all(|&s| s)
    }

    /// One time unit: the agent on `v` moves to `succ[v]`.
    fn step(&mut self, succ: &[Node]) {
        let mut at = vec![usize::MAX; self.at.len()];
        let mut pos = self.trace.last().unwrap().clone();
        for (v, &a) in self.at.iter().enumerate() {
            at[succ[v]] = a;
            pos[a] = succ[v];
            self.seen[a][succ[v]] = true;
        }
        debug_assert!(at.iter().all(|&a| a != usize::MAX));
        self.at = at;
        self.trace.push(pos);
    }

    /// Drives each agent in turn along a truncated tree walk; `succ_for`
    /// gives the rotation realizing the unit step `x -> y`.
    fn cover(&mut self, children: &[Vec<Node>], succ_for: impl Fn(Node, Node) -> Vec<Node>) {
        for agent in 0..self.at.len() {
            let walk = tree_walk(children, self.position(agent));
            for pair in walk.windows(2) {
                if self.covered(agent) {
                    break;
                }
                debug_assert_eq!(self.position(agent), pair[0]);
                self.step(&succ_for(pair[0], pair[1]));
            }
            debug_assert!(self.covered(agent));
        }
    }

    fn rows(&self) -> Vec<Vec<Node>> {
        let k = self.at.len();
        (0..k)
            .map(|a| self.trace.iter().map(|p| p[a]).collect())
            .collect()
    }
}

/// `k = n` with parking, for 2-edge-connected `g`.
///
/// Each unit move of the lead agent along a BFS spanning-tree edge `xy` is
/// realized by rotating the cycle formed by `xy` and the shortest `y`–`x`
/// path in `G - xy`. After all agents are covered the whole sequence is
/// played backwards, so `T <= 2n(2n - 3)`.
pub fn full_occupancy_agency(g: &Graph) -> Result<Agency, ConstructError> {
    if !is_two_edge_connected(g) {
        return Err(ConstructError::NotTwoEdgeConnected);
    }
    let n = g.n();
    let children = spanning_tree(g, |_, _| true);
    let mut rotor = Rotor::new(n);
    rotor.cover(&children, |x, y| {
        let path = g
            .without_edges(&[canonical_edge(x, y)])
            .shortest_path(y, x)
            .expect("2-edge-connected");
        let mut succ: Vec<Node> = (0..n).collect();
        succ[x] = y;
        for w in path.windows(2) {
            succ[w[0]] = w[1];
        }
        succ
    });
    let mut rows = rotor.rows();
    for row in &mut rows {
        let back: Vec<Node> = row.iter().rev().skip(1).copied().collect();
        row.extend(back);
    }
    let horizon = rows[0].len() - 1;
    verified(g, Agency::new(horizon, true, rows)?)
}

fn orient(cycle: &[Node], x: Node, y: Node) -> Vec<Node> {
    let i = cycle.iter().position(|&v| v == x).unwrap();
    let len = cycle.len();
    if cycle[(i + 1) % len] == y {
        cycle.to_vec()
    } else {
        cycle.iter().rev().copied().collect()
    }
}

fn rotation(n: usize, f: &TwoFactor, x: Node, y: Node) -> Vec<Node> {
    let mut succ = vec![usize::MAX; n];
    for c in &f.cycles {
        let c = if c.contains(&x) { orient(c, x, y) } else { c.clone() };
        for (i, &v) in c.iter().enumerate() {
            succ[v] = c[(i + 1) % c.len()];
        }
    }
    succ
}

/// `k = n` without parking, when the edges lying on 2-factors span `g`
/// connectedly.
///
/// Every time unit rotates all cycles of a 2-factor through the current
/// tree edge. The coverage phase of `T1` units leaves a permutation `phi`
/// of the agents; repeating the phase `q = lcm(cycle lengths of phi)` times
/// closes every tour. Fails with [`ConstructError::HorizonCapExceeded`]
/// when `q * T1 > cap`.
pub fn full_occupancy_noparking_agency(g: &Graph, cap: u128) -> Result<Agency, ConstructError> {
    let n = g.n();
    let factors = enumerate_two_factors_capped(g, None, DEFAULT_TWO_FACTOR_MAX_NODES)?;
    let mut on_factor = vec![false; g.edge_count()];
    for f in &factors {
        for (u, v) in f.edges() {
            on_factor[g.edge_index(u, v).unwrap()] = true;
        }
    }
    let children = spanning_tree(g, |u, v| on_factor[g.edge_index(u, v).unwrap()]);
    let spanned = n > 0 && children.iter().map(Vec::len).sum::<usize>() == n - 1;
    if factors.is_empty() || !spanned {
        return Err(ConstructError::TwoFactorUnionDisconnected);
    }
    let mut rotor = Rotor::new(n);
    rotor.cover(&children, |x, y| {
        let f = factors
            .iter()
            .find(|f| f.edges().contains(&canonical_edge(x, y)))
            .expect("tree edge lies on a 2-factor");
        rotation(n, f, x, y)
    });
    let t1 = rotor.trace.len() - 1;
    let end = rotor.trace.last().unwrap();
    let mut q: u128 = 1;
    let mut done = vec![false; n];
    for a in 0..n {
        let mut len = 0u128;
        let mut b = a;
        while !done[b] {
            done[b] = true;
            b = end[b];
            len += 1;
        }
        if len > 0 {
            q = q.lcm(&len);
        }
    }
    let total = q * t1 as u128;
    if total > cap {
        return Err(ConstructError::HorizonCapExceeded { q, t1, cap });
    }
    let phase = rotor.rows();
    let rows: Vec<Vec<Node>> = (0..n)
        .map(|a| {
            // after r phases agent a stands where agent phi^r(a) started
            let mut row = Vec::with_capacity(total as usize + 1);
            let mut b = a;
            for _ in 0..q {
                row.extend_from_slice(&phase[b][..t1]);
                b = end[b];
            }
            row.push(a);
            row
        })
        .collect();
    verified(g, Agency::new(total as usize, false, rows)?)
}
