//! 2-factor machinery: exhaustive enumeration, the girth-5 filter used by the
//! cubic construction, and cycle contraction.

use std::collections::BTreeSet;
use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{canonical_edge, is_connected, is_three_edge_connected, Edge, Graph, GraphError, Node};

/// Default node cap for the exponential enumerations in this module.
pub const DEFAULT_TWO_FACTOR_MAX_NODES: usize = 16;

/// Spanning 2-regular subgraph, stored as its cycles. Each cycle starts at
/// its smallest node and runs toward the smaller of that node's two cycle
/// neighbors; cycles are sorted by their first node.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TwoFactor {
    pub cycles: Vec<Vec<Node>>,
}

impl TwoFactor {
    /// Normalizes the cycle representation and checks it against `g`.
    pub fn new(g: &Graph, cycles: Vec<Vec<Node>>) -> Result<Self, GraphError> {
        let mut cycles: Vec<Vec<Node>> = cycles.into_iter().map(normalize_cycle).collect();
        cycles.sort();
        let f = TwoFactor { cycles };
        f.validate(g)?;
        Ok(f)
    }

    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        let mut seen = vec![false; g.n()];
        for cycle in &self.cycles {
            if cycle.len() < 3 {
                return Err(GraphError::Precondition(format!(
                    "2-factor cycle {cycle:?} is shorter than 3"
                )));
            }
            for (i, &v) in cycle.iter().enumerate() {
                if v >= g.n() || std::mem::replace(&mut seen[v], true) {
                    return Err(GraphError::Precondition(format!(
                        "node {v} is repeated or out of range in the 2-factor"
                    )));
                }
                let w = cycle[(i + 1) % cycle.len()];
                if !g.has_edge(v, w) {
                    return Err(GraphError::Precondition(format!(
                        "2-factor uses non-edge ({v}, {w})"
                    )));
                }
            }
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(GraphError::Precondition(format!("2-factor misses node {v}")));
        }
        Ok(())
    }

    /// Edges of the factor, canonical and sorted.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self
            .cycles
            .iter()
            .flat_map(|c| (0..c.len()).map(move |i| canonical_edge(c[i], c[(i + 1) % c.len()])))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn min_cycle_len(&self) -> usize {
        self.cycles.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Index of the cycle through each node.
    pub fn cycle_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (ci, c) in self.cycles.iter().enumerate() {
            for &v in c {
                out[v] = ci;
            }
        }
        out
    }
}

fn normalize_cycle(mut c: Vec<Node>) -> Vec<Node> {
    if c.len() > 1 && c.first() == c.last() {
        c.pop();
    }
    if c.is_empty() {
        return c;
    }
    let pos = c.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i).unwrap();
    c.rotate_left(pos);
    if c.len() > 2 && c[c.len() - 1] < c[1] {
        c[1..].reverse();
    }
    c
}

struct Search<'a> {
    g: &'a Graph,
    deg: Vec<u8>,
    // 0 = undecided, 1 = in, 2 = out
    state: Vec<u8>,
}

impl Search<'_> {
    fn run(&mut self, visit: &mut dyn FnMut(TwoFactor) -> ControlFlow<()>) -> ControlFlow<()> {
        let Some(v) = (0..self.g.n()).find(|&v| self.deg[v] < 2) else {
            return visit(self.collect());
        };
        let need = 2 - self.deg[v] as usize;
        let mut candidates = Vec::new();
        let mut undecided = Vec::new();
        for &w in self.g.neighbors(v) {
            let e = self.g.edge_index(v, w).unwrap();
            if self.state[e] == 0 {
                undecided.push(e);
                if self.deg[w] < 2 {
                    candidates.push((e, w));
                }
            }
        }
        if candidates.len() < need {
            return ControlFlow::Continue(());
        }
        let mut choose = |picked: &[(usize, Node)], s: &mut Self| {
            for &e in &undecided {
                s.state[e] = 2;
            }
            for &(e, w) in picked {
                s.state[e] = 1;
                s.deg[w] += 1;
            }
            s.deg[v] = 2;
            let flow = s.run(visit);
            for &(_, w) in picked {
                s.deg[w] -= 1;
            }
            for &e in &undecided {
                s.state[e] = 0;
            }
            s.deg[v] = 2 - need as u8;
            flow
        };
        if need == 1 {
            for &c in &candidates {
                choose(&[c], self)?;
            }
        } else {
            for i in 0..candidates.len() {
                for j in i + 1..candidates.len() {
                    choose(&[candidates[i], candidates[j]], self)?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn collect(&self) -> TwoFactor {
        let n = self.g.n();
        let mut adj = vec![Vec::with_capacity(2); n];
        for (e, &(u, v)) in self.g.edges().iter().enumerate() {
            if self.state[e] == 1 {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        let mut seen = vec![false; n];
        let mut cycles = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut cycle = vec![s];
            seen[s] = true;
            let (mut prev, mut cur) = (s, *adj[s].iter().min().unwrap());
            while cur != s {
                seen[cur] = true;
                cycle.push(cur);
                let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                prev = cur;
                cur = next;
            }
            cycles.push(cycle);
        }
        TwoFactor { cycles }
    }
}

fn for_each_two_factor(
    g: &Graph,
    max_nodes: usize,
    visit: &mut dyn FnMut(TwoFactor) -> ControlFlow<()>,
) -> Result<(), GraphError> {
    if g.n() > max_nodes {
        return Err(GraphError::CapExceeded { n: g.n(), cap: max_nodes });
    }
    if g.n() == 0 {
        return Ok(());
    }
    let mut search = Search {
        g,
        deg: vec![0; g.n()],
        state: vec![0; g.edge_count()],
    };
    let _ = search.run(visit);
    Ok(())
}

pub fn enumerate_two_factors(g: &Graph, limit: Option<usize>) -> Result<Vec<TwoFactor>, GraphError> {
    enumerate_two_factors_capped(g, limit, DEFAULT_TWO_FACTOR_MAX_NODES)
}

/// All 2-factors of `g` (at most `limit`), in the deterministic order of a
/// search that always branches on the smallest node still short of degree 2.
pub fn enumerate_two_factors_capped(
    g: &Graph,
    limit: Option<usize>,
    max_nodes: usize,
) -> Result<Vec<TwoFactor>, GraphError> {
    let limit = limit.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    if limit == 0 {
        return Ok(out);
    }
    for_each_two_factor(g, max_nodes, &mut |f| {
        out.push(f);
        if out.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    Ok(out)
}

pub fn find_girth5_two_factor(g: &Graph) -> Result<TwoFactor, GraphError> {
    find_girth5_two_factor_capped(g, DEFAULT_TWO_FACTOR_MAX_NODES)
}

/// First 2-factor (in enumeration order) whose cycles all have length at
/// least 5. Requires a 3-regular, 3-edge-connected input.
pub fn find_girth5_two_factor_capped(g: &Graph, max_nodes: usize) -> Result<TwoFactor, GraphError> {
    if !g.is_regular(3) {
        return Err(GraphError::Precondition("graph is not 3-regular".into()));
    }
    if !is_three_edge_connected(g) {
        return Err(GraphError::Precondition("graph is not 3-edge-connected".into()));
    }
    let mut found = None;
    for_each_two_factor(g, max_nodes, &mut |f| {
        if f.min_cycle_len() >= 5 {
            found = Some(f);
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    })?;
    found.ok_or(GraphError::NoGirth5TwoFactor)
}

/// A spanning tree of the graph obtained by shrinking every cycle of a
/// 2-factor to a point, given as edges of the original graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContractedForest {
    pub tree_edges: Vec<Edge>,
    pub cycle_of: Vec<usize>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut root = x;
    while parent[root] != root {
        root = parent[root];
    }
    let mut cur = x;
    while parent[cur] != root {
        let next = parent[cur];
        parent[cur] = root;
        cur = next;
    }
    root
}

/// Kruskal over the non-factor edges in lexicographic order.
pub fn contract_cycles(g: &Graph, f: &TwoFactor) -> Result<ContractedForest, GraphError> {
    f.validate(g)?;
    let cycle_of = f.cycle_of(g.n());
    let factor_edges: BTreeSet<Edge> = f.edges().into_iter().collect();
    let mut parent: Vec<usize> = (0..f.cycles.len()).collect();
    let mut tree_edges = Vec::new();
    for &(u, v) in g.edges() {
        if factor_edges.contains(&(u, v)) {
            continue;
        }
        let (a, b) = (find(&mut parent, cycle_of[u]), find(&mut parent, cycle_of[v]));
        if a != b {
            parent[a] = b;
            tree_edges.push((u, v));
        }
    }
    if tree_edges.len() + 1 != f.cycles.len() {
        return Err(GraphError::Precondition(
            "graph is disconnected; the contracted graph has no spanning tree".into(),
        ));
    }
    Ok(ContractedForest { tree_edges, cycle_of })
}

pub fn two_factor_union_spans(g: &Graph) -> Result<bool, GraphError> {
    two_factor_union_spans_capped(g, DEFAULT_TWO_FACTOR_MAX_NODES)
}

/// Whether the edges lying on at least one 2-factor form a connected
/// spanning subgraph.
pub fn two_factor_union_spans_capped(g: &Graph, max_nodes: usize) -> Result<bool, GraphError> {
    let mut union = BTreeSet::new();
    for_each_two_factor(g, max_nodes, &mut |f| {
        union.extend(f.edges());
        ControlFlow::Continue(())
    })?;
    if union.is_empty() {
        return Ok(false);
    }
    Ok(is_connected(&Graph::new(g.n(), union)?))
}

/// A Hamiltonian cycle (as `n` distinct nodes starting at 0) found by plain
/// backtracking, or `None`. Graphs with fewer than 3 nodes have none.
pub fn hamiltonian_cycle(g: &Graph) -> Option<Vec<Node>> {
    fn extend(g: &Graph, path: &mut Vec<Node>, used: &mut [bool]) -> bool {
        let last = *path.last().unwrap();
        if path.len() == g.n() {
            return g.has_edge(last, path[0]);
        }
        for &w in g.neighbors(last) {
            if !used[w] {
                used[w] = true;
                path.push(w);
                if extend(g, path, used) {
                    return true;
                }
                path.pop();
                used[w] = false;
            }
        }
        false
    }
    if g.n() < 3 {
        return None;
    }
    let mut used = vec![false; g.n()];
    used[0] = true;
    let mut path = vec![0];
    extend(g, &mut path, &mut used).then_some(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    /// Reference count: every edge subset whose degrees are all 2.
    fn brute_force_count(g: &Graph) -> usize {
        let m = g.edge_count();
        (0u32..1 << m)
            .filter(|mask| {
                let mut deg = vec![0; g.n()];
                for (i, &(u, v)) in g.edges().iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        deg[u] += 1;
                        deg[v] += 1;
                    }
                }
                deg.iter().all(|&d| d == 2)
            })
            .count()
    }

    #[test]
    fn triangle_and_hexagon_have_one_factor() {
        let k3 = enumerate_two_factors(&families::complete(3), None).unwrap();
        assert_eq!(k3, vec![TwoFactor { cycles: vec![vec![0, 1, 2]] }]);
        let c6 = enumerate_two_factors(&families::cycle(6), None).unwrap();
        assert_eq!(c6, vec![TwoFactor { cycles: vec![vec![0, 1, 2, 3, 4, 5]] }]);
    }

    #[test]
    fn k4_has_three_four_cycles() {
        let g = families::complete(4);
        let fs = enumerate_two_factors(&g, None).unwrap();
        assert_eq!(fs.len(), 3);
        assert_eq!(brute_force_count(&g), 3);
        for f in &fs {
            f.validate(&g).unwrap();
            assert_eq!(f.cycles.len(), 1);
            assert_eq!(f.cycles[0].len(), 4);
        }
        assert_eq!(enumerate_two_factors(&g, Some(2)).unwrap().len(), 2);
    }

    #[test]
    fn counts_match_brute_force() {
        for g in [
            families::petersen(),
            families::k33(),
            families::prism(),
            families::complete(5),
            families::complete(6),
            families::two_triangles_with_bridge(),
            families::star(5),
        ] {
            let fs = enumerate_two_factors(&g, None).unwrap();
            assert_eq!(fs.len(), brute_force_count(&g), "{g:?}");
            let distinct: BTreeSet<_> = fs.iter().cloned().collect();
            assert_eq!(distinct.len(), fs.len());
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = families::cycle(17);
        assert_eq!(
            enumerate_two_factors(&g, None),
            Err(GraphError::CapExceeded { n: 17, cap: 16 })
        );
        assert_eq!(enumerate_two_factors_capped(&g, None, 17).unwrap().len(), 1);
    }

    #[test]
    fn girth5_factors() {
        let p = find_girth5_two_factor(&families::petersen()).unwrap();
        assert_eq!(p.cycles.len(), 2);
        assert!(p.cycles.iter().all(|c| c.len() == 5));
        let k = find_girth5_two_factor(&families::k33()).unwrap();
        assert_eq!(k.cycles.len(), 1);
        assert_eq!(k.cycles[0].len(), 6);
        assert_eq!(
            find_girth5_two_factor(&families::complete(4)),
            Err(GraphError::NoGirth5TwoFactor)
        );
        assert!(matches!(
            find_girth5_two_factor(&families::cycle(5)),
            Err(GraphError::Precondition(_))
        ));
    }

    #[test]
    fn contraction_sizes() {
        let g = families::petersen();
        let f = find_girth5_two_factor(&g).unwrap();
        let cf = contract_cycles(&g, &f).unwrap();
        assert_eq!(cf.tree_edges.len(), 1);

        let g = families::k33();
        let f = find_girth5_two_factor(&g).unwrap();
        assert!(contract_cycles(&g, &f).unwrap().tree_edges.is_empty());

        let g = families::prism();
        let f = TwoFactor::new(&g, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap();
        let cf = contract_cycles(&g, &f).unwrap();
        assert_eq!(cf.tree_edges, vec![(0, 3)]);
        assert_eq!(cf.cycle_of, vec![0, 0, 0, 1, 1, 1]);
    }

    #[test]
    fn invalid_factor_rejected() {
        let g = families::prism();
        assert!(TwoFactor::new(&g, vec![vec![0, 1, 2]]).is_err());
        assert!(TwoFactor::new(&g, vec![vec![0, 1, 5, 4, 3, 2]]).is_err());
    }

    #[test]
    fn union_spans() {
        assert!(two_factor_union_spans(&families::complete(4)).unwrap());
        assert!(!two_factor_union_spans(&families::star(5)).unwrap());
        assert!(!two_factor_union_spans(&families::two_triangles_with_bridge()).unwrap());
        assert!(two_factor_union_spans(&families::petersen()).unwrap());
    }

    #[test]
    fn hamiltonian_cycles() {
        assert_eq!(hamiltonian_cycle(&families::complete(3)), Some(vec![0, 1, 2]));
        assert!(hamiltonian_cycle(&families::petersen()).is_none());
        assert!(hamiltonian_cycle(&families::path(3)).is_none());
        assert!(hamiltonian_cycle(&families::k33()).is_some());
    }

    #[test]
    fn cycle_normalization() {
        assert_eq!(normalize_cycle(vec![2, 0, 1, 2]), vec![0, 1, 2]);
        assert_eq!(normalize_cycle(vec![3, 2, 1, 0]), vec![0, 1, 2, 3]);
    }
}
