//! The two tree families on which the tree lower bounds are attained:
//! `T/k = 4` with parking, and `T/k = 5` with `T = 2n - 2` and no parking.

use crate::agency::Agency;
use crate::graph::{Graph, Node};

use super::{verified, ConstructError};

/// Depth-first closed walk from `root`, children in increasing id order.
/// The returning visit to `root` is left implicit (cyclic reading).
fn euler_walk(g: &Graph, root: Node) -> Vec<Node> {
    fn visit(g: &Graph, v: Node, parent: Option<Node>, out: &mut Vec<Node>) {
        out.push(v);
        for &c in g.neighbors(v) {
            if Some(c) != parent {
                visit(g, c, Some(v), out);
                out.push(v);
            }
        }
    }
    let mut out = Vec::new();
    visit(g, root, None, &mut out);
    out.pop();
    out
}

/// Tree with `r` degree-4 nodes `0..r` on a path, `2r + 2` nodes of degree 3
/// (`r..3r+2`, each the former leaf of that path-of-stars), and two pendant
/// leaves `v1 = 3r+2+2j`, `v2 = 3r+3+2j` under the `j`-th of them.
///
/// The base walk is the depth-first double traversal from node 0 with one
/// extra parking unit at every `v1`, so `T = 16r + 12`; `k = T/4` agents
/// follow it at delays that are multiples of 4.
pub fn build_example1(r: usize) -> Result<(Graph, Agency), ConstructError> {
    if r == 0 {
        return Err(ConstructError::Precondition("example 1 needs r >= 1".into()));
    }
    let middles = 2 * r + 2;
    let n = 7 * r + 6;
    let mut edges = Vec::with_capacity(n - 1);
    for f in 1..r {
        edges.push((f - 1, f));
    }
    // hub `f` gets 4 - (path neighbors) degree-1 nodes of the skeleton
    let mut next_middle = r;
    for f in 0..r {
        let path_deg = usize::from(f > 0) + usize::from(f + 1 < r);
        for _ in 0..4 - path_deg {
            edges.push((f, next_middle));
            next_middle += 1;
        }
    }
    debug_assert_eq!(next_middle, r + middles);
    let mut first_pendant = Vec::with_capacity(middles);
    for j in 0..middles {
        let (m, v1, v2) = (r + j, 3 * r + 2 + 2 * j, 3 * r + 3 + 2 * j);
        edges.push((m, v1));
        edges.push((m, v2));
        first_pendant.push(v1);
    }
    let g = Graph::new(n, edges)?;

    let mut walk = Vec::with_capacity(16 * r + 12);
    for v in euler_walk(&g, 0) {
        walk.push(v);
        if first_pendant.binary_search(&v).is_ok() {
            walk.push(v);
        }
    }
    debug_assert_eq!(walk.len(), 16 * r + 12);
    let agency = Agency::from_delays(&walk, walk.len() / 4, 4, true)?;
    Ok((g.clone(), verified(&g, agency)?))
}

/// Spine `0..=2q`; a pendant leaf on every even spine node below `2q`, a
/// pendant 2-path on every odd spine node, another 2-path on node 0 and
/// three leaves on node `2q`. `n = 5q + 6`.
///
/// The walk runs left to right dipping into the leaves, sweeps the three
/// leaves at the end, then returns right to left dipping into the 2-paths.
/// It has length `10q + 10 = 2n - 2` and never parks; `k = 2q + 2` agents
/// follow it at delays that are multiples of 5.
pub fn build_example2(q: usize) -> Result<(Graph, Agency), ConstructError> {
    if q == 0 {
        return Err(ConstructError::Precondition("example 2 needs q >= 1".into()));
    }
    let spine_len = 2 * q + 1;
    let n = 5 * q + 6;
    let mut edges = Vec::with_capacity(n - 1);
    for s in 1..spine_len {
        edges.push((s - 1, s));
    }
    let mut next = spine_len;
    let mut fresh = || {
        next += 1;
        next - 1
    };
    let mut leaf_at = vec![None; spine_len];
    let mut two_path_at = vec![None; spine_len];
    for s in (0..2 * q).step_by(2) {
        let a = fresh();
        edges.push((s, a));
        leaf_at[s] = Some(a);
    }
    for s in (1..2 * q).step_by(2).chain([0]) {
        let (b1, b2) = (fresh(), fresh());
        edges.push((s, b1));
        edges.push((b1, b2));
        two_path_at[s] = Some((b1, b2));
    }
    let last = 2 * q;
    let star: Vec<Node> = (0..3).map(|_| fresh()).collect();
    for &s in &star {
        edges.push((last, s));
    }
    let g = Graph::new(n, edges)?;

    let mut walk = Vec::with_capacity(10 * q + 10);
    for (s, leaf) in leaf_at.iter().enumerate().take(last) {
        walk.push(s);
        if let Some(a) = *leaf {
            walk.extend([a, s]);
        }
    }
    walk.push(last);
    for &s in &star {
        walk.extend([s, last]);
    }
    for s in (0..last).rev() {
        walk.push(s);
        if let Some((b1, b2)) = two_path_at[s] {
            walk.extend([b1, b2, b1]);
            if s != 0 {
                walk.push(s);
            }
        }
    }
    debug_assert_eq!(walk.len(), 10 * q + 10);
    let agency = Agency::from_delays(&walk, walk.len() / 5, 5, false)?;
    Ok((g.clone(), verified(&g, agency)?))
}
