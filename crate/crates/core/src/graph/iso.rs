//! Brute-force isomorphism tools for desk-scale graphs: automorphism groups,
//! canonical relabeling, and exhaustive generation of small trees and
//! connected graphs up to isomorphism.

use std::collections::BTreeSet;

use super::{is_connected, Graph, Node};

/// All automorphisms as node maps `perm[v] = image of v`, identity first.
pub fn automorphisms(g: &Graph) -> Vec<Vec<Node>> {
    fn assign(g: &Graph, v: Node, perm: &mut Vec<Node>, used: &mut [bool], out: &mut Vec<Vec<Node>>) {
        if v == g.n() {
            out.push(perm.clone());
            return;
        }
        for img in 0..g.n() {
            if used[img] || g.degree(img) != g.degree(v) {
                continue;
            }
            if (0..v).any(|w| g.has_edge(v, w) != g.has_edge(img, perm[w])) {
                continue;
            }
            used[img] = true;
            perm.push(img);
            assign(g, v + 1, perm, used, out);
            perm.pop();
            used[img] = false;
        }
    }
    let mut out = Vec::new();
    assign(g, 0, &mut Vec::with_capacity(g.n()), &mut vec![false; g.n()], &mut out);
    out
}

/// Bit for the pair `{i, j}` in column-major upper-triangle order, most
/// significant first, so placing node `j` fills a contiguous block of bits.
fn pair_bit(i: usize, j: usize) -> u64 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    1u64 << (63 - (j * (j - 1) / 2 + i))
}

fn prefix_mask(placed: usize) -> u64 {
    let bits = placed * placed.saturating_sub(1) / 2;
    if bits == 0 {
        0
    } else {
        !0u64 << (64 - bits)
    }
}

/// Canonical representative of the isomorphism class of `g` (n <= 11).
///
/// Labels are assigned in non-increasing degree order; among all such
/// labelings the one with the lexicographically largest adjacency upper
/// triangle wins.
pub fn canonical_form(g: &Graph) -> Graph {
    let n = g.n();
    assert!(n <= 11, "canonical_form is brute force; n = {n} is too large");
    let mut degrees: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    degrees.sort_unstable_by(|a, b| b.cmp(a));

    struct Ctx<'a> {
        g: &'a Graph,
        degrees: Vec<usize>,
        order: Vec<Node>,
        used: Vec<bool>,
        best: Option<(u64, Vec<Node>)>,
    }

    fn go(ctx: &mut Ctx<'_>, bits: u64) {
        let n = ctx.g.n();
        let pos = ctx.order.len();
        if let Some((best, _)) = &ctx.best {
            let mask = prefix_mask(pos);
            if bits & mask < best & mask {
                return;
            }
        }
        if pos == n {
            if ctx.best.as_ref().is_none_or(|(b, _)| bits > *b) {
                ctx.best = Some((bits, ctx.order.clone()));
            }
            return;
        }
        for v in 0..n {
            if ctx.used[v] || ctx.g.degree(v) != ctx.degrees[pos] {
                continue;
            }
            let mut next = bits;
            for (p, &w) in ctx.order.iter().enumerate() {
                if ctx.g.has_edge(v, w) {
                    next |= pair_bit(p, pos);
                }
            }
            ctx.used[v] = true;
            ctx.order.push(v);
            go(ctx, next);
            ctx.order.pop();
            ctx.used[v] = false;
        }
    }

    let mut ctx = Ctx {
        g,
        degrees,
        order: Vec::with_capacity(n),
        used: vec![false; n],
        best: None,
    };
    go(&mut ctx, 0);
    let order = ctx.best.map(|(_, o)| o).unwrap_or_default();
    let mut label = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        label[old] = new;
    }
    Graph::new(n, g.edges().iter().map(|&(u, v)| (label[u], label[v])))
        .expect("relabeling preserves validity")
}

/// Every tree on `n` nodes up to isomorphism, in canonical form.
pub fn nonisomorphic_trees(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut current: BTreeSet<Vec<(Node, Node)>> = BTreeSet::new();
    current.insert(Vec::new());
    for size in 2..=n {
        let mut next = BTreeSet::new();
        for edges in &current {
            for attach in 0..size - 1 {
                let mut e = edges.clone();
                e.push((attach, size - 1));
                let g = Graph::new(size, e).unwrap();
                next.insert(canonical_form(&g).edges().to_vec());
            }
        }
        current = next;
    }
    current
        .into_iter()
        .map(|e| Graph::new(n, e).unwrap())
        .collect()
}

/// Every connected graph on `n` nodes up to isomorphism, in canonical form.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut current: BTreeSet<Vec<(Node, Node)>> = BTreeSet::new();
    current.insert(Vec::new());
    for size in 2..=n {
        let mut next = BTreeSet::new();
        for edges in &current {
            for subset in 0u32..1 << (size - 1) {
                let mut e = edges.clone();
                e.extend((0..size - 1).filter(|b| subset >> b & 1 == 1).map(|b| (b, size - 1)));
                let g = Graph::new(size, e).unwrap();
                next.insert(canonical_form(&g).edges().to_vec());
            }
        }
        current = next;
    }
    current
        .into_iter()
        .map(|e| Graph::new(n, e).unwrap())
        .filter(is_connected)
        .collect()
}
