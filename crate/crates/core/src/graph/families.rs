//! Named small graphs used throughout the tests, the CLI and the sweeps.

use super::{Edge, Graph};

fn build(n: usize, edges: impl IntoIterator<Item = Edge>) -> Graph {
    Graph::new(n, edges).expect("family generators produce valid graphs")
}

/// Path `0 - 1 - ... - (n-1)`.
pub fn path(n: usize) -> Graph {
    build(n, (1..n).map(|i| (i - 1, i)))
}

/// Cycle `0 - 1 - ... - (n-1) - 0`, `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least 3 nodes");
    build(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn complete(n: usize) -> Graph {
    build(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

/// Star on `n` nodes: center 0, leaves `1..n`.
pub fn star(n: usize) -> Graph {
    build(n, (1..n).map(|i| (0, i)))
}

/// Complete bipartite `K_{3,3}` with sides `{0,1,2}` and `{3,4,5}`.
pub fn k33() -> Graph {
    build(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v))))
}

/// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i - i+5`.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    build(10, outer.chain(inner).chain(spokes))
}

/// Triangular prism: triangles `{0,1,2}` and `{3,4,5}` with rungs `i - i+3`.
pub fn prism() -> Graph {
    build(
        6,
        [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)],
    )
}

/// Two adjacent joints `0` and `1`, each carrying two leaves.
pub fn double_star() -> Graph {
    build(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)])
}

/// Triangles `{0,1,2}` and `{3,4,5}` joined by the bridge `2 - 3`.
pub fn two_triangles_with_bridge() -> Graph {
    build(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)])
}

/// Center 0 with `legs` paths of `leg_len` nodes each.
pub fn spider(legs: usize, leg_len: usize) -> Graph {
    let mut edges = Vec::new();
    let mut next = 1;
    for _ in 0..legs {
        let mut prev = 0;
        for _ in 0..leg_len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    build(next, edges)
}
