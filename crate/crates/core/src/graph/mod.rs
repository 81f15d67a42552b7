//! Simple undirected graphs and the structural algorithms the constructions
//! rely on.
//!
//! Nodes are `0..n`. Edges are stored canonically as `(u, v)` with `u < v`
//! in sorted order, so two graphs with the same edge set compare equal no
//! matter how they were built.

mod connectivity;
pub mod families;
mod iso;
mod parse;
mod tree;
mod two_factor;

pub use connectivity::{
    bridges, component_count, is_connected, is_three_edge_connected,
    is_two_edge_connected,
};
pub use iso::{automorphisms, canonical_form, connected_graphs, nonisomorphic_trees};
pub use parse::{graph_to_json, load_graph};
pub use tree::{find_star_edge, is_tree, stretch_metrics, StarEdge, StretchReport};
pub use two_factor::{
    contract_cycles, enumerate_two_factors, enumerate_two_factors_capped, find_girth5_two_factor,
    find_girth5_two_factor_capped, hamiltonian_cycle, two_factor_union_spans,
    two_factor_union_spans_capped, ContractedForest, TwoFactor, DEFAULT_TWO_FACTOR_MAX_NODES,
};

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

pub type Node = usize;
pub type Edge = (Node, Node);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("self-loop at node {0}")]
    SelfLoop(Node),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Node, Node),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    NodeOutOfRange { u: Node, v: Node, n: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("graph has {n} nodes, enumeration cap is {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("no 2-factor with all cycles of length >= 5 exists")]
    NoGirth5TwoFactor,
}

/// Orders an edge so the smaller endpoint comes first.
pub fn canonical_edge(u: Node, v: Node) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<Node>>,
}

impl Graph {
    /// Builds a graph, rejecting self-loops, duplicates and out-of-range
    /// endpoints. Edge orientation in the input does not matter.
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::NodeOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = canonical_edge(u, v);
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        let edges: Vec<Edge> = set.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, edges, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: Node) -> &[Node] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Node) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Node, v: Node) -> bool {
        u < self.n && v < self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// Index of `{u, v}` in [`Graph::edges`].
    pub fn edge_index(&self, u: Node, v: Node) -> Option<usize> {
        self.edges.binary_search(&canonical_edge(u, v)).ok()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|a| a.len() == d)
    }

    /// Copy of this graph with the listed edges removed.
    pub fn without_edges(&self, removed: &[Edge]) -> Graph {
        let removed: BTreeSet<Edge> = removed.iter().map(|&(u, v)| canonical_edge(u, v)).collect();
        Graph::new(
            self.n,
            self.edges.iter().copied().filter(|e| !removed.contains(e)),
        )
        .expect("subgraph of a valid graph is valid")
    }

    /// Breadth-first distances from `src`; `usize::MAX` for unreachable nodes.
    pub fn bfs_distances(&self, src: Node) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs shortest path lengths.
    pub fn distance_matrix(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|v| self.bfs_distances(v)).collect()
    }

    /// Shortest path from `src` to `dst` with lexicographically smallest
    /// predecessor choices, or `None` if unreachable.
    pub fn shortest_path(&self, src: Node, dst: Node) -> Option<Vec<Node>> {
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        parent[src] = src;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            if u == dst {
                break;
            }
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        if parent[dst] == usize::MAX {
            return None;
        }
        let mut path = vec![dst];
        let mut cur = dst;
        while cur != src {
            cur = parent[cur];
            path.push(cur);
        }
        path.reverse();
        Some(path)
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}
