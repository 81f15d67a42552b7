use super::{Edge, Graph, Node};

pub fn component_count(g: &Graph) -> usize {
    let mut seen = vec![false; g.n()];
    let mut count = 0;
    let mut stack = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        stack.push(s);
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    count
}

/// The empty graph is not connected; a single node is.
pub fn is_connected(g: &Graph) -> bool {
    g.n() > 0 && component_count(g) == 1
}

/// Cut edges, found with a low-link depth-first search. Sorted.
pub fn bridges(g: &Graph) -> Vec<Edge> {
    struct State {
        order: Vec<usize>,
        low: Vec<usize>,
        timer: usize,
        out: Vec<Edge>,
    }

    fn dfs(g: &Graph, st: &mut State, u: Node, parent: Option<Node>) {
        st.timer += 1;
        st.order[u] = st.timer;
        st.low[u] = st.timer;
        for &w in g.neighbors(u) {
            if Some(w) == parent {
                continue;
            }
            if st.order[w] == 0 {
                dfs(g, st, w, Some(u));
                st.low[u] = st.low[u].min(st.low[w]);
                if st.low[w] > st.order[u] {
                    st.out.push(super::canonical_edge(u, w));
                }
            } else {
                st.low[u] = st.low[u].min(st.order[w]);
            }
        }
    }

    let mut st = State {
        order: vec![0; g.n()],
        low: vec![0; g.n()],
        timer: 0,
        out: Vec::new(),
    };
    for s in 0..g.n() {
        if st.order[s] == 0 {
            dfs(g, &mut st, s, None);
        }
    }
    st.out.sort_unstable();
    st.out
}

pub fn is_two_edge_connected(g: &Graph) -> bool {
    g.n() >= 2 && is_connected(g) && bridges(g).is_empty()
}

/// No set of at most two edges disconnects the graph. Quadratic in the
/// edge count, which is fine at the sizes this crate targets.
pub fn is_three_edge_connected(g: &Graph) -> bool {
    if !is_two_edge_connected(g) {
        return false;
    }
    g.edges()
        .iter()
        .all(|&e| bridges(&g.without_edges(&[e])).is_empty())
}
