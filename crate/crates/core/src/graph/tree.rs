use serde::Serialize;

use super::{is_connected, Graph, GraphError, Node};

pub fn is_tree(g: &Graph) -> bool {
    is_connected(g) && g.edge_count() + 1 == g.n()
}

/// An edge `uv` of a tree such that the component of `v` in `G - uv` is a
/// star centered at `v` with the given leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarEdge {
    pub u: Node,
    pub v: Node,
    pub leaves: Vec<Node>,
}

fn farthest(g: &Graph, src: Node) -> Node {
    let dist = g.bfs_distances(src);
    // max_by_key keeps the last maximum; reverse to prefer the smallest id
    (0..g.n())
        .rev()
        .max_by_key(|&v| dist[v])
        .expect("non-empty graph")
}

/// Takes the last three nodes `u, v, z` of a longest path (found by a double
/// breadth-first sweep); maximality forces every other neighbor of `v` to be
/// a leaf.
pub fn find_star_edge(g: &Graph) -> Result<StarEdge, GraphError> {
    if !is_tree(g) || g.n() < 3 {
        return Err(GraphError::Precondition(
            "find_star_edge needs a tree with at least 3 nodes".into(),
        ));
    }
    let a = farthest(g, 0);
    let b = farthest(g, a);
    let path = g.shortest_path(a, b).expect("trees are connected");
    let len = path.len();
    let (u, v) = (path[len - 3], path[len - 2]);
    let leaves = g.neighbors(v).iter().copied().filter(|&w| w != u).collect();
    Ok(StarEdge { u, v, leaves })
}

/// Node counts of the longest joint-joint and leaf-joint paths with
/// degree-2 interiors, and of the whole tree when it is a path. `None`
/// stands for "no such path".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StretchReport {
    pub yy: Option<usize>,
    pub ly: Option<usize>,
    pub ll: Option<usize>,
}

pub fn stretch_metrics(g: &Graph) -> Result<StretchReport, GraphError> {
    if !is_tree(g) || g.n() < 2 {
        return Err(GraphError::Precondition(
            "stretch_metrics needs a tree with at least 2 nodes".into(),
        ));
    }
    if (0..g.n()).all(|v| g.degree(v) <= 2) {
        return Ok(StretchReport {
            yy: None,
            ly: None,
            ll: Some(g.n()),
        });
    }
    let mut report = StretchReport {
        yy: None,
        ly: None,
        ll: None,
    };
    for joint in (0..g.n()).filter(|&v| g.degree(v) >= 3) {
        for &first in g.neighbors(joint) {
            // walk through degree-2 nodes until the next leaf or joint
            let (mut prev, mut cur, mut nodes) = (joint, first, 2);
            while g.degree(cur) == 2 {
                let next = g.neighbors(cur).iter().copied().find(|&w| w != prev).unwrap();
                prev = cur;
                cur = next;
                nodes += 1;
            }
            let slot = if g.degree(cur) == 1 {
                &mut report.ly
            } else {
                &mut report.yy
            };
            *slot = Some(slot.map_or(nodes, |m| m.max(nodes)));
        }
    }
    Ok(report)
}
