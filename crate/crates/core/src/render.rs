//! Derived views for figures: Graphviz DOT and a CSV occupancy timeline.

use std::fmt::Write;

use crate::agency::Agency;
use crate::graph::Graph;

/// Undirected DOT of `g`. With an agency, nodes occupied at time `t` are
/// filled and labeled with their agent.
pub fn to_dot(g: &Graph, snapshot: Option<(&Agency, usize)>) -> String {
    let mut occupant = vec![None; g.n()];
    if let Some((a, t)) = snapshot {
        for agent in 0..a.agents() {
            occupant[a.position(agent, t)] = Some(agent);
        }
    }
    let mut out = String::from("graph G {\n  node [shape=circle];\n");
    for (v, occ) in occupant.iter().enumerate() {
        match occ {
            Some(agent) => writeln!(out, "  {v} [label=\"{v}\\na{agent}\", style=filled, fillcolor=lightblue];"),
            None => writeln!(out, "  {v};"),
        }
        .unwrap();
    }
    for &(u, v) in g.edges() {
        writeln!(out, "  {u} -- {v};").unwrap();
    }
    out.push_str("}\n");
    out
}

/// One line per time unit `0..=T`: `t,<occupant of node 0>,...`, with an
/// empty cell for vacant nodes.
pub fn occupancy_csv(g: &Graph, a: &Agency) -> String {
    let mut out = String::from("t");
    for v in 0..g.n() {
        write!(out, ",n{v}").unwrap();
    }
    out.push('\n');
    for t in 0..=a.horizon() {
        let mut row = vec![String::new(); g.n()];
        for (agent, walk) in a.schedule().iter().enumerate() {
            row[walk[t]] = agent.to_string();
        }
        writeln!(out, "{t},{}", row.join(",")).unwrap();
    }
    out
}
