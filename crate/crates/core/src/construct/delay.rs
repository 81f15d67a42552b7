use crate::agency::Agency;
use crate::graph::{Graph, Node};

use super::{verified, ConstructError};

/// `k = n` agents on a Hamiltonian cycle, agent `i` trailing the leader by
/// `i` time units, so `T = n` and the strength is 1.
///
/// `cycle` lists the `n` nodes in order; a repeated closing node is accepted.
pub fn hamiltonian_delay_agency(g: &Graph, cycle: &[Node]) -> Result<Agency, ConstructError> {
    let mut cycle = cycle.to_vec();
    if cycle.len() > 1 && cycle.first() == cycle.last() {
        cycle.pop();
    }
    let n = g.n();
    if n < 3 || cycle.len() != n {
        return Err(ConstructError::NotHamiltonian(format!(
            "expected {n} distinct nodes (n >= 3), got {}",
            cycle.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in &cycle {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(ConstructError::NotHamiltonian(format!(
                "node {v} repeated or out of range"
            )));
        }
    }
    for i in 0..n {
        let (a, b) = (cycle[i], cycle[(i + 1) % n]);
        if !g.has_edge(a, b) {
            return Err(ConstructError::NotHamiltonian(format!("({a}, {b}) is not an edge")));
        }
    }
    verified(g, Agency::from_delays(&cycle, n, 1, false)?)
}
