//! Maximum number of agents on a tree by exhaustive configuration search.
//!
//! Steps are reversible, so a feasible agency is a closed walk inside one
//! connected component of the labeled configuration graph. A train shift is
//! a sequence of single moves into vacancies, so single moves generate the
//! same components. `k` agents are feasible iff some component lets every
//! agent stand on every node.

use std::collections::{HashSet, VecDeque};

use crate::graph::{is_tree, Graph, Node};

use super::SolveError;

pub const REACHABILITY_MAX_NODES: usize = 9;

/// Configurations as 4-bit node ids per agent.
fn encode(pos: &[Node]) -> u64 {
    pos.iter().fold(0, |acc, &p| acc << 4 | p as u64)
}

fn decode(code: u64, k: usize) -> Vec<Node> {
    (0..k).rev().map(|i| (code >> (4 * i) & 0xF) as Node).collect()
}

fn placements(n: usize, k: usize) -> Vec<Vec<Node>> {
    fn go(n: usize, k: usize, cur: &mut Vec<Node>, used: &mut [bool], out: &mut Vec<Vec<Node>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                go(n, k, cur, used, out);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, k, &mut Vec::with_capacity(k), &mut vec![false; n], &mut out);
    out
}

fn feasible(g: &Graph, k: usize) -> bool {
    let n = g.n();
    if n == 1 {
        return true;
    }
    let full = (1u64 << n) - 1;
    let mut seen: HashSet<u64> = HashSet::new();
    for start in placements(n, k) {
        let code = encode(&start);
        if !seen.insert(code) {
            continue;
        }
        let mut reach = vec![0u64; k];
        let mut queue = VecDeque::from([code]);
        while let Some(c) = queue.pop_front() {
            let pos = decode(c, k);
            let mut occupied = 0u64;
            for (a, &p) in pos.iter().enumerate() {
                reach[a] |= 1 << p;
                occupied |= 1 << p;
            }
            for a in 0..k {
                for &w in g.neighbors(pos[a]) {
                    if occupied >> w & 1 == 0 {
                        let mut next = pos.clone();
                        next[a] = w;
                        let nc = encode(&next);
                        if seen.insert(nc) {
                            queue.push_back(nc);
                        }
                    }
                }
            }
        }
        if reach.iter().all(|&r| r == full) {
            return true;
        }
    }
    false
}

/// Largest `k` for which the tree `g` admits a feasible agency (parking
/// allowed), found by scanning `k = n, n-1, ..., 1`.
pub fn config_reachability_max_k(g: &Graph) -> Result<usize, SolveError> {
    if !is_tree(g) {
        return Err(SolveError::NotTree);
    }
    let n = g.n();
    if n > REACHABILITY_MAX_NODES {
        return Err(SolveError::CapExceeded { what: "n", value: n, cap: REACHABILITY_MAX_NODES });
    }
    Ok((1..=n).rev().find(|&k| feasible(g, k)).unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn known_values() {
        assert_eq!(config_reachability_max_k(&families::path(1)).unwrap(), 1);
        assert_eq!(config_reachability_max_k(&families::path(2)).unwrap(), 1);
        assert_eq!(config_reachability_max_k(&families::star(4)).unwrap(), 2);
        assert_eq!(config_reachability_max_k(&families::path(5)).unwrap(), 1);
        assert_eq!(config_reachability_max_k(&families::double_star()).unwrap(), 3);
    }

    #[test]
    fn refusals() {
        assert_eq!(config_reachability_max_k(&families::cycle(4)), Err(SolveError::NotTree));
        assert!(config_reachability_max_k(&families::path(10)).is_err());
    }

    #[test]
    fn encoding_round_trips() {
        assert_eq!(decode(encode(&[3, 0, 8]), 3), vec![3, 0, 8]);
    }
}
