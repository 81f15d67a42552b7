//! Maximum number of agents on a tree, and a move planner realizing it.
//!
//! On a tree every crash-free step is a set of train shifts into vacancies.
//! The planner drives one agent at a time around the tree by relocating it
//! across single edges, pushing the others out of the way, then plays the
//! whole move sequence backwards so every agent returns to its start.

use std::collections::{HashMap, VecDeque};

use serde::Serialize;

use crate::agency::Agency;
use crate::graph::{is_tree, stretch_metrics, Graph, GraphError, Node};

use super::{verified, ConstructError};

/// Exhaustive relocation search is used only up to this many nodes.
pub const PLANNER_SEARCH_MAX_NODES: usize = 16;

/// Searched agent position and occupied-node mask.
type State = (Node, u64);

/// `min{n - YY - 1, n - LY, n - LL + 1}` over the defined stretches; 1 when
/// `n <= 2`.
pub fn tree_max_agents(g: &Graph) -> Result<usize, ConstructError> {
    if !is_tree(g) {
        return Err(GraphError::Precondition("tree_max_agents needs a tree".into()).into());
    }
    let n = g.n();
    if n <= 2 {
        return Ok(1);
    }
    let s = stretch_metrics(g)?;
    let terms = [
        s.yy.map(|yy| n - yy - 1),
        s.ly.map(|ly| n - ly),
        s.ll.map(|ll| n + 1 - ll),
    ];
    Ok(terms.into_iter().flatten().min().unwrap_or(n))
}

/// One time unit: the listed agents move `(agent, from, to)`, all others park.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PuzzleStep {
    pub moves: Vec<(usize, Node, Node)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PuzzlePlan {
    pub start: Vec<Node>,
    pub steps: Vec<PuzzleStep>,
}

impl PuzzlePlan {
    /// Positions at each time unit, forward then backward.
    pub fn to_agency(&self) -> Result<Agency, ConstructError> {
        let mut pos = self.start.clone();
        let mut trace = vec![pos.clone()];
        for step in &self.steps {
            for &(a, from, to) in &step.moves {
                debug_assert_eq!(pos[a], from);
                pos[a] = to;
            }
            trace.push(pos.clone());
        }
        let back: Vec<Vec<Node>> = trace.iter().rev().skip(1).cloned().collect();
        trace.extend(back);
        if trace.len() == 1 {
            trace.push(pos);
        }
        let rows = (0..self.start.len())
            .map(|a| trace.iter().map(|p| p[a]).collect())
            .collect();
        Ok(Agency::new(trace.len() - 1, true, rows)?)
    }
}

struct Board<'g> {
    g: &'g Graph,
    at: Vec<Option<usize>>,
    pos: Vec<Node>,
    seen: Vec<Vec<bool>>,
    steps: Vec<PuzzleStep>,
}

impl<'g> Board<'g> {
    fn new(g: &'g Graph, k: usize) -> Self {
        let n = g.n();
        let mut at = vec![None; n];
        let mut seen = vec![vec![false; n]; k];
        for a in 0..k {
            at[a] = Some(a);
            seen[a][a] = true;
        }
        Board {
            g,
            at,
            pos: (0..k).collect(),
            seen,
            steps: Vec::new(),
        }
    }

    fn vacant(&self, v: Node) -> bool {
        self.at[v].is_none()
    }

    fn apply(&mut self, moves: Vec<(usize, Node, Node)>) {
        for &(a, from, _) in &moves {
            debug_assert_eq!(self.at[from], Some(a));
            self.at[from] = None;
        }
        for &(a, _, to) in &moves {
            debug_assert!(self.at[to].is_none(), "two agents sent to {to}");
            self.at[to] = Some(a);
            self.pos[a] = to;
            self.seen[a][to] = true;
        }
        self.steps.push(PuzzleStep { moves });
    }

    fn walk(&mut self, agent: usize, path: &[Node]) {
        for &v in path {
            let from = self.pos[agent];
            self.apply(vec![(agent, from, v)]);
        }
    }

    /// Shortest path `[nb, .., x]` inside the branch at `nb` (away from `u`)
    /// to the first node accepted by `accept(board, x, parent of x)`.
    fn branch_search(
        &self,
        u: Node,
        nb: Node,
        accept: impl Fn(&Self, Node, Node) -> bool,
    ) -> Option<Vec<Node>> {
        let mut parent = HashMap::from([(nb, u)]);
        let mut queue = VecDeque::from([nb]);
        while let Some(x) = queue.pop_front() {
            if accept(self, x, parent[&x]) {
                let mut path = vec![x];
                while *path.last().unwrap() != nb {
                    path.push(parent[path.last().unwrap()]);
                }
                path.reverse();
                return Some(path);
            }
            for &y in self.g.neighbors(x) {
                if y != u && !parent.contains_key(&y) {
                    parent.insert(y, x);
                    queue.push_back(y);
                }
            }
        }
        None
    }

    fn nearest_vacancy(&self, u: Node, nb: Node) -> Option<Vec<Node>> {
        self.branch_search(u, nb, |b, x, _| b.vacant(x))
    }

    /// The agent on `u` enters `path[0]` while the occupants of the path
    /// shift one place toward the vacancy at its end.
    fn push(&mut self, u: Node, path: &[Node]) {
        let mut moves = vec![(self.at[u].unwrap(), u, path[0])];
        for w in path.windows(2) {
            moves.push((self.at[w[0]].unwrap(), w[0], w[1]));
        }
        self.apply(moves);
    }

    /// Moves `agent` from its node to the adjacent node `v`.
    fn relocate(&mut self, agent: usize, v: Node) -> Result<(), ConstructError> {
        let u = self.pos[agent];
        if self.vacant(v) {
            self.apply(vec![(agent, u, v)]);
            return Ok(());
        }
        if let Some(path) = self.nearest_vacancy(u, v) {
            self.push(u, &path);
            return Ok(());
        }
        let blocker = self.at[v].unwrap();
        let others: Vec<Vec<Node>> = self
            .g
            .neighbors(u)
            .iter()
            .filter(|&&nb| nb != v)
            .filter_map(|&nb| self.nearest_vacancy(u, nb))
            .collect();
        if let [h1, h2, ..] = others.as_slice() {
            // two branches with room: park each agent in one, then swap
            let (h1, h2) = (h1.clone(), h2.clone());
            self.push(u, &h1);
            self.apply(vec![(blocker, v, u)]);
            self.push(u, &h2);
            self.walk(agent, &[u, v]);
            return Ok(());
        }
        if let Some((path, (u11, u12))) = self.clear_joint(u, v) {
            // pass each other at a joint
            let mut out = path.clone();
            out.push(u12);
            self.walk(agent, &out);
            let mut detour = vec![u];
            detour.extend(&path);
            detour.push(u11);
            self.walk(blocker, &detour);
            let mut back: Vec<Node> = path.iter().rev().copied().collect();
            back.extend([u, v]);
            self.walk(agent, &back);
            return Ok(());
        }
        self.search_relocate(agent, v)
    }

    /// Nodes of the branch at `nb`, away from `u`.
    fn branch(&self, u: Node, nb: Node) -> Vec<Node> {
        let mut out = vec![nb];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &y in self.g.neighbors(x) {
                if y != u && !out.contains(&y) {
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    /// Finds the nearest joint `u1` in a branch of `u` other than that of
    /// `v` holding enough vacancies, then slides agents away so that the
    /// path to `u1` and two further neighbors of `u1` are all vacant.
    fn clear_joint(&mut self, u: Node, v: Node) -> Option<(Vec<Node>, (Node, Node))> {
        for &nb in self.g.neighbors(u) {
            if nb == v {
                continue;
            }
            let Some(path) = self.branch_search(u, nb, |b, x, _| b.g.degree(x) >= 3) else {
                continue;
            };
            let joint = *path.last().unwrap();
            let parent = if path.len() >= 2 { path[path.len() - 2] } else { u };
            let side: Vec<Node> =
                self.g.neighbors(joint).iter().copied().filter(|&y| y != parent).take(2).collect();
            let mut targets = path.clone();
            targets.extend(&side);
            let room = self.branch(u, nb).into_iter().filter(|&x| self.vacant(x)).count();
            if room < targets.len() {
                continue;
            }
            for x in targets.clone() {
                while !self.vacant(x) {
                    let way = self
                        .branch_search(u, x, |b, y, _| b.vacant(y) && !targets.contains(&y))
                        .expect("enough vacancies in the branch");
                    self.slide(&way);
                }
            }
            return Some((path, (side[0], side[1])));
        }
        None
    }

    /// Vacates `path[0]` and fills the vacant `path[last]`, leaving the
    /// occupancy of the interior unchanged; single moves only.
    fn slide(&mut self, path: &[Node]) {
        let mut free = path.len() - 1;
        for j in (0..free).rev() {
            if let Some(a) = self.at[path[j]] {
                self.walk(a, &path[j + 1..=free]);
                free = j;
            }
        }
    }

    /// Breadth-first search over (agent position, occupied set) with single
    /// moves; the other agents are interchangeable for this purpose.
    fn search_relocate(&mut self, agent: usize, v: Node) -> Result<(), ConstructError> {
        let n = self.g.n();
        if n > PLANNER_SEARCH_MAX_NODES {
            return Err(ConstructError::Planner(format!(
                "no direct relocation of agent {agent} to {v} and n = {n} exceeds the search limit {PLANNER_SEARCH_MAX_NODES}"
            )));
        }
        let start_mask: u64 = (0..n)
            .filter(|&x| x != self.pos[agent] && !self.vacant(x))
            .fold(0, |m, x| m | 1 << x);
        let start = (self.pos[agent], start_mask);
        let mut prev: HashMap<State, (State, (Node, Node))> = HashMap::new();
        let mut queue = VecDeque::from([start]);
        prev.insert(start, (start, (usize::MAX, usize::MAX)));
        let mut goal = None;
        while let Some((p, mask)) = queue.pop_front() {
            if p == v {
                goal = Some((p, mask));
                break;
            }
            let occupied = |x: Node| x == p || mask >> x & 1 == 1;
            let mut next = Vec::new();
            for &y in self.g.neighbors(p) {
                if !occupied(y) {
                    next.push(((y, mask), (p, y)));
                }
            }
            for x in (0..n).filter(|&x| mask >> x & 1 == 1) {
                for &y in self.g.neighbors(x) {
                    if !occupied(y) {
                        next.push(((p, mask & !(1 << x) | 1 << y), (x, y)));
                    }
                }
            }
            for (state, mv) in next {
                if let std::collections::hash_map::Entry::Vacant(e) = prev.entry(state) {
                    e.insert(((p, mask), mv));
                    queue.push_back(state);
                }
            }
        }
        let Some(mut state) = goal else {
            return Err(ConstructError::Planner(format!(
                "agent {agent} cannot reach node {v} from the current configuration"
            )));
        };
        let mut moves = Vec::new();
        while state != start {
            let (before, mv) = prev[&state];
            moves.push(mv);
            state = before;
        }
        for (x, y) in moves.into_iter().rev() {
            let a = self.at[x].unwrap();
            self.apply(vec![(a, x, y)]);
        }
        Ok(())
    }
}

fn closed_walk(g: &Graph, root: Node) -> Vec<Node> {
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
    out
}

/// Move plan for `k` agents starting on nodes `0..k`.
pub fn tree_puzzle_plan(g: &Graph, k: usize) -> Result<PuzzlePlan, ConstructError> {
    let max = tree_max_agents(g)?;
    if k == 0 {
        return Err(ConstructError::Precondition("need at least one agent".into()));
    }
    if k > max {
        return Err(ConstructError::TooManyAgents { k, max });
    }
    let mut board = Board::new(g, k);
    for agent in 0..k {
        let mut walk = closed_walk(g, board.pos[agent]).into_iter().skip(1);
        while board.seen[agent].iter().any(|&s| !s) {
            let v = walk.next().expect("closed walk covers the tree");
            board.relocate(agent, v)?;
        }
    }
    Ok(PuzzlePlan {
        start: (0..k).collect(),
        steps: board.steps,
    })
}

/// Feasible agency of `k <= tree_max_agents(g)` agents on the tree `g`.
pub fn tree_puzzle_agency(g: &Graph, k: usize) -> Result<Agency, ConstructError> {
    let plan = tree_puzzle_plan(g, k)?;
    verified(g, plan.to_agency()?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{families, nonisomorphic_trees};

    #[test]
    fn formula_examples() {
        assert_eq!(tree_max_agents(&families::path(1)).unwrap(), 1);
        assert_eq!(tree_max_agents(&families::path(2)).unwrap(), 1);
        assert_eq!(tree_max_agents(&families::star(4)).unwrap(), 2);
        assert_eq!(tree_max_agents(&families::path(5)).unwrap(), 1);
        assert_eq!(tree_max_agents(&families::double_star()).unwrap(), 3);
        let g = Graph::new(7, [(0, 1), (0, 2), (0, 3), (3, 4), (4, 5), (4, 6)]).unwrap();
        assert_eq!(tree_max_agents(&g).unwrap(), 3);
        assert!(tree_max_agents(&families::cycle(4)).is_err());
    }

    #[test]
    fn small_cases() {
        let a = tree_puzzle_agency(&families::path(2), 1).unwrap();
        assert_eq!(a.row(0), &[0, 1, 0]);
        let a = tree_puzzle_agency(&families::path(1), 1).unwrap();
        assert_eq!(a.horizon(), 1);
        let a = tree_puzzle_agency(&families::star(4), 2).unwrap();
        assert_eq!(a.agents(), 2);
        tree_puzzle_agency(&families::double_star(), 3).unwrap();
    }

    #[test]
    fn refuses_too_many() {
        assert_eq!(
            tree_puzzle_agency(&families::star(4), 3).unwrap_err(),
            ConstructError::TooManyAgents { k: 3, max: 2 }
        );
    }

    #[test]
    fn every_small_tree_at_the_maximum() {
        for n in 1..=8 {
            for g in nonisomorphic_trees(n) {
                let k = tree_max_agents(&g).unwrap();
                let a = tree_puzzle_agency(&g, k).unwrap_or_else(|e| panic!("{g:?}: {e}"));
                assert_eq!(a.agents(), k);
            }
        }
    }

    #[test]
    fn larger_spider_uses_structured_moves() {
        let g = families::spider(3, 6);
        let k = tree_max_agents(&g).unwrap();
        assert!(g.n() > PLANNER_SEARCH_MAX_NODES);
        tree_puzzle_agency(&g, k).unwrap();
    }
}
