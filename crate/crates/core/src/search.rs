//! Game-agnostic solvers: shortest-path search (BFS or A*), memoized
//! depth-first reachability, and seeded random playouts.
//!
//! Every puzzle implements [`SearchProblem`]. States are deduplicated by
//! their canonical key, so search terminates whenever the keyed state space
//! is finite.

use std::cmp::Reverse;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, VecDeque};
use std::hash::Hash;

use rand::Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::rng::rng_from_seed;

/// Default cap on node expansions before a search gives up.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

/// The contract every puzzle exposes to the solvers.
pub trait SearchProblem {
    type State: Clone;
    type Move: Clone;
    type Key: Hash + Eq + Copy;

    fn initial_state(&self) -> Self::State;

    /// Appends the legal moves of `state` to `out`, in a deterministic order.
    fn legal_moves(&self, state: &Self::State, out: &mut Vec<Self::Move>);

    fn apply(&self, state: &Self::State, mv: &Self::Move) -> Self::State;

    fn is_goal(&self, state: &Self::State) -> bool;

    fn key(&self, state: &Self::State) -> Self::Key;

    /// Admissible lower bound on the remaining moves, if the puzzle has one.
    fn heuristic(&self, _state: &Self::State) -> Option<u32> {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("node budget of {budget} expansions exhausted")]
    BudgetExceeded { budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult<M> {
    pub solvable: bool,
    pub min_length: Option<usize>,
    pub path: Option<Vec<M>>,
    pub nodes_expanded: u64,
}

impl<M> SolveResult<M> {
    fn unsolvable(nodes_expanded: u64) -> Self {
        SolveResult {
            solvable: false,
            min_length: None,
            path: None,
            nodes_expanded,
        }
    }

    fn solved(path: Vec<M>, nodes_expanded: u64) -> Self {
        SolveResult {
            solvable: true,
            min_length: Some(path.len()),
            path: Some(path),
            nodes_expanded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlayoutResult {
    pub solved: bool,
    pub moves_made: usize,
    pub truncated: bool,
}

#[derive(Debug, Clone, Copy)]
pub struct SearchLimits {
    pub node_budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

struct Node<S, M> {
    state: S,
    parent: usize,
    mv: Option<M>,
}

fn rebuild_path<S, M: Clone>(arena: &[Node<S, M>], mut idx: usize) -> Vec<M> {
    let mut path = Vec::new();
    while let Some(mv) = &arena[idx].mv {
        path.push(mv.clone());
        idx = arena[idx].parent;
    }
    path.reverse();
    path
}

/// Shortest solution with the default node budget.
pub fn solve_min_length<P: SearchProblem>(
    problem: &P,
) -> Result<SolveResult<P::Move>, SearchError> {
    solve_min_length_with(problem, SearchLimits::default())
}

/// Shortest solution: A* when the problem supplies a heuristic, BFS otherwise.
pub fn solve_min_length_with<P: SearchProblem>(
    problem: &P,
    limits: SearchLimits,
) -> Result<SolveResult<P::Move>, SearchError> {
    let start = problem.initial_state();
    if problem.heuristic(&start).is_some() {
        astar(problem, start, limits)
    } else {
        bfs(problem, start, limits)
    }
}

/// Plain breadth-first search, ignoring any heuristic.
pub fn bfs<P: SearchProblem>(
    problem: &P,
    start: P::State,
    limits: SearchLimits,
) -> Result<SolveResult<P::Move>, SearchError> {
    if problem.is_goal(&start) {
        return Ok(SolveResult::solved(Vec::new(), 0));
    }
    let mut seen = FxHashSet::default();
    seen.insert(problem.key(&start));
    let mut arena = vec![Node {
        state: start,
        parent: usize::MAX,
        mv: None,
    }];
    let mut queue = VecDeque::from([0usize]);
    let mut moves = Vec::new();
    let mut expanded = 0u64;

    while let Some(idx) = queue.pop_front() {
        if expanded >= limits.node_budget {
            return Err(SearchError::BudgetExceeded {
                budget: limits.node_budget,
            });
        }
        expanded += 1;
        moves.clear();
        problem.legal_moves(&arena[idx].state, &mut moves);
        for mv in moves.drain(..) {
            let next = problem.apply(&arena[idx].state, &mv);
            if !seen.insert(problem.key(&next)) {
                continue;
            }
            let goal = problem.is_goal(&next);
            arena.push(Node {
                state: next,
                parent: idx,
                mv: Some(mv),
            });
            let child = arena.len() - 1;
            if goal {
                return Ok(SolveResult::solved(rebuild_path(&arena, child), expanded));
            }
            queue.push_back(child);
        }
    }
    Ok(SolveResult::unsolvable(expanded))
}

/// A* over the problem's heuristic (treated as 0 where it returns `None`).
pub fn astar<P: SearchProblem>(
    problem: &P,
    start: P::State,
    limits: SearchLimits,
) -> Result<SolveResult<P::Move>, SearchError> {
    let h = |s: &P::State| problem.heuristic(s).unwrap_or(0) as usize;

    let mut best_g: FxHashMap<P::Key, usize> = FxHashMap::default();
    best_g.insert(problem.key(&start), 0);
    let mut open = BinaryHeap::new();
    // Ties on f prefer deeper nodes, then insertion order for determinism.
    open.push(Reverse((h(&start), Reverse(0usize), 0usize)));
    let mut arena = vec![Node {
        state: start,
        parent: usize::MAX,
        mv: None,
    }];
    let mut g_of = vec![0usize];
    let mut moves = Vec::new();
    let mut expanded = 0u64;

    while let Some(Reverse((_, _, idx))) = open.pop() {
        let g = g_of[idx];
        let key = problem.key(&arena[idx].state);
        if best_g.get(&key).is_some_and(|&b| b < g) {
            continue;
        }
        if problem.is_goal(&arena[idx].state) {
            return Ok(SolveResult::solved(rebuild_path(&arena, idx), expanded));
        }
        if expanded >= limits.node_budget {
            return Err(SearchError::BudgetExceeded {
                budget: limits.node_budget,
            });
        }
        expanded += 1;
        moves.clear();
        problem.legal_moves(&arena[idx].state, &mut moves);
        for mv in moves.drain(..) {
            let next = problem.apply(&arena[idx].state, &mv);
            let ng = g + 1;
            match best_g.entry(problem.key(&next)) {
                Entry::Occupied(mut e) => {
                    if *e.get() <= ng {
                        continue;
                    }
                    e.insert(ng);
                }
                Entry::Vacant(e) => {
                    e.insert(ng);
                }
            }
            let f = ng + h(&next);
            arena.push(Node {
                state: next,
                parent: idx,
                mv: Some(mv),
            });
            g_of.push(ng);
            let child = arena.len() - 1;
            open.push(Reverse((f, Reverse(ng), child)));
        }
    }
    Ok(SolveResult::unsolvable(expanded))
}

/// Solvability only, with the default node budget.
pub fn check_solvable<P: SearchProblem>(problem: &P) -> Result<(bool, u64), SearchError> {
    check_solvable_with(problem, SearchLimits::default())
}

/// Depth-first reachability of a goal with a transposition table of keys.
pub fn check_solvable_with<P: SearchProblem>(
    problem: &P,
    limits: SearchLimits,
) -> Result<(bool, u64), SearchError> {
    let start = problem.initial_state();
    if problem.is_goal(&start) {
        return Ok((true, 0));
    }
    let mut seen = FxHashSet::default();
    seen.insert(problem.key(&start));
    let mut stack = vec![start];
    let mut moves = Vec::new();
    let mut expanded = 0u64;

    while let Some(state) = stack.pop() {
        if expanded >= limits.node_budget {
            return Err(SearchError::BudgetExceeded {
                budget: limits.node_budget,
            });
        }
        expanded += 1;
        moves.clear();
        problem.legal_moves(&state, &mut moves);
        // Reverse so the first listed move is explored first.
        for mv in moves.iter().rev() {
            let next = problem.apply(&state, mv);
            if !seen.insert(problem.key(&next)) {
                continue;
            }
            if problem.is_goal(&next) {
                return Ok((true, expanded));
            }
            stack.push(next);
        }
    }
    Ok((false, expanded))
}

/// Plays uniformly random legal moves until the goal, a dead end, or `cap` moves.
pub fn random_playout<P: SearchProblem>(problem: &P, seed: u64, cap: usize) -> PlayoutResult {
    assert!(cap >= 1, "playout cap must be positive");
    let mut rng = rng_from_seed(seed);
    let mut state = problem.initial_state();
    let mut moves = Vec::new();
    let mut made = 0;
    loop {
        if problem.is_goal(&state) {
            return PlayoutResult {
                solved: true,
                moves_made: made,
                truncated: false,
            };
        }
        if made == cap {
            return PlayoutResult {
                solved: false,
                moves_made: made,
                truncated: true,
            };
        }
        moves.clear();
        problem.legal_moves(&state, &mut moves);
        if moves.is_empty() {
            return PlayoutResult {
                solved: false,
                moves_made: made,
                truncated: false,
            };
        }
        let mv = &moves[rng.random_range(0..moves.len())];
        state = problem.apply(&state, mv);
        made += 1;
    }
}

/// Replays `path` from the initial state, checking each move against the
/// legal-move list. Returns the final state, or the index of the first
/// illegal move.
pub fn replay<P>(problem: &P, path: &[P::Move]) -> Result<P::State, usize>
where
    P: SearchProblem,
    P::Move: PartialEq,
{
    let mut state = problem.initial_state();
    let mut moves = Vec::new();
    for (i, mv) in path.iter().enumerate() {
        moves.clear();
        problem.legal_moves(&state, &mut moves);
        if !moves.contains(mv) {
            return Err(i);
        }
        state = problem.apply(&state, mv);
    }
    Ok(state)
}
