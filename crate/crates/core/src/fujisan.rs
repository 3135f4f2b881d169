//! Fujisan: move four priests up a 2×12 mountain onto its summit.
//!
//! Every space carries a value 0–5. A priest moves along its row onto a space
//! whose value equals the number of unoccupied spaces travelled, counting the
//! destination but not the origin; occupied spaces are skipped. Priests may
//! also step between the two spaces of a column once on the mountain. A
//! priest that reaches a summit column (5 or 6) may only move vertically.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::rng::rng_from_seed;
use crate::search::SearchProblem;

pub const COLUMNS: usize = 12;
pub const ROWS: usize = 2;
pub const SUMMIT: [usize; 2] = [5, 6];
pub const PRIESTS: usize = 4;
pub const MAX_VALUE: u8 = 5;
/// Attempts allowed when rejection sampling unique-step boards.
pub const REJECTION_LIMIT: usize = 1_000_000;

pub fn is_summit(col: usize) -> bool {
    SUMMIT.contains(&col)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

/// Where a priest stands: off the mountain at its start, or on a space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spot {
    Ground { side: Side, row: usize },
    Board { row: usize, col: usize },
}

impl Spot {
    /// Dense index: board spaces `0..24`, then the four ground slots.
    fn index(self) -> usize {
        match self {
            Spot::Board { row, col } => row * COLUMNS + col,
            Spot::Ground { side: Side::Left, row } => 24 + row,
            Spot::Ground { side: Side::Right, row } => 26 + row,
        }
    }

    fn from_index(i: usize) -> Spot {
        match i {
            0..24 => Spot::Board {
                row: i / COLUMNS,
                col: i % COLUMNS,
            },
            24 | 25 => Spot::Ground {
                side: Side::Left,
                row: i - 24,
            },
            _ => Spot::Ground {
                side: Side::Right,
                row: i - 26,
            },
        }
    }

    /// Column distance to the nearest summit column; ground counts as 6.
    pub fn summit_distance(self) -> usize {
        match self {
            Spot::Ground { .. } => 6,
            Spot::Board { col, .. } if col <= SUMMIT[0] => SUMMIT[0] - col,
            Spot::Board { col, .. } => col - SUMMIT[1],
        }
    }

    pub fn on_summit(self) -> bool {
        matches!(self, Spot::Board { col, .. } if is_summit(col))
    }
}

impl fmt::Display for Spot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spot::Ground { side: Side::Left, row } => write!(f, "L {row}"),
            Spot::Ground { side: Side::Right, row } => write!(f, "R {row}"),
            Spot::Board { row, col } => write!(f, "{row} {col}"),
        }
    }
}

pub const START: [Spot; PRIESTS] = [
    Spot::Ground { side: Side::Left, row: 0 },
    Spot::Ground { side: Side::Left, row: 1 },
    Spot::Ground { side: Side::Right, row: 0 },
    Spot::Ground { side: Side::Right, row: 1 },
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FujisanMove {
    pub priest: usize,
    pub to: (usize, usize),
}

impl fmt::Display for FujisanMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}>{},{}", self.priest, self.to.0, self.to.1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FujisanAlgorithm {
    Shuffled,
    ShuffledUniqueSteps,
    Piecepack,
    EngravedTiles,
    Dominoes,
}

impl FujisanAlgorithm {
    pub const ALL: [FujisanAlgorithm; 5] = [
        FujisanAlgorithm::Shuffled,
        FujisanAlgorithm::ShuffledUniqueSteps,
        FujisanAlgorithm::Piecepack,
        FujisanAlgorithm::EngravedTiles,
        FujisanAlgorithm::Dominoes,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FujisanAlgorithm::Shuffled => "shuffled",
            FujisanAlgorithm::ShuffledUniqueSteps => "shuffled-unique-steps",
            FujisanAlgorithm::Piecepack => "piecepack",
            FujisanAlgorithm::EngravedTiles => "engraved-tiles",
            FujisanAlgorithm::Dominoes => "dominoes",
        }
    }
}

impl FromStr for FujisanAlgorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown fujisan algorithm '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FujisanBoard {
    /// `values[row][col]`, row 0 lower.
    values: [[u8; COLUMNS]; ROWS],
    priests: [Spot; PRIESTS],
}

impl FujisanBoard {
    /// Board with priests at their starting ground slots.
    pub fn new(values: [[u8; COLUMNS]; ROWS]) -> Result<Self> {
        Self::with_priests(values, START)
    }

    pub fn with_priests(values: [[u8; COLUMNS]; ROWS], priests: [Spot; PRIESTS]) -> Result<Self> {
        if values.iter().flatten().any(|&v| v > MAX_VALUE) {
            return Err(Error::InvalidParams(format!("space values must be 0..={MAX_VALUE}")));
        }
        for (i, p) in priests.iter().enumerate() {
            match *p {
                Spot::Board { row, col } if row >= ROWS || col >= COLUMNS => {
                    return Err(Error::InvalidParams(format!("priest {i} off the board")));
                }
                Spot::Ground { row, .. } if row >= ROWS => {
                    return Err(Error::InvalidParams(format!("priest {i} on a missing ground slot")));
                }
                _ => {}
            }
            if priests[..i].contains(p) {
                return Err(Error::InvalidParams(format!("two priests share {p}")));
            }
        }
        Ok(FujisanBoard { values, priests })
    }

    pub fn values(&self) -> &[[u8; COLUMNS]; ROWS] {
        &self.values
    }

    pub fn value(&self, row: usize, col: usize) -> u8 {
        self.values[row][col]
    }

    pub fn priests(&self) -> &[Spot; PRIESTS] {
        &self.priests
    }

    pub fn entered_mountain(&self, priest: usize) -> bool {
        matches!(self.priests[priest], Spot::Board { .. })
    }

    pub fn at_start(&self) -> bool {
        self.priests == START
    }

    /// Unordered value pair of each column.
    pub fn steps(&self) -> [(u8, u8); COLUMNS] {
        std::array::from_fn(|c| {
            let (a, b) = (self.values[0][c], self.values[1][c]);
            (a.min(b), a.max(b))
        })
    }

    fn occupancy(&self) -> u32 {
        self.priests.iter().fold(0, |m, p| m | 1 << p.index())
    }
}

impl fmt::Display for FujisanBoard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fujisan")?;
        for row in [1, 0] {
            let line: String = self.values[row].iter().map(|v| (b'0' + v) as char).collect();
            writeln!(f, "{line}")?;
        }
        if !self.at_start() {
            for p in &self.priests {
                writeln!(f, "P {p}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for FujisanBoard {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        if header != "fujisan" {
            return Err(parse_err(ln, "expected header 'fujisan'"));
        }
        let mut values = [[0u8; COLUMNS]; ROWS];
        for row in [1, 0] {
            let (ln, line) = lines.next().ok_or_else(|| parse_err(ln, "missing value row"))?;
            let digits: Vec<u8> = line
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as u8))
                .collect::<Option<_>>()
                .ok_or_else(|| parse_err(ln, "values must be digits"))?;
            if digits.len() != COLUMNS {
                return Err(parse_err(ln, format!("expected {COLUMNS} digits")));
            }
            values[row].copy_from_slice(&digits);
        }
        let mut priests = Vec::new();
        for (ln, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 || f[0] != "P" {
                return Err(parse_err(ln, "expected priest line 'P side row' or 'P row col'"));
            }
            let num = |s: &str| s.parse::<usize>().map_err(|_| parse_err(ln, format!("bad number '{s}'")));
            let spot = match f[1] {
                "L" => Spot::Ground { side: Side::Left, row: num(f[2])? },
                "R" => Spot::Ground { side: Side::Right, row: num(f[2])? },
                r => Spot::Board { row: num(r)?, col: num(f[2])? },
            };
            priests.push(spot);
        }
        let priests = match priests.len() {
            0 => START,
            PRIESTS => [priests[0], priests[1], priests[2], priests[3]],
            n => return Err(parse_err(ln, format!("expected 0 or 4 priest lines, got {n}"))),
        };
        FujisanBoard::with_priests(values, priests)
    }
}

/// Solver view of a board. The state is the priests' spot indices; the
/// canonical key is their occupancy bitmask, since priests are interchangeable.
#[derive(Debug, Clone)]
pub struct FujisanPuzzle {
    values: [[u8; COLUMNS]; ROWS],
    start: [u8; PRIESTS],
}

impl FujisanPuzzle {
    pub fn new(board: &FujisanBoard) -> Self {
        FujisanPuzzle {
            values: board.values,
            start: board.priests.map(|p| p.index() as u8),
        }
    }

    pub fn board(&self, state: &[u8; PRIESTS]) -> FujisanBoard {
        FujisanBoard {
            values: self.values,
            priests: state.map(|i| Spot::from_index(i as usize)),
        }
    }

    /// Horizontal destinations in `row` scanning from just past `from` in
    /// direction `step`, with `occ` the board occupancy.
    fn scan(&self, occ: u32, row: usize, from: isize, step: isize, mut emit: impl FnMut(usize)) {
        let mut col = from + step;
        let mut travelled = 0u8;
        while (0..COLUMNS as isize).contains(&col) && travelled < MAX_VALUE {
            let c = col as usize;
            if occ & 1 << (row * COLUMNS + c) == 0 {
                travelled += 1;
                if self.values[row][c] == travelled {
                    emit(c);
                }
            }
            col += step;
        }
    }
}

impl SearchProblem for FujisanPuzzle {
    type State = [u8; PRIESTS];
    type Move = FujisanMove;
    type Key = u32;

    fn initial_state(&self) -> [u8; PRIESTS] {
        self.start
    }

    fn legal_moves(&self, state: &[u8; PRIESTS], out: &mut Vec<FujisanMove>) {
        let occ = state.iter().fold(0u32, |m, &i| m | 1 << i);
        for (priest, &idx) in state.iter().enumerate() {
            match Spot::from_index(idx as usize) {
                Spot::Ground { side, row } => {
                    let (from, step) = match side {
                        Side::Left => (-1, 1),
                        Side::Right => (COLUMNS as isize, -1),
                    };
                    self.scan(occ, row, from, step, |c| out.push(FujisanMove { priest, to: (row, c) }));
                }
                Spot::Board { row, col } => {
                    if !is_summit(col) {
                        for step in [-1, 1] {
                            self.scan(occ, row, col as isize, step, |c| {
                                out.push(FujisanMove { priest, to: (row, c) })
                            });
                        }
                    }
                    let other = 1 - row;
                    if occ & 1 << (other * COLUMNS + col) == 0 {
                        out.push(FujisanMove { priest, to: (other, col) });
                    }
                }
            }
        }
    }

    fn apply(&self, state: &[u8; PRIESTS], mv: &FujisanMove) -> [u8; PRIESTS] {
        let mut next = *state;
        next[mv.priest] = (mv.to.0 * COLUMNS + mv.to.1) as u8;
        next
    }

    fn is_goal(&self, state: &[u8; PRIESTS]) -> bool {
        state.iter().all(|&i| Spot::from_index(i as usize).on_summit())
    }

    fn key(&self, state: &[u8; PRIESTS]) -> u32 {
        state.iter().fold(0, |m, &i| m | 1 << i)
    }

    fn heuristic(&self, state: &[u8; PRIESTS]) -> Option<u32> {
        Some(summit_gap(state.iter().map(|&i| Spot::from_index(i as usize))))
    }
}

fn summit_gap(spots: impl Iterator<Item = Spot>) -> u32 {
    PRIESTS as u32 - spots.filter(|s| s.on_summit()).count() as u32
}

/// Plain-BFS view of the same puzzle, for cross-checking A*.
#[derive(Debug, Clone)]
pub struct FujisanNoHeuristic(pub FujisanPuzzle);

impl SearchProblem for FujisanNoHeuristic {
    type State = [u8; PRIESTS];
    type Move = FujisanMove;
    type Key = u32;

    fn initial_state(&self) -> Self::State {
        self.0.initial_state()
    }
    fn legal_moves(&self, state: &Self::State, out: &mut Vec<FujisanMove>) {
        self.0.legal_moves(state, out)
    }
    fn apply(&self, state: &Self::State, mv: &FujisanMove) -> Self::State {
        self.0.apply(state, mv)
    }
    fn is_goal(&self, state: &Self::State) -> bool {
        self.0.is_goal(state)
    }
    fn key(&self, state: &Self::State) -> u32 {
        self.0.key(state)
    }
}

pub fn legal_moves(board: &FujisanBoard) -> Vec<FujisanMove> {
    let puzzle = FujisanPuzzle::new(board);
    let mut out = Vec::new();
    puzzle.legal_moves(&puzzle.start, &mut out);
    out
}

pub fn apply_move(board: &FujisanBoard, mv: &FujisanMove) -> Result<FujisanBoard> {
    let illegal = |reason: String| Error::IllegalMove {
        game: "fujisan",
        reason,
    };
    if mv.priest >= PRIESTS {
        return Err(illegal(format!("no priest {}", mv.priest)));
    }
    if !legal_moves(board).contains(mv) {
        let from = board.priests[mv.priest];
        let reason = match from {
            _ if mv.to.0 >= ROWS || mv.to.1 >= COLUMNS => "destination off the board".to_string(),
            _ if board.occupancy() & 1 << Spot::Board { row: mv.to.0, col: mv.to.1 }.index() != 0 => {
                "destination occupied".to_string()
            }
            Spot::Board { col, .. } if is_summit(col) && mv.to.1 != col => {
                "a priest on the summit may only move up or down".to_string()
            }
            Spot::Ground { .. } if matches!(from, Spot::Ground { row, .. } if row != mv.to.0) => {
                "a priest on the ground must first land on the mountain in its row".to_string()
            }
            _ => "space value does not match the distance travelled".to_string(),
        };
        return Err(illegal(reason));
    }
    let mut next = board.clone();
    next.priests[mv.priest] = Spot::Board {
        row: mv.to.0,
        col: mv.to.1,
    };
    Ok(next)
}

pub fn is_solved(board: &FujisanBoard) -> bool {
    board.priests.iter().all(|p| p.on_summit())
}

/// Empty summit spaces: an admissible lower bound on the moves remaining.
pub fn summit_heuristic(board: &FujisanBoard) -> u32 {
    summit_gap(board.priests.iter().copied())
}

pub fn generate(algorithm: FujisanAlgorithm, seed: u64) -> Result<FujisanBoard> {
    let mut rng = rng_from_seed(seed);
    let mut values = [[0u8; COLUMNS]; ROWS];
    match algorithm {
        FujisanAlgorithm::Shuffled => fill_shuffled(&mut values, &mut rng),
        FujisanAlgorithm::ShuffledUniqueSteps => {
            let mut attempts = 0;
            loop {
                fill_shuffled(&mut values, &mut rng);
                if unique_steps(&values) {
                    break;
                }
                attempts += 1;
                if attempts == REJECTION_LIMIT {
                    return Err(Error::RejectionLimit(attempts));
                }
            }
        }
        FujisanAlgorithm::Piecepack => {
            let mut suits: Vec<Vec<u8>> = (0..4)
                .map(|_| {
                    let mut coins: Vec<u8> = (0..=MAX_VALUE).collect();
                    coins.shuffle(&mut rng);
                    coins
                })
                .collect();
            // Right to left, two coins per column, suits taken in turn.
            for (j, col) in (0..COLUMNS).rev().enumerate() {
                let suit = &mut suits[j % 4];
                values[0][col] = suit.pop().expect("six coins per suit");
                values[1][col] = suit.pop().expect("six coins per suit");
            }
        }
        FujisanAlgorithm::EngravedTiles => {
            let mut tiles = engraved_tile_set();
            tiles.shuffle(&mut rng);
            let mut drawn = tiles.into_iter();
            let orient = |(a, b): (u8, u8), rng: &mut crate::rng::GameRng| {
                if a != b && rng.random_bool(0.5) {
                    (b, a)
                } else {
                    (a, b)
                }
            };
            for col in [0, 1, 2, 3, 8, 9, 10, 11] {
                let (lo, hi) = orient(drawn.next().expect("20 tiles"), &mut rng);
                values[0][col] = lo;
                values[1][col] = hi;
            }
            // Top tiles show both columns, the pair repeated diagonally.
            for col in [4, 6] {
                let (lo, hi) = orient(drawn.next().expect("20 tiles"), &mut rng);
                values[0][col] = lo;
                values[1][col] = hi;
                values[0][col + 1] = hi;
                values[1][col + 1] = lo;
            }
        }
        FujisanAlgorithm::Dominoes => {
            let mut set = domino_set();
            set.shuffle(&mut rng);
            for (col, &(a, b)) in set.iter().take(COLUMNS).enumerate() {
                let (lo, hi) = if rng.random_bool(0.5) { (b, a) } else { (a, b) };
                values[0][col] = lo;
                values[1][col] = hi;
            }
        }
    }
    FujisanBoard::new(values)
}

fn fill_shuffled(values: &mut [[u8; COLUMNS]; ROWS], rng: &mut crate::rng::GameRng) {
    let mut coins: Vec<u8> = (0..=MAX_VALUE).flat_map(|v| [v; 4]).collect();
    coins.shuffle(rng);
    for (i, v) in coins.into_iter().enumerate() {
        values[i / COLUMNS][i % COLUMNS] = v;
    }
}

/// No doubles, and no unordered pair of values repeated across columns.
fn unique_steps(values: &[[u8; COLUMNS]; ROWS]) -> bool {
    let mut seen = [false; 36];
    (0..COLUMNS).all(|c| {
        let (a, b) = (values[0][c], values[1][c]);
        if a == b {
            return false;
        }
        let code = (a.min(b) * 6 + a.max(b)) as usize;
        !std::mem::replace(&mut seen[code], true)
    })
}

/// Every pair `a ≤ b` of values 0–5 except `{0,0}`: 20 tiles.
pub fn engraved_tile_set() -> Vec<(u8, u8)> {
    (0..=MAX_VALUE)
        .flat_map(|a| (a..=MAX_VALUE).map(move |b| (a, b)))
        .filter(|&p| p != (0, 0))
        .collect()
}

/// Every pair `a < b` of values 0–5: a double-six set without sixes or doubles.
pub fn domino_set() -> Vec<(u8, u8)> {
    (0..=MAX_VALUE)
        .flat_map(|a| (a + 1..=MAX_VALUE).map(move |b| (a, b)))
        .collect()
}

/// Fraction of ordered column pairs `(B, A)` where some space of column `A`
/// has value `|A - B|`, i.e. a move from `B` to `A` on an empty board.
pub fn connectivity(board: &FujisanBoard) -> f64 {
    let mut connected = 0;
    for a in 0..COLUMNS {
        for b in 0..COLUMNS {
            let d = a.abs_diff(b);
            if d != 0 && (0..ROWS).any(|r| board.values[r][a] as usize == d) {
                connected += 1;
            }
        }
    }
    connected as f64 / (COLUMNS * (COLUMNS - 1)) as f64
}

/// Moves along `path` that leave a priest farther from the summit than it
/// started. Vertical moves never count.
pub fn count_counterintuitive(board: &FujisanBoard, path: &[FujisanMove]) -> Result<usize> {
    let mut current = board.clone();
    let mut count = 0;
    for mv in path {
        let from = current.priests.get(mv.priest).copied();
        current = apply_move(&current, mv)?;
        let to = current.priests[mv.priest];
        if from.is_some_and(|f| to.summit_distance() > f.summit_distance()) {
            count += 1;
        }
    }
    Ok(count)
}

/// Minimum solution length, with the fewest counter-intuitive moves over all
/// solutions of that length. `None` when the board is unsolvable.
pub fn fewest_counterintuitive(board: &FujisanBoard) -> Option<(usize, usize)> {
    let puzzle = FujisanPuzzle::new(board);
    let start = puzzle.initial_state();
    if puzzle.is_goal(&start) {
        return Some((0, 0));
    }
    // Layered BFS over occupancies; each entry keeps the fewest
    // counter-intuitive moves on any shortest route to it.
    let mut seen: FxHashSet<u32> = FxHashSet::default();
    seen.insert(puzzle.key(&start));
    let mut layer = vec![(start, 0usize)];
    let mut moves = Vec::new();
    for depth in 1.. {
        if layer.is_empty() {
            return None;
        }
        let mut next: FxHashMap<u32, ([u8; PRIESTS], usize)> = FxHashMap::default();
        for (state, ci) in &layer {
            moves.clear();
            puzzle.legal_moves(state, &mut moves);
            for mv in &moves {
                let to = puzzle.apply(state, mv);
                let key = puzzle.key(&to);
                if seen.contains(&key) {
                    continue;
                }
                let before = Spot::from_index(state[mv.priest] as usize).summit_distance();
                let after = Spot::from_index(to[mv.priest] as usize).summit_distance();
                let ci = ci + (after > before) as usize;
                next.entry(key)
                    .and_modify(|e| e.1 = e.1.min(ci))
                    .or_insert((to, ci));
            }
        }
        let goal = next
            .values()
            .filter(|(s, _)| puzzle.is_goal(s))
            .map(|&(_, ci)| ci)
            .min();
        if let Some(ci) = goal {
            return Some((depth, ci));
        }
        seen.extend(next.keys());
        layer = next.into_values().collect();
    }
    unreachable!()
}
