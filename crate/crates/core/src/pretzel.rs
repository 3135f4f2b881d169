//! Pretzel solitaire, a Montana-family patience with no redeals.
//!
//! A `(k, n)` deck of `k` suits and `n` ranks is dealt into a `k × n` grid.
//! The aces are then moved to an implicit column on the left, one per row in
//! a fixed suit order, leaving `k` holes. A card may move into a hole only if
//! it is the same suit and one rank above the card immediately to the hole's
//! left. The goal is every row in ascending order of its ace's suit, with the
//! holes in the last column.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::rng::rng_from_seed;
use crate::search::SearchProblem;

pub const MAX_SUITS: usize = 8;
pub const MAX_RANKS: usize = 13;
pub const MAX_CELLS: usize = 52;

const SUIT_LETTERS: [char; MAX_SUITS] = ['S', 'H', 'D', 'C', 'W', 'X', 'Y', 'Z'];
const HOLE: u8 = u8::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PretzelParams {
    pub k: usize,
    pub n: usize,
}

impl PretzelParams {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        let p = PretzelParams { k, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_SUITS).contains(&self.k) {
            return Err(Error::InvalidParams(format!("suits must be in 1..={MAX_SUITS}")));
        }
        if !(2..=MAX_RANKS).contains(&self.n) {
            return Err(Error::InvalidParams(format!("ranks must be in 2..={MAX_RANKS}")));
        }
        if self.k * self.n > MAX_CELLS {
            return Err(Error::InvalidParams(format!("at most {MAX_CELLS} cards")));
        }
        Ok(())
    }

    pub fn cells(&self) -> usize {
        self.k * self.n
    }

    fn code(&self, card: Card) -> u8 {
        card.suit * (self.n as u8 - 1) + card.rank - 2
    }

    fn card(&self, code: u8) -> Card {
        let per = self.n as u8 - 1;
        Card {
            suit: code / per,
            rank: code % per + 2,
        }
    }
}

impl fmt::Display for PretzelParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.k, self.n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PretzelAlgorithm {
    Shuffled,
    SequentialSuits,
    BandedSuits,
}

impl PretzelAlgorithm {
    pub const ALL: [PretzelAlgorithm; 3] = [
        PretzelAlgorithm::Shuffled,
        PretzelAlgorithm::SequentialSuits,
        PretzelAlgorithm::BandedSuits,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            PretzelAlgorithm::Shuffled => "shuffled",
            PretzelAlgorithm::SequentialSuits => "sequential-suits",
            PretzelAlgorithm::BandedSuits => "banded-suits",
        }
    }
}

impl FromStr for PretzelAlgorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown pretzel algorithm '{s}'")))
    }
}

/// Rank 1 is the ace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Card {
    pub suit: u8,
    pub rank: u8,
}

impl Card {
    pub fn new(suit: u8, rank: u8) -> Self {
        Card { suit, rank }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.rank, SUIT_LETTERS[self.suit as usize])
    }
}

impl FromStr for Card {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let suit_ch = s.chars().last().ok_or("empty card")?;
        let suit = SUIT_LETTERS
            .iter()
            .position(|&c| c == suit_ch)
            .ok_or_else(|| format!("unknown suit '{suit_ch}'"))?;
        let rank: u8 = s[..s.len() - suit_ch.len_utf8()]
            .parse()
            .map_err(|_| format!("bad rank in '{s}'"))?;
        Ok(Card::new(suit as u8, rank))
    }
}

pub type Coord = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PretzelMove {
    pub from: Coord,
    pub to: Coord,
}

impl fmt::Display for PretzelMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}>{},{}", self.from.0, self.from.1, self.to.0, self.to.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PretzelLayout {
    params: PretzelParams,
    grid: Vec<Option<Card>>,
    suit_order: Vec<u8>,
}

impl PretzelLayout {
    /// Validates a layout: `k` holes, no aces, each non-ace card exactly once.
    pub fn new(params: PretzelParams, grid: Vec<Option<Card>>, suit_order: Vec<u8>) -> Result<Self> {
        params.validate()?;
        let bad = |m: String| Err(Error::InvalidParams(m));
        if grid.len() != params.cells() {
            return bad(format!("expected {} cells, got {}", params.cells(), grid.len()));
        }
        let mut order = suit_order.clone();
        order.sort_unstable();
        if order != (0..params.k as u8).collect::<Vec<_>>() {
            return bad("suit order must be a permutation of the suits".into());
        }
        let mut seen = vec![false; params.k * (params.n - 1)];
        for card in grid.iter().flatten() {
            if card.suit as usize >= params.k || card.rank as usize > params.n || card.rank < 1 {
                return bad(format!("card {card} outside the deck"));
            }
            if card.rank == 1 {
                return bad("aces belong in the ace column".into());
            }
            let code = params.code(*card) as usize;
            if std::mem::replace(&mut seen[code], true) {
                return bad(format!("card {card} appears twice"));
            }
        }
        let holes = grid.iter().filter(|c| c.is_none()).count();
        if holes != params.k {
            return bad(format!("expected {} holes, found {holes}", params.k));
        }
        Ok(PretzelLayout {
            params,
            grid,
            suit_order,
        })
    }

    /// Removes the aces from a full row-major deal, using suit order `0..k`.
    pub fn from_deal(params: PretzelParams, deal: &[Card]) -> Result<Self> {
        let grid = deal
            .iter()
            .map(|&c| (c.rank != 1).then_some(c))
            .collect();
        Self::new(params, grid, (0..params.k as u8).collect())
    }

    pub fn params(&self) -> PretzelParams {
        self.params
    }

    pub fn get(&self, (r, c): Coord) -> Option<Card> {
        self.grid[r * self.params.n + c]
    }

    pub fn grid(&self) -> &[Option<Card>] {
        &self.grid
    }

    pub fn suit_order(&self) -> &[u8] {
        &self.suit_order
    }

    pub fn find(&self, card: Card) -> Option<Coord> {
        self.grid
            .iter()
            .position(|&c| c == Some(card))
            .map(|i| (i / self.params.n, i % self.params.n))
    }

    pub fn holes(&self) -> usize {
        self.grid.iter().filter(|c| c.is_none()).count()
    }

    /// Goal cell of a card with rank ≥ 2.
    pub fn goal_of(&self, card: Card) -> Coord {
        let row = self
            .suit_order
            .iter()
            .position(|&s| s == card.suit)
            .expect("suit present in suit order");
        (row, card.rank as usize - 2)
    }

    /// The card that may enter the hole at `(r, c)`, if any.
    fn wanted(&self, (r, c): Coord) -> Option<Card> {
        if c == 0 {
            return Some(Card::new(self.suit_order[r], 2));
        }
        match self.get((r, c - 1)) {
            Some(left) if (left.rank as usize) < self.params.n => Some(Card::new(left.suit, left.rank + 1)),
            _ => None,
        }
    }
}

impl fmt::Display for PretzelLayout {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pretzel {} {}", self.params.k, self.params.n)?;
        for row in self.grid.chunks(self.params.n) {
            let tokens: Vec<String> = row
                .iter()
                .map(|c| c.map_or_else(|| "--".to_string(), |c| c.to_string()))
                .collect();
            writeln!(f, "{}", tokens.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for PretzelLayout {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 3 || fields[0] != "pretzel" {
            return Err(parse_err(ln, "expected header 'pretzel k n'"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| parse_err(ln, format!("bad number '{s}'")));
        let params = PretzelParams::new(num(fields[1])?, num(fields[2])?)?;
        let mut grid = Vec::with_capacity(params.cells());
        for _ in 0..params.k {
            let (ln, row) = lines.next().ok_or_else(|| parse_err(ln, "missing grid row"))?;
            let tokens: Vec<&str> = row.split_whitespace().collect();
            if tokens.len() != params.n {
                return Err(parse_err(ln, format!("expected {} tokens", params.n)));
            }
            for t in tokens {
                grid.push(if t == "--" {
                    None
                } else {
                    Some(t.parse::<Card>().map_err(|m| parse_err(ln, m))?)
                });
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content"));
        }
        PretzelLayout::new(params, grid, (0..params.k as u8).collect())
    }
}

/// Fixed-size search state: card code per cell and cell per card code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PretzelState {
    cells: [u8; MAX_CELLS],
    pos: [u8; MAX_CELLS],
}

/// Solver view of a layout.
#[derive(Debug, Clone)]
pub struct PretzelPuzzle {
    params: PretzelParams,
    start: PretzelState,
    /// Card code that belongs in each cell when solved (`HOLE` in the last column).
    goal: [u8; MAX_CELLS],
    /// Code of the rank-2 card of each row's suit.
    row_deuce: [u8; MAX_SUITS],
}

impl PretzelPuzzle {
    pub fn new(layout: &PretzelLayout) -> Self {
        let p = layout.params;
        let mut start = PretzelState {
            cells: [HOLE; MAX_CELLS],
            pos: [HOLE; MAX_CELLS],
        };
        for (i, card) in layout.grid.iter().enumerate() {
            if let Some(card) = card {
                let code = p.code(*card);
                start.cells[i] = code;
                start.pos[code as usize] = i as u8;
            }
        }
        let mut goal = [HOLE; MAX_CELLS];
        let mut row_deuce = [HOLE; MAX_SUITS];
        for (r, &suit) in layout.suit_order.iter().enumerate() {
            row_deuce[r] = p.code(Card::new(suit, 2));
            for c in 0..p.n - 1 {
                goal[r * p.n + c] = p.code(Card::new(suit, c as u8 + 2));
            }
        }
        PretzelPuzzle {
            params: p,
            start,
            goal,
            row_deuce,
        }
    }

    pub fn params(&self) -> PretzelParams {
        self.params
    }

    /// Rebuilds the public layout for a search state.
    pub fn layout(&self, state: &PretzelState) -> PretzelLayout {
        let p = self.params;
        let grid = state.cells[..p.cells()]
            .iter()
            .map(|&code| (code != HOLE).then(|| p.card(code)))
            .collect();
        let order = (0..p.k)
            .map(|r| p.card(self.row_deuce[r]).suit)
            .collect();
        PretzelLayout {
            params: p,
            grid,
            suit_order: order,
        }
    }

    fn coord(&self, i: usize) -> Coord {
        (i / self.params.n, i % self.params.n)
    }
}

impl SearchProblem for PretzelPuzzle {
    type State = PretzelState;
    type Move = PretzelMove;
    type Key = [u64; 6];

    fn initial_state(&self) -> PretzelState {
        self.start
    }

    fn legal_moves(&self, s: &PretzelState, out: &mut Vec<PretzelMove>) {
        let n = self.params.n;
        let per_suit = n as u8 - 1;
        for i in 0..self.params.cells() {
            if s.cells[i] != HOLE {
                continue;
            }
            let c = i % n;
            let wanted = if c == 0 {
                self.row_deuce[i / n]
            } else {
                let left = s.cells[i - 1];
                // Codes run 2..=n within a suit, so the next rank is code + 1
                // unless the left card is the suit's top rank.
                if left == HOLE || left % per_suit == per_suit - 1 {
                    continue;
                }
                left + 1
            };
            out.push(PretzelMove {
                from: self.coord(s.pos[wanted as usize] as usize),
                to: self.coord(i),
            });
        }
    }

    fn apply(&self, s: &PretzelState, mv: &PretzelMove) -> PretzelState {
        let n = self.params.n;
        let from = mv.from.0 * n + mv.from.1;
        let to = mv.to.0 * n + mv.to.1;
        let mut next = *s;
        let code = next.cells[from];
        next.cells[to] = code;
        next.cells[from] = HOLE;
        next.pos[code as usize] = to as u8;
        next
    }

    fn is_goal(&self, s: &PretzelState) -> bool {
        s.cells[..self.params.cells()] == self.goal[..self.params.cells()]
    }

    fn key(&self, s: &PretzelState) -> [u64; 6] {
        // Six bits per cell, ten cells per word; holes map to 63.
        let mut key = [0u64; 6];
        for (i, &code) in s.cells[..self.params.cells()].iter().enumerate() {
            let bits = (code & 0x3f) as u64;
            let word = i / 10;
            key[word] |= bits << ((i % 10) * 6);
        }
        key
    }
}

pub fn legal_moves(layout: &PretzelLayout) -> Vec<PretzelMove> {
    let puzzle = PretzelPuzzle::new(layout);
    let mut out = Vec::new();
    puzzle.legal_moves(&puzzle.start, &mut out);
    out
}

pub fn apply_move(layout: &PretzelLayout, mv: &PretzelMove) -> Result<PretzelLayout> {
    let illegal = |reason: String| Error::IllegalMove {
        game: "pretzel",
        reason,
    };
    let p = layout.params;
    let inside = |(r, c): Coord| r < p.k && c < p.n;
    if !inside(mv.from) || !inside(mv.to) {
        return Err(illegal("cell out of bounds".into()));
    }
    if mv.from == mv.to {
        return Err(illegal("source and destination are the same cell".into()));
    }
    let Some(card) = layout.get(mv.from) else {
        return Err(illegal("source cell is a hole".into()));
    };
    if layout.get(mv.to).is_some() {
        return Err(illegal("destination is not a hole".into()));
    }
    if layout.wanted(mv.to) != Some(card) {
        return Err(illegal(format!(
            "{card} is not one rank above the card left of the hole"
        )));
    }
    let mut next = layout.clone();
    next.grid[mv.to.0 * p.n + mv.to.1] = Some(card);
    next.grid[mv.from.0 * p.n + mv.from.1] = None;
    Ok(next)
}

pub fn is_solved(layout: &PretzelLayout) -> bool {
    let p = layout.params;
    layout.suit_order.iter().enumerate().all(|(r, &suit)| {
        (0..p.n - 1).all(|c| layout.get((r, c)) == Some(Card::new(suit, c as u8 + 2)))
            && layout.get((r, p.n - 1)).is_none()
    })
}

/// The full deal before ace removal, row-major.
pub fn deal(params: PretzelParams, algorithm: PretzelAlgorithm, seed: u64) -> Result<Vec<Card>> {
    params.validate()?;
    let (k, n) = (params.k, params.n);
    let mut rng = rng_from_seed(seed);
    let suit_deck = |s: usize| (1..=n as u8).map(move |r| Card::new(s as u8, r));
    match algorithm {
        PretzelAlgorithm::Shuffled => {
            let mut deck: Vec<Card> = (0..k).flat_map(suit_deck).collect();
            deck.shuffle(&mut rng);
            Ok(deck)
        }
        PretzelAlgorithm::SequentialSuits | PretzelAlgorithm::BandedSuits => {
            let decks: Vec<Vec<Card>> = (0..k)
                .map(|s| {
                    let mut d: Vec<Card> = suit_deck(s).collect();
                    d.shuffle(&mut rng);
                    d
                })
                .collect();
            let mut grid = vec![Card::new(0, 0); k * n];
            if algorithm == PretzelAlgorithm::SequentialSuits {
                for (i, slot) in grid.iter_mut().enumerate() {
                    *slot = decks[i % k][i / k];
                }
            } else {
                // Column-major, exhausting each suit deck in turn.
                for (j, card) in decks.into_iter().flatten().enumerate() {
                    grid[(j % k) * n + j / k] = card;
                }
            }
            Ok(grid)
        }
    }
}

pub fn generate(params: PretzelParams, algorithm: PretzelAlgorithm, seed: u64) -> Result<PretzelLayout> {
    PretzelLayout::from_deal(params, &deal(params, algorithm, seed)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Blockades {
    pub ducking_crab: bool,
    pub duelling_deuces: bool,
}

/// Suits showing a dealt Ducking Crab: the suit's 2 sits in the last column
/// while its 3 occupies the 2's goal cell.
pub fn ducking_crab_suits(layout: &PretzelLayout) -> Vec<u8> {
    let n = layout.params.n;
    layout
        .suit_order
        .iter()
        .copied()
        .filter(|&s| {
            let two = Card::new(s, 2);
            n >= 3
                && layout.find(two).is_some_and(|(_, c)| c == n - 1)
                && layout.get(layout.goal_of(two)) == Some(Card::new(s, 3))
        })
        .collect()
}

/// Suit pairs whose 2s occupy each other's goal cells.
pub fn duelling_deuce_pairs(layout: &PretzelLayout) -> Vec<(u8, u8)> {
    let mut pairs = Vec::new();
    let k = layout.params.k as u8;
    for s in 0..k {
        for u in s + 1..k {
            let (two_s, two_u) = (Card::new(s, 2), Card::new(u, 2));
            if layout.get(layout.goal_of(two_u)) == Some(two_s)
                && layout.get(layout.goal_of(two_s)) == Some(two_u)
            {
                pairs.push((s, u));
            }
        }
    }
    pairs
}

pub fn detect_blockades(layout: &PretzelLayout) -> Blockades {
    Blockades {
        ducking_crab: !ducking_crab_suits(layout).is_empty(),
        duelling_deuces: !duelling_deuce_pairs(layout).is_empty(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{check_solvable, solve_min_length};

    const SPADE: u8 = 0;
    const HEART: u8 = 1;

    /// Holes at (0,0),(1,1); 2♥ at (0,1); 2♠ at (1,0); rows ♠ then ♥.
    fn two_by_two() -> PretzelLayout {
        let params = PretzelParams::new(2, 2).unwrap();
        PretzelLayout::new(
            params,
            vec![None, Some(Card::new(HEART, 2)), Some(Card::new(SPADE, 2)), None],
            vec![SPADE, HEART],
        )
        .unwrap()
    }

    #[test]
    fn two_by_two_has_one_forced_line() {
        let l = two_by_two();
        let moves = legal_moves(&l);
        assert_eq!(moves, vec![PretzelMove { from: (1, 0), to: (0, 0) }]);
        let l2 = apply_move(&l, &moves[0]).unwrap();
        assert_eq!(l2.get((1, 0)), None);
        assert_eq!(l2.holes(), 2);
        let moves2 = legal_moves(&l2);
        assert_eq!(moves2, vec![PretzelMove { from: (0, 1), to: (1, 0) }]);
        let l3 = apply_move(&l2, &moves2[0]).unwrap();
        assert!(is_solved(&l3));
        let r = solve_min_length(&PretzelPuzzle::new(&l)).unwrap();
        assert_eq!(r.min_length, Some(2));
        assert_eq!(r.path.unwrap(), vec![moves[0], moves2[0]]);
    }

    #[test]
    fn holes_without_a_left_card_or_after_top_rank_are_dead() {
        // (1,3): ♠ row; grid [3♠, 2... ] arrangement with holes.
        let params = PretzelParams::new(1, 3).unwrap();
        let l = PretzelLayout::new(params, vec![Some(Card::new(0, 3)), None, Some(Card::new(0, 2))], vec![0]).unwrap();
        // Hole at (0,1) right of 3♠ = top rank: no move.
        assert!(legal_moves(&l).is_empty());
        let params = PretzelParams::new(2, 3).unwrap();
        let l = PretzelLayout::new(
            params,
            vec![
                Some(Card::new(1, 2)), None, None,
                Some(Card::new(0, 2)), Some(Card::new(0, 3)), Some(Card::new(1, 3)),
            ],
            vec![0, 1],
        )
        .unwrap();
        // (0,1) follows 2♥ so wants 3♥; (0,2) follows a hole.
        assert_eq!(legal_moves(&l), vec![PretzelMove { from: (1, 2), to: (0, 1) }]);
    }

    #[test]
    fn illegal_moves_are_rejected() {
        let l = two_by_two();
        assert!(apply_move(&l, &PretzelMove { from: (0, 1), to: (0, 1) }).is_err());
        assert!(apply_move(&l, &PretzelMove { from: (0, 1), to: (0, 0) }).is_err());
        assert!(apply_move(&l, &PretzelMove { from: (0, 0), to: (1, 1) }).is_err());
        assert!(apply_move(&l, &PretzelMove { from: (1, 0), to: (0, 1) }).is_err());
    }

    #[test]
    fn solved_layouts() {
        let params = PretzelParams::new(4, 4).unwrap();
        let mut grid = Vec::new();
        for s in 0..4 {
            for r in 2..=4 {
                grid.push(Some(Card::new(s, r)));
            }
            grid.push(None);
        }
        let solved = PretzelLayout::new(params, grid.clone(), vec![0, 1, 2, 3]).unwrap();
        assert!(is_solved(&solved));
        assert!(check_solvable(&PretzelPuzzle::new(&solved)).unwrap().0);
        grid.swap(2, 3);
        assert!(!is_solved(&PretzelLayout::new(params, grid, vec![0, 1, 2, 3]).unwrap()));
    }

    #[test]
    fn deals_are_deterministic_with_aces_extracted() {
        for algo in PretzelAlgorithm::ALL {
            for seed in 0..20 {
                let params = PretzelParams::new(4, 6).unwrap();
                let a = generate(params, algo, seed).unwrap();
                assert_eq!(a, generate(params, algo, seed).unwrap());
                assert_eq!(a.holes(), 4);
                assert!(a.grid().iter().flatten().all(|c| c.rank != 1));
            }
        }
    }

    #[test]
    fn banded_four_by_eight_columns() {
        let params = PretzelParams::new(4, 8).unwrap();
        for seed in 0..20 {
            let d = deal(params, PretzelAlgorithm::BandedSuits, seed).unwrap();
            for (i, card) in d.iter().enumerate() {
                assert_eq!(card.suit as usize, (i % 8) / 2);
            }
        }
    }

    #[test]
    fn sequential_suit_pattern() {
        let params = PretzelParams::new(4, 4).unwrap();
        for seed in 0..20 {
            let seq = deal(params, PretzelAlgorithm::SequentialSuits, seed).unwrap();
            let band = deal(params, PretzelAlgorithm::BandedSuits, seed).unwrap();
            for (i, card) in seq.iter().enumerate() {
                assert_eq!(card.suit as usize, i % 4);
            }
            let pattern = |d: &[Card]| d.iter().map(|c| c.suit).collect::<Vec<_>>();
            assert_eq!(pattern(&seq), pattern(&band));
        }
    }

    #[test]
    fn blockade_shapes() {
        // (4,3): 3♠ at (0,0), 2♠ at (2,2); likewise 3♦ at (2,0), 2♦ at (0,2).
        let params = PretzelParams::new(4, 3).unwrap();
        let c = |s, r| Some(Card::new(s, r));
        let grid = vec![
            c(0, 3), c(1, 2), c(2, 2),
            c(3, 2), None, c(1, 3),
            c(2, 3), None, c(0, 2),
            None, c(3, 3), None,
        ];
        let l = PretzelLayout::new(params, grid, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(ducking_crab_suits(&l), vec![0, 2]);
        assert!(!check_solvable(&PretzelPuzzle::new(&l)).unwrap().0);

        // 2♥ on the clubs goal and 2♣ on the hearts goal.
        let grid = vec![
            c(0, 2), c(0, 3), None,
            c(3, 2), c(1, 3), None,
            c(2, 2), c(2, 3), None,
            c(1, 2), c(3, 3), None,
        ];
        let l = PretzelLayout::new(params, grid, vec![0, 1, 2, 3]).unwrap();
        assert_eq!(duelling_deuce_pairs(&l), vec![(1, 3)]);
        assert!(detect_blockades(&l).duelling_deuces);
        assert!(!check_solvable(&PretzelPuzzle::new(&l)).unwrap().0);
    }

    #[test]
    fn banded_deals_never_show_named_blockades() {
        for n in 2..=9 {
            let params = PretzelParams::new(4, n).unwrap();
            for seed in 0..200 {
                let l = generate(params, PretzelAlgorithm::BandedSuits, seed).unwrap();
                assert_eq!(detect_blockades(&l), Blockades::default());
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let l = generate(PretzelParams::new(4, 10).unwrap(), PretzelAlgorithm::Shuffled, 3).unwrap();
        let text = l.to_string();
        assert!(text.starts_with("pretzel 4 10\n"));
        assert_eq!(text.parse::<PretzelLayout>().unwrap(), l);
        assert!("pretzel 2 2\n-- 2H\n2S 2S\n".parse::<PretzelLayout>().is_err());
    }

    #[test]
    fn search_state_round_trips_to_layout() {
        let l = generate(PretzelParams::new(3, 5).unwrap(), PretzelAlgorithm::Shuffled, 8).unwrap();
        let p = PretzelPuzzle::new(&l);
        assert_eq!(p.layout(&p.initial_state()), l);
    }
}
