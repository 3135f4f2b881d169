//! BoxOff: remove same-colored pairs of squares from an `h × w` grid.
//!
//! Two squares of one color may be removed together when every other square
//! inside their bounding box has already been removed. Orthogonally adjacent
//! pairs satisfy this vacuously.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{parse_err, Error, Result};
use crate::rng::rng_from_seed;
use crate::search::SearchProblem;

/// Bitmask over cells, so grids are limited to 64 squares.
pub const MAX_CELLS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxOffParams {
    pub h: usize,
    pub w: usize,
    pub c: usize,
}

impl BoxOffParams {
    pub fn new(h: usize, w: usize, c: usize) -> Result<Self> {
        let p = BoxOffParams { h, w, c };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let cells = self.h * self.w;
        if self.h == 0 || self.w == 0 || self.c == 0 {
            return Err(Error::InvalidParams("h, w and c must be positive".into()));
        }
        if cells > MAX_CELLS {
            return Err(Error::InvalidParams(format!(
                "{}x{} grid exceeds {MAX_CELLS} cells",
                self.h, self.w
            )));
        }
        if self.c > 26 {
            return Err(Error::InvalidParams("at most 26 colors".into()));
        }
        if !cells.is_multiple_of(self.c) {
            return Err(Error::InvalidParams(format!(
                "{cells} cells not divisible by {} colors",
                self.c
            )));
        }
        Ok(())
    }

    pub fn cells(&self) -> usize {
        self.h * self.w
    }

    pub fn per_color(&self) -> usize {
        self.cells() / self.c
    }

    /// Number of L-tiles covering the grid.
    pub fn tile_count(&self) -> usize {
        self.cells() / 3
    }

    fn block_layout(&self) -> Option<BlockLayout> {
        if self.h.is_multiple_of(2) && self.w.is_multiple_of(3) {
            Some(BlockLayout::Wide)
        } else if self.h.is_multiple_of(3) && self.w.is_multiple_of(2) {
            Some(BlockLayout::Tall)
        } else {
            None
        }
    }
}

impl fmt::Display for BoxOffParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.h, self.w, self.c)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoxOffAlgorithm {
    Shuffled,
    LTiles,
    LTiles3Unique,
}

impl BoxOffAlgorithm {
    pub const ALL: [BoxOffAlgorithm; 3] = [
        BoxOffAlgorithm::Shuffled,
        BoxOffAlgorithm::LTiles,
        BoxOffAlgorithm::LTiles3Unique,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            BoxOffAlgorithm::Shuffled => "shuffled",
            BoxOffAlgorithm::LTiles => "l-tiles",
            BoxOffAlgorithm::LTiles3Unique => "l-tiles-3unique",
        }
    }
}

impl FromStr for BoxOffAlgorithm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParams(format!("unknown boxoff algorithm '{s}'")))
    }
}

pub type Coord = (usize, usize);

/// An unordered pair of cells, stored with `a` before `b` in row-major order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxOffMove {
    pub a: Coord,
    pub b: Coord,
}

impl BoxOffMove {
    pub fn new(a: Coord, b: Coord) -> Self {
        if a <= b {
            BoxOffMove { a, b }
        } else {
            BoxOffMove { a: b, b: a }
        }
    }
}

impl fmt::Display for BoxOffMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}-{},{}", self.a.0, self.a.1, self.b.0, self.b.1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoxOffGrid {
    params: BoxOffParams,
    cells: Vec<Option<u8>>,
}

impl BoxOffGrid {
    /// Builds a grid from row-major cells. Colors must lie in `[0, c)`.
    pub fn from_cells(params: BoxOffParams, cells: Vec<Option<u8>>) -> Result<Self> {
        params.validate()?;
        if cells.len() != params.cells() {
            return Err(Error::InvalidParams(format!(
                "expected {} cells, got {}",
                params.cells(),
                cells.len()
            )));
        }
        if let Some(bad) = cells.iter().flatten().find(|&&v| v as usize >= params.c) {
            return Err(Error::InvalidParams(format!("color {bad} out of range")));
        }
        Ok(BoxOffGrid { params, cells })
    }

    /// Fully occupied grid from rows of color ids.
    pub fn from_rows(c: usize, rows: &[&[u8]]) -> Result<Self> {
        let h = rows.len();
        let w = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != w) {
            return Err(Error::InvalidParams("ragged rows".into()));
        }
        let params = BoxOffParams { h, w, c };
        let cells = rows.iter().flat_map(|r| r.iter().map(|&v| Some(v))).collect();
        Self::from_cells(params, cells)
    }

    pub fn params(&self) -> BoxOffParams {
        self.params
    }

    pub fn get(&self, (r, c): Coord) -> Option<u8> {
        self.cells[r * self.params.w + c]
    }

    pub fn cells(&self) -> &[Option<u8>] {
        &self.cells
    }

    pub fn occupied(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    pub fn color_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.params.c];
        for v in self.cells.iter().flatten() {
            counts[*v as usize] += 1;
        }
        counts
    }

    fn in_bounds(&self, (r, c): Coord) -> bool {
        r < self.params.h && c < self.params.w
    }

    fn mask(&self) -> u64 {
        self.cells
            .iter()
            .enumerate()
            .filter(|(_, v)| v.is_some())
            .fold(0, |m, (i, _)| m | 1 << i)
    }
}

impl fmt::Display for BoxOffGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = self.params;
        writeln!(f, "boxoff {} {} {}", p.h, p.w, p.c)?;
        for row in self.cells.chunks(p.w) {
            let line: String = row
                .iter()
                .map(|v| v.map_or('.', |c| (b'A' + c) as char))
                .collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

impl FromStr for BoxOffGrid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, header) = lines.next().ok_or_else(|| parse_err(1, "empty input"))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 4 || fields[0] != "boxoff" {
            return Err(parse_err(ln, "expected header 'boxoff h w c'"));
        }
        let num = |s: &str| s.parse::<usize>().map_err(|_| parse_err(ln, format!("bad number '{s}'")));
        let params = BoxOffParams::new(num(fields[1])?, num(fields[2])?, num(fields[3])?)?;
        let mut cells = Vec::with_capacity(params.cells());
        for _ in 0..params.h {
            let (ln, row) = lines.next().ok_or_else(|| parse_err(ln, "missing grid row"))?;
            if row.chars().count() != params.w {
                return Err(parse_err(ln, format!("expected {} cells", params.w)));
            }
            for ch in row.chars() {
                cells.push(match ch {
                    '.' => None,
                    'A'..='Z' if ((ch as u8 - b'A') as usize) < params.c => Some(ch as u8 - b'A'),
                    _ => return Err(parse_err(ln, format!("bad cell '{ch}'"))),
                });
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing content"));
        }
        BoxOffGrid::from_cells(params, cells)
    }
}

/// Interior mask of the bounding box of cells `a` and `b`, excluding both.
fn box_interior(w: usize, a: usize, b: usize) -> u64 {
    let (ra, ca) = (a / w, a % w);
    let (rb, cb) = (b / w, b % w);
    let mut m = 0u64;
    for r in ra.min(rb)..=ra.max(rb) {
        for c in ca.min(cb)..=ca.max(cb) {
            m |= 1 << (r * w + c);
        }
    }
    m & !(1 << a) & !(1 << b)
}

/// Solver view of a grid: the state is the bitmask of remaining squares and
/// every same-colored pair carries its precomputed box interior.
#[derive(Debug, Clone)]
pub struct BoxOffPuzzle {
    w: usize,
    start: u64,
    pairs: Vec<CandidatePair>,
}

#[derive(Debug, Clone, Copy)]
struct CandidatePair {
    both: u64,
    interior: u64,
    a: u8,
    b: u8,
}

impl BoxOffPuzzle {
    pub fn new(grid: &BoxOffGrid) -> Self {
        let w = grid.params.w;
        let n = grid.cells.len();
        let mut pairs = Vec::new();
        for a in 0..n {
            let Some(ca) = grid.cells[a] else { continue };
            for b in a + 1..n {
                if grid.cells[b] == Some(ca) {
                    pairs.push(CandidatePair {
                        both: 1 << a | 1 << b,
                        interior: box_interior(w, a, b),
                        a: a as u8,
                        b: b as u8,
                    });
                }
            }
        }
        BoxOffPuzzle {
            w,
            start: grid.mask(),
            pairs,
        }
    }

    fn coord(&self, i: u8) -> Coord {
        (i as usize / self.w, i as usize % self.w)
    }
}

impl SearchProblem for BoxOffPuzzle {
    type State = u64;
    type Move = BoxOffMove;
    type Key = u64;

    fn initial_state(&self) -> u64 {
        self.start
    }

    fn legal_moves(&self, state: &u64, out: &mut Vec<BoxOffMove>) {
        for p in &self.pairs {
            if state & p.both == p.both && state & p.interior == 0 {
                out.push(BoxOffMove {
                    a: self.coord(p.a),
                    b: self.coord(p.b),
                });
            }
        }
    }

    fn apply(&self, state: &u64, mv: &BoxOffMove) -> u64 {
        let bit = |(r, c): Coord| 1u64 << (r * self.w + c);
        state & !bit(mv.a) & !bit(mv.b)
    }

    fn is_goal(&self, state: &u64) -> bool {
        *state == 0
    }

    fn key(&self, state: &u64) -> u64 {
        *state
    }
}

pub fn legal_moves(grid: &BoxOffGrid) -> Vec<BoxOffMove> {
    let puzzle = BoxOffPuzzle::new(grid);
    let mut out = Vec::new();
    puzzle.legal_moves(&puzzle.start, &mut out);
    out
}

pub fn apply_move(grid: &BoxOffGrid, mv: &BoxOffMove) -> Result<BoxOffGrid> {
    let illegal = |reason: String| Error::IllegalMove {
        game: "boxoff",
        reason,
    };
    let (a, b) = (mv.a, mv.b);
    if !grid.in_bounds(a) || !grid.in_bounds(b) {
        return Err(illegal("cell out of bounds".into()));
    }
    if a == b {
        return Err(illegal("the two cells must be distinct".into()));
    }
    let (Some(ca), Some(cb)) = (grid.get(a), grid.get(b)) else {
        return Err(illegal("cell already eliminated".into()));
    };
    if ca != cb {
        return Err(illegal(format!("colors differ ({ca} vs {cb})")));
    }
    let w = grid.params.w;
    let (ia, ib) = (a.0 * w + a.1, b.0 * w + b.1);
    if grid.mask() & box_interior(w, ia, ib) != 0 {
        return Err(illegal(
            "not adjacent and the circumscribing box still holds squares".into(),
        ));
    }
    let mut next = grid.clone();
    next.cells[ia] = None;
    next.cells[ib] = None;
    Ok(next)
}

pub fn is_solved(grid: &BoxOffGrid) -> bool {
    grid.cells.iter().all(Option::is_none)
}

/// One L-tromino of a 2×3 block. Colors are listed by position: the corner,
/// the arm along the block's long edge, and the arm along its short edge.
/// Flipping mirrors the tile through the corner, swapping the two arms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LTile {
    pub corner: u8,
    pub long_arm: u8,
    pub short_arm: u8,
    pub flipped: bool,
}

impl LTile {
    /// Two squares of `s` (corner and long arm) and one of `d`.
    pub fn entangled(s: u8, d: u8) -> Self {
        LTile {
            corner: s,
            long_arm: s,
            short_arm: d,
            flipped: false,
        }
    }

    /// Colors as placed: (corner, long-edge cell, short-edge cell).
    pub fn placed(&self) -> (u8, u8, u8) {
        if self.flipped {
            (self.corner, self.short_arm, self.long_arm)
        } else {
            (self.corner, self.long_arm, self.short_arm)
        }
    }

    pub fn s_color(&self) -> Option<u8> {
        [self.long_arm, self.short_arm]
            .into_iter()
            .find(|&c| c == self.corner)
    }

    pub fn d_color(&self) -> Option<u8> {
        match self.s_color() {
            Some(s) if self.long_arm == s => Some(self.short_arm),
            Some(_) => Some(self.long_arm),
            None => None,
        }
    }
}

/// The tile set for a grid: `t = hw/3` tiles with `t = 2c`.
///
/// Entangled tiles take each color as S twice, with D the next color around
/// the cycle. The `unique3` control set gives tile `j` the three colors
/// `j, j+1, j+2 (mod c)`.
pub fn build_ltile_set(params: BoxOffParams, unique3: bool) -> Result<Vec<LTile>> {
    params.validate()?;
    let t = params.tile_count();
    if !params.cells().is_multiple_of(3) || t != 2 * params.c {
        return Err(Error::InvalidParams(format!(
            "L-tiles need hw/3 = 2c, got hw/3 = {t} with c = {}",
            params.c
        )));
    }
    if unique3 && params.c < 3 {
        return Err(Error::InvalidParams("three unique colors need c >= 3".into()));
    }
    let c = params.c as u8;
    let tiles = (0..t as u8)
        .map(|j| {
            if unique3 {
                LTile {
                    corner: j % c,
                    long_arm: (j + 1) % c,
                    short_arm: (j + 2) % c,
                    flipped: false,
                }
            } else {
                let s = j / 2;
                LTile::entangled(s, (s + 1) % c)
            }
        })
        .collect();
    Ok(tiles)
}

#[derive(Debug, Clone, Copy)]
enum BlockLayout {
    /// 2 rows × 3 columns.
    Wide,
    /// 3 rows × 2 columns.
    Tall,
}

/// Cell offsets (corner, long arm, short arm) of the two tiles in a 2×3
/// block. The second tile is the first rotated 180°:
///
/// ```text
/// 0 0 1
/// 0 1 1
/// ```
const WIDE_SLOTS: [[Coord; 3]; 2] = [[(0, 0), (0, 1), (1, 0)], [(1, 2), (1, 1), (0, 2)]];

/// Lays tiles into consecutive blocks in row-major block order.
pub fn place_ltiles(params: BoxOffParams, tiles: &[LTile]) -> Result<BoxOffGrid> {
    let layout = params.block_layout().ok_or_else(|| {
        Error::InvalidParams(format!("{}x{} grid cannot be split into 2x3 blocks", params.h, params.w))
    })?;
    if tiles.len() != params.tile_count() {
        return Err(Error::InvalidParams(format!(
            "need {} tiles, got {}",
            params.tile_count(),
            tiles.len()
        )));
    }
    let (bh, bw) = match layout {
        BlockLayout::Wide => (2, 3),
        BlockLayout::Tall => (3, 2),
    };
    let blocks_per_row = params.w / bw;
    let mut cells = vec![None; params.cells()];
    for (i, tile) in tiles.iter().enumerate() {
        let block = i / 2;
        let (r0, c0) = ((block / blocks_per_row) * bh, (block % blocks_per_row) * bw);
        let (corner, long_arm, short_arm) = tile.placed();
        for (&(dr, dc), color) in WIDE_SLOTS[i % 2].iter().zip([corner, long_arm, short_arm]) {
            let (dr, dc) = match layout {
                BlockLayout::Wide => (dr, dc),
                BlockLayout::Tall => (dc, dr),
            };
            cells[(r0 + dr) * params.w + c0 + dc] = Some(color);
        }
    }
    BoxOffGrid::from_cells(params, cells)
}

pub fn generate(params: BoxOffParams, algorithm: BoxOffAlgorithm, seed: u64) -> Result<BoxOffGrid> {
    params.validate()?;
    let mut rng = rng_from_seed(seed);
    match algorithm {
        BoxOffAlgorithm::Shuffled => {
            let mut tokens: Vec<u8> = (0..params.c as u8)
                .flat_map(|c| std::iter::repeat_n(c, params.per_color()))
                .collect();
            tokens.shuffle(&mut rng);
            BoxOffGrid::from_cells(params, tokens.into_iter().map(Some).collect())
        }
        BoxOffAlgorithm::LTiles | BoxOffAlgorithm::LTiles3Unique => {
            let unique3 = algorithm == BoxOffAlgorithm::LTiles3Unique;
            let mut tiles = build_ltile_set(params, unique3)?;
            tiles.shuffle(&mut rng);
            for t in &mut tiles {
                t.flipped = rng.random_bool(0.5);
            }
            place_ltiles(params, &tiles)
        }
    }
}

/// Equal orthogonally adjacent pairs and the total number of such pairs.
pub fn pair_equality_counts(grid: &BoxOffGrid) -> Result<(usize, usize)> {
    if grid.cells.iter().any(Option::is_none) {
        return Err(Error::Metric("pair equality needs a fresh grid without eliminated squares".into()));
    }
    let BoxOffParams { h, w, .. } = grid.params;
    let mut equal = 0;
    for r in 0..h {
        for c in 0..w {
            let v = grid.get((r, c));
            if c + 1 < w && grid.get((r, c + 1)) == v {
                equal += 1;
            }
            if r + 1 < h && grid.get((r + 1, c)) == v {
                equal += 1;
            }
        }
    }
    Ok((equal, h * (w - 1) + w * (h - 1)))
}

pub fn pair_equality(grid: &BoxOffGrid) -> Result<f64> {
    let (equal, total) = pair_equality_counts(grid)?;
    Ok(if total == 0 { 0.0 } else { equal as f64 / total as f64 })
}
