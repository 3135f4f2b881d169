//! A game, its parameters and a setup algorithm, plus the challenges they produce.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::boxoff::{self, BoxOffAlgorithm, BoxOffGrid, BoxOffParams, BoxOffPuzzle};
use crate::error::{Error, Result};
use crate::fujisan::{self, FujisanAlgorithm, FujisanBoard, FujisanPuzzle};
use crate::pretzel::{self, PretzelAlgorithm, PretzelLayout, PretzelParams, PretzelPuzzle};
use crate::search::{self, PlayoutResult, SearchError, SearchLimits, SearchProblem, SolveResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Game {
    BoxOff,
    Pretzel,
    Fujisan,
}

impl Game {
    pub const ALL: [Game; 3] = [Game::BoxOff, Game::Pretzel, Game::Fujisan];

    pub fn name(&self) -> &'static str {
        match self {
            Game::BoxOff => "boxoff",
            Game::Pretzel => "pretzel",
            Game::Fujisan => "fujisan",
        }
    }

    pub fn algorithm_names(&self) -> Vec<&'static str> {
        match self {
            Game::BoxOff => BoxOffAlgorithm::ALL.iter().map(|a| a.name()).collect(),
            Game::Pretzel => PretzelAlgorithm::ALL.iter().map(|a| a.name()).collect(),
            Game::Fujisan => FujisanAlgorithm::ALL.iter().map(|a| a.name()).collect(),
        }
    }
}

impl fmt::Display for Game {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Game {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|g| g.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidParams(format!("unknown game '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "game", rename_all = "lowercase")]
pub enum Generator {
    BoxOff {
        params: BoxOffParams,
        algorithm: BoxOffAlgorithm,
    },
    Pretzel {
        params: PretzelParams,
        algorithm: PretzelAlgorithm,
    },
    Fujisan {
        algorithm: FujisanAlgorithm,
    },
}

impl Generator {
    /// Builds a generator from names; empty `params` selects (4,6,4) BoxOff or (4,4) Pretzel.
    pub fn new(game: Game, algorithm: &str, params: &[usize]) -> Result<Self> {
        let arity = |got: usize, want: usize| {
            if got == want {
                Ok(())
            } else {
                Err(Error::InvalidParams(format!(
                    "{game} takes {want} parameters, got {got}"
                )))
            }
        };
        match game {
            Game::BoxOff => {
                let p = if params.is_empty() { &[4, 6, 4][..] } else { params };
                arity(p.len(), 3)?;
                Ok(Generator::BoxOff {
                    params: BoxOffParams::new(p[0], p[1], p[2])?,
                    algorithm: algorithm.parse()?,
                })
            }
            Game::Pretzel => {
                let p = if params.is_empty() { &[4, 4][..] } else { params };
                arity(p.len(), 2)?;
                Ok(Generator::Pretzel {
                    params: PretzelParams::new(p[0], p[1])?,
                    algorithm: algorithm.parse()?,
                })
            }
            Game::Fujisan => {
                arity(params.len(), 0)?;
                Ok(Generator::Fujisan {
                    algorithm: algorithm.parse()?,
                })
            }
        }
    }

    pub fn game(&self) -> Game {
        match self {
            Generator::BoxOff { .. } => Game::BoxOff,
            Generator::Pretzel { .. } => Game::Pretzel,
            Generator::Fujisan { .. } => Game::Fujisan,
        }
    }

    pub fn algorithm_name(&self) -> &'static str {
        match self {
            Generator::BoxOff { algorithm, .. } => algorithm.name(),
            Generator::Pretzel { algorithm, .. } => algorithm.name(),
            Generator::Fujisan { algorithm } => algorithm.name(),
        }
    }

    /// Parameter tuple as text, e.g. `(4,6,4)`; empty for Fujisan.
    pub fn params_label(&self) -> String {
        match self {
            Generator::BoxOff { params, .. } => params.to_string(),
            Generator::Pretzel { params, .. } => params.to_string(),
            Generator::Fujisan { .. } => String::new(),
        }
    }

    /// Seed stream name: `game/algorithm/params`.
    pub fn stream(&self) -> String {
        format!(
            "{}/{}/{}",
            self.game(),
            self.algorithm_name(),
            self.params_label()
        )
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Generator::BoxOff { params, algorithm } => {
                params.validate()?;
                if *algorithm != BoxOffAlgorithm::Shuffled {
                    boxoff::build_ltile_set(*params, *algorithm == BoxOffAlgorithm::LTiles3Unique)?;
                }
                Ok(())
            }
            Generator::Pretzel { params, .. } => params.validate(),
            Generator::Fujisan { .. } => Ok(()),
        }
    }

    pub fn generate(&self, seed: u64) -> Result<Challenge> {
        Ok(match *self {
            Generator::BoxOff { params, algorithm } => {
                Challenge::BoxOff(boxoff::generate(params, algorithm, seed)?)
            }
            Generator::Pretzel { params, algorithm } => {
                Challenge::Pretzel(pretzel::generate(params, algorithm, seed)?)
            }
            Generator::Fujisan { algorithm } => {
                Challenge::Fujisan(fujisan::generate(algorithm, seed)?)
            }
        })
    }

    /// Random-playout move cap used when a configuration gives none.
    pub fn default_playout_cap(&self) -> usize {
        match self {
            Generator::BoxOff { params, .. } => params.cells() / 2,
            Generator::Pretzel { params, .. } => 20 * params.cells(),
            Generator::Fujisan { .. } => fujisan::COLUMNS * fujisan::ROWS,
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.game(), self.algorithm_name())?;
        let params = self.params_label();
        if !params.is_empty() {
            write!(f, " {params}")?;
        }
        Ok(())
    }
}

/// One generated challenge of any game.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Challenge {
    BoxOff(BoxOffGrid),
    Pretzel(PretzelLayout),
    Fujisan(FujisanBoard),
}

fn render_path<M: ToString>(r: SolveResult<M>) -> SolveResult<String> {
    SolveResult {
        solvable: r.solvable,
        min_length: r.min_length,
        path: r.path.map(|p| p.iter().map(M::to_string).collect()),
        nodes_expanded: r.nodes_expanded,
    }
}

impl Challenge {
    pub fn game(&self) -> Game {
        match self {
            Challenge::BoxOff(_) => Game::BoxOff,
            Challenge::Pretzel(_) => Game::Pretzel,
            Challenge::Fujisan(_) => Game::Fujisan,
        }
    }

    /// Shortest solution, with moves rendered in their text form.
    pub fn solve(&self, limits: SearchLimits) -> Result<SolveResult<String>, SearchError> {
        Ok(match self {
            Challenge::BoxOff(g) => {
                render_path(search::solve_min_length_with(&BoxOffPuzzle::new(g), limits)?)
            }
            Challenge::Pretzel(l) => {
                render_path(search::solve_min_length_with(&PretzelPuzzle::new(l), limits)?)
            }
            Challenge::Fujisan(b) => {
                render_path(search::solve_min_length_with(&FujisanPuzzle::new(b), limits)?)
            }
        })
    }

    pub fn check_solvable(&self, limits: SearchLimits) -> Result<(bool, u64), SearchError> {
        match self {
            Challenge::BoxOff(g) => search::check_solvable_with(&BoxOffPuzzle::new(g), limits),
            Challenge::Pretzel(l) => search::check_solvable_with(&PretzelPuzzle::new(l), limits),
            Challenge::Fujisan(b) => search::check_solvable_with(&FujisanPuzzle::new(b), limits),
        }
    }

    pub fn random_playout(&self, seed: u64, cap: usize) -> PlayoutResult {
        fn run<P: SearchProblem>(p: &P, seed: u64, cap: usize) -> PlayoutResult {
            search::random_playout(p, seed, cap)
        }
        match self {
            Challenge::BoxOff(g) => run(&BoxOffPuzzle::new(g), seed, cap),
            Challenge::Pretzel(l) => run(&PretzelPuzzle::new(l), seed, cap),
            Challenge::Fujisan(b) => run(&FujisanPuzzle::new(b), seed, cap),
        }
    }
}

impl fmt::Display for Challenge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Challenge::BoxOff(g) => g.fmt(f),
            Challenge::Pretzel(l) => l.fmt(f),
            Challenge::Fujisan(b) => b.fmt(f),
        }
    }
}

impl FromStr for Challenge {
    type Err = Error;

    /// Dispatches on the header word of the first non-blank line.
    fn from_str(s: &str) -> Result<Self> {
        let header = s
            .lines()
            .find_map(|l| l.split_whitespace().next())
            .ok_or_else(|| crate::error::parse_err(1, "empty challenge"))?;
        match header.parse::<Game>()? {
            Game::BoxOff => Ok(Challenge::BoxOff(s.parse()?)),
            Game::Pretzel => Ok(Challenge::Pretzel(s.parse()?)),
            Game::Fujisan => Ok(Challenge::Fujisan(s.parse()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_and_defaults() {
        let g = Generator::new(Game::BoxOff, "l-tiles", &[]).unwrap();
        assert_eq!(g.stream(), "boxoff/l-tiles/(4,6,4)");
        let p = Generator::new(Game::Pretzel, "banded-suits", &[4, 8]).unwrap();
        assert_eq!(p.to_string(), "pretzel banded-suits (4,8)");
        assert!(Generator::new(Game::Fujisan, "dominoes", &[1]).is_err());
        assert!(Generator::new(Game::BoxOff, "dominoes", &[]).is_err());
        assert!(Generator::new(Game::BoxOff, "shuffled", &[4, 6]).is_err());
        assert_eq!(Game::Fujisan.algorithm_names().len(), 5);
    }

    #[test]
    fn generator_json_round_trip() {
        for g in [
            Generator::new(Game::BoxOff, "l-tiles-3unique", &[]).unwrap(),
            Generator::new(Game::Pretzel, "sequential-suits", &[4, 3]).unwrap(),
            Generator::new(Game::Fujisan, "engraved-tiles", &[]).unwrap(),
        ] {
            let text = serde_json::to_string(&g).unwrap();
            assert_eq!(serde_json::from_str::<Generator>(&text).unwrap(), g);
        }
    }

    #[test]
    fn challenge_text_round_trip() {
        for game in Game::ALL {
            for algo in game.algorithm_names() {
                let c = Generator::new(game, algo, &[]).unwrap().generate(7).unwrap();
                assert_eq!(c.to_string().parse::<Challenge>().unwrap(), c);
            }
        }
        assert!("chess\n".parse::<Challenge>().is_err());
        assert!("".parse::<Challenge>().is_err());
    }

    #[test]
    fn solve_agrees_with_check() {
        let limits = SearchLimits::default();
        for seed in 0..20 {
            let c = Generator::new(Game::Pretzel, "shuffled", &[3, 4])
                .unwrap()
                .generate(seed)
                .unwrap();
            let r = c.solve(limits).unwrap();
            assert_eq!(r.solvable, c.check_solvable(limits).unwrap().0);
            assert_eq!(r.path.map(|p| p.len()), r.min_length);
        }
    }
}
