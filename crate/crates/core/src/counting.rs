//! Exact sizes of each generator's challenge space, before symmetry reduction.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::boxoff::BoxOffAlgorithm;
use crate::error::Result;
use crate::fujisan::FujisanAlgorithm;
use crate::generator::Generator;
use crate::pretzel::PretzelAlgorithm;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    #[serde(with = "decimal")]
    pub exact: BigUint,
    /// `floor(log10(exact))`.
    pub oom: u32,
}

impl CountResult {
    pub fn new(exact: BigUint) -> Self {
        let oom = exact.to_str_radix(10).len() as u32 - 1;
        CountResult { exact, oom }
    }
}

mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        BigUint::parse_bytes(text.as_bytes(), 10).ok_or_else(|| D::Error::custom("not a decimal integer"))
    }
}

pub fn factorial(n: u64) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

fn pow(base: BigUint, exp: u64) -> BigUint {
    base.pow(exp.to_u32().expect("small exponent"))
}

pub fn challenge_space_size(generator: &Generator) -> Result<CountResult> {
    generator.validate()?;
    let exact = match *generator {
        Generator::BoxOff { params, algorithm } => {
            let (cells, c) = (params.cells() as u64, params.c as u64);
            match algorithm {
                BoxOffAlgorithm::Shuffled => {
                    factorial(cells) / pow(factorial(cells / c), c)
                }
                BoxOffAlgorithm::LTiles | BoxOffAlgorithm::LTiles3Unique => {
                    let t = params.tile_count() as u64;
                    pow(BigUint::from(2u32), t) * factorial(t)
                }
            }
        }
        Generator::Pretzel { params, algorithm } => {
            let (k, n) = (params.k as u64, params.n as u64);
            match algorithm {
                PretzelAlgorithm::Shuffled => factorial(k * n),
                PretzelAlgorithm::SequentialSuits | PretzelAlgorithm::BandedSuits => {
                    pow(factorial(n), k)
                }
            }
        }
        Generator::Fujisan { algorithm } => match algorithm {
            FujisanAlgorithm::Shuffled => factorial(24) / pow(factorial(4), 6),
            // The twelve pairs leave out a perfect matching of the six values;
            // K6 has fifteen of those.
            FujisanAlgorithm::ShuffledUniqueSteps => {
                BigUint::from(15u32) * pow(BigUint::from(2u32), 12) * factorial(12)
            }
            FujisanAlgorithm::Piecepack => pow(factorial(6), 4),
            FujisanAlgorithm::EngravedTiles => {
                (5..=10u64)
                    .map(|i| binomial(15, i) * binomial(5, 10 - i) * pow(BigUint::from(2u32), i))
                    .sum::<BigUint>()
                    * factorial(10)
            }
            FujisanAlgorithm::Dominoes => {
                binomial(15, 12) * pow(BigUint::from(2u32), 12) * factorial(12)
            }
        },
    };
    Ok(CountResult::new(exact))
}

/// The alternative BoxOff shuffled reading `(hw)! / (c!)^(hw/c)`.
pub fn boxoff_printed_reading(generator: &Generator) -> Option<CountResult> {
    match *generator {
        Generator::BoxOff {
            params,
            algorithm: BoxOffAlgorithm::Shuffled,
        } => {
            let (cells, c) = (params.cells() as u64, params.c as u64);
            Some(CountResult::new(factorial(cells) / pow(factorial(c), cells / c)))
        }
        _ => None,
    }
}

/// Published order of magnitude for the generators that have one.
pub fn claimed_oom(generator: &Generator) -> Option<u32> {
    match *generator {
        Generator::BoxOff { params, algorithm } if (params.h, params.w, params.c) == (4, 6, 4) => {
            match algorithm {
                BoxOffAlgorithm::Shuffled => Some(11),
                BoxOffAlgorithm::LTiles => Some(6),
                BoxOffAlgorithm::LTiles3Unique => None,
            }
        }
        Generator::Pretzel { params, algorithm } if (params.k, params.n) == (4, 4) => {
            match algorithm {
                PretzelAlgorithm::Shuffled => Some(13),
                PretzelAlgorithm::SequentialSuits => Some(5),
                PretzelAlgorithm::BandedSuits => None,
            }
        }
        Generator::Fujisan { algorithm } => match algorithm {
            FujisanAlgorithm::Shuffled => Some(14),
            FujisanAlgorithm::ShuffledUniqueSteps => None,
            FujisanAlgorithm::Piecepack => Some(10),
            FujisanAlgorithm::EngravedTiles => Some(13),
            FujisanAlgorithm::Dominoes => Some(14),
        },
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub generator: Generator,
    pub count: CountResult,
    pub claimed_oom: Option<u32>,
    /// `Some(false)` flags a published magnitude that disagrees with `count.oom`.
    pub claim_matches: Option<bool>,
    pub printed_reading: Option<CountResult>,
}

pub fn count_report(generator: &Generator) -> Result<CountReport> {
    let count = challenge_space_size(generator)?;
    let claimed = claimed_oom(generator);
    Ok(CountReport {
        generator: *generator,
        claim_matches: claimed.map(|c| c == count.oom),
        claimed_oom: claimed,
        printed_reading: boxoff_printed_reading(generator),
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::Game;

    fn size(game: Game, algo: &str, params: &[usize]) -> CountResult {
        challenge_space_size(&Generator::new(game, algo, params).unwrap()).unwrap()
    }

    #[test]
    fn published_exact_values() {
        assert_eq!(size(Game::Pretzel, "shuffled", &[4, 4]).exact, BigUint::from(20_922_789_888_000u64));
        assert_eq!(size(Game::Pretzel, "sequential-suits", &[4, 4]).exact, BigUint::from(331_776u32));
        assert_eq!(size(Game::Pretzel, "banded-suits", &[4, 4]).exact, BigUint::from(331_776u32));
        assert_eq!(size(Game::BoxOff, "shuffled", &[2, 3, 2]).exact, BigUint::from(20u32));
    }

    #[test]
    fn evaluated_formulas() {
        let exact = |g, a, p: &[usize]| size(g, a, p).exact.to_u128().unwrap();
        assert_eq!(exact(Game::BoxOff, "shuffled", &[4, 6, 4]), 2_308_743_493_056);
        assert_eq!(exact(Game::BoxOff, "l-tiles", &[4, 6, 4]), 10_321_920);
        assert_eq!(exact(Game::Fujisan, "shuffled", &[]), 3_246_670_537_110_000);
        assert_eq!(exact(Game::Fujisan, "piecepack", &[]), 268_738_560_000);
        assert_eq!(exact(Game::Fujisan, "engraved-tiles", &[]), 153_483_608_678_400);
        assert_eq!(exact(Game::Fujisan, "dominoes", &[]), 892_705_701_888_000);
        assert_eq!(exact(Game::Fujisan, "shuffled-unique-steps", &[]), 29_429_858_304_000);
    }

    #[test]
    fn order_of_magnitude_bounds() {
        for game in Game::ALL {
            for algo in game.algorithm_names() {
                let r = size(game, algo, &[]);
                let lo = BigUint::from(10u32).pow(r.oom);
                assert!(lo <= r.exact && r.exact < lo * 10u32, "{game} {algo}");
            }
        }
        assert_eq!(CountResult::new(BigUint::one()).oom, 0);
        assert_eq!(CountResult::new(BigUint::from(999u32)).oom, 2);
        assert_eq!(CountResult::new(BigUint::from(1000u32)).oom, 3);
    }

    #[test]
    fn claims_are_flagged() {
        let report = |g, a| count_report(&Generator::new(g, a, &[]).unwrap()).unwrap();
        assert_eq!(report(Game::Pretzel, "shuffled").claim_matches, Some(true));
        assert_eq!(report(Game::Pretzel, "sequential-suits").claim_matches, Some(true));
        assert_eq!(report(Game::Fujisan, "dominoes").claim_matches, Some(true));
        assert_eq!(report(Game::Fujisan, "piecepack").claim_matches, Some(false));
        let boxoff = report(Game::BoxOff, "shuffled");
        assert_eq!(boxoff.claim_matches, Some(false));
        assert_eq!(boxoff.printed_reading.unwrap().exact, BigUint::from(3_246_670_537_110_000u64));
    }

    #[test]
    fn unique_step_pair_sets() {
        // Twelve distinct non-double pairs using each value four times.
        let pairs: Vec<(usize, usize)> = (0..6).flat_map(|a| (a + 1..6).map(move |b| (a, b))).collect();
        let valid = (0u32..1 << 15)
            .filter(|m| m.count_ones() == 12)
            .filter(|m| {
                let mut deg = [0; 6];
                for (i, &(a, b)) in pairs.iter().enumerate() {
                    if m >> i & 1 == 1 {
                        deg[a] += 1;
                        deg[b] += 1;
                    }
                }
                deg == [4; 6]
            })
            .count();
        assert_eq!(valid, 15);
    }

    #[test]
    fn json_keeps_big_values() {
        let r = size(Game::Pretzel, "shuffled", &[4, 13]);
        let text = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<CountResult>(&text).unwrap(), r);
    }
}
