//! Monte Carlo experiments: generate challenge pools, solve them, play them
//! randomly, measure them and summarize the results per algorithm.

use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boxoff;
use crate::error::{Error, Result};
use crate::fujisan;
use crate::generator::{Challenge, Game, Generator};
use crate::pretzel;
use crate::rng::{challenge_seed, playout_seed, RNG_DESCRIPTION};
use crate::search::{SearchLimits, DEFAULT_NODE_BUDGET};
use crate::stats::{self, Histogram, TestResult};

/// Environment variable holding the worker count; unset means one per core.
pub const WORKERS_ENV: &str = "SPCG_WORKERS";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MetricToggles {
    pub pair_equality: bool,
    pub connectivity: bool,
    pub blockades: bool,
    pub counter_intuitive: bool,
    pub lengths: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    #[default]
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub game: Game,
    pub algorithms: Vec<String>,
    /// Empty selects the game's default parameters.
    #[serde(default)]
    pub params: Vec<usize>,
    /// Defaults to 1000, or 200 for the (6,6,6) BoxOff grid.
    #[serde(default)]
    pub challenges: Option<usize>,
    #[serde(default = "default_trial_count")]
    pub trial_count: usize,
    /// Defaults to `challenges / trial_count`.
    #[serde(default)]
    pub trial_size: Option<usize>,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_playouts")]
    pub playouts: usize,
    /// Move cap per random playout; defaults per game.
    #[serde(default)]
    pub playout_cap: Option<usize>,
    #[serde(default = "default_node_budget")]
    pub node_budget: u64,
    #[serde(default)]
    pub metrics: MetricToggles,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: OutputFormat,
}

fn default_trial_count() -> usize {
    10
}

fn default_playouts() -> usize {
    1
}

fn default_node_budget() -> u64 {
    DEFAULT_NODE_BUDGET
}

fn default_alpha() -> f64 {
    stats::DEFAULT_ALPHA
}

impl ExperimentConfig {
    pub fn new(game: Game, algorithms: &[&str], params: &[usize]) -> Self {
        ExperimentConfig {
            game,
            algorithms: algorithms.iter().map(|a| a.to_string()).collect(),
            params: params.to_vec(),
            challenges: None,
            trial_count: default_trial_count(),
            trial_size: None,
            master_seed: 0,
            playouts: default_playouts(),
            playout_cap: None,
            node_budget: default_node_budget(),
            metrics: MetricToggles::default(),
            alpha: default_alpha(),
            output: None,
            format: OutputFormat::default(),
        }
    }

    pub fn generators(&self) -> Result<Vec<Generator>> {
        if self.algorithms.is_empty() {
            return Err(Error::InvalidParams("no algorithms given".into()));
        }
        let gens = self
            .algorithms
            .iter()
            .map(|a| Generator::new(self.game, a, &self.params))
            .collect::<Result<Vec<_>>>()?;
        for (i, g) in gens.iter().enumerate() {
            g.validate()?;
            if gens[..i].contains(g) {
                return Err(Error::InvalidParams(format!("duplicate algorithm {}", g.algorithm_name())));
            }
        }
        Ok(gens)
    }

    pub fn challenge_count(&self) -> usize {
        self.challenges.unwrap_or(match (self.game, self.params.as_slice()) {
            (Game::BoxOff, [6, 6, 6]) => 200,
            _ => 1000,
        })
    }

    pub fn trial_size(&self) -> usize {
        self.trial_size
            .unwrap_or(self.challenge_count() / self.trial_count.max(1))
    }

    pub fn validate(&self) -> Result<Vec<Generator>> {
        let gens = self.generators()?;
        let n = self.challenge_count();
        if n == 0 {
            return Err(Error::InvalidParams("challenge count must be positive".into()));
        }
        if self.trial_count == 0 || self.trial_size() * self.trial_count != n {
            return Err(Error::InvalidParams(format!(
                "{n} challenges cannot be split into {} trials of {}",
                self.trial_count,
                self.trial_size()
            )));
        }
        if self.playout_cap == Some(0) {
            return Err(Error::InvalidParams("playout cap must be positive".into()));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParams("alpha must lie in (0, 1)".into()));
        }
        if self.node_budget == 0 {
            return Err(Error::InvalidParams("node budget must be positive".into()));
        }
        Ok(gens)
    }
}

/// Outcome for one generated challenge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChallengeRow {
    pub index: usize,
    pub seed: u64,
    /// `None` when the node budget ran out first.
    pub solvable: Option<bool>,
    pub min_length: Option<usize>,
    pub nodes_expanded: u64,
    /// Random playouts, out of `playouts`, that solved the challenge.
    pub random_solved: usize,
    pub pair_equality: Option<f64>,
    pub connectivity: Option<f64>,
    pub ducking_crab: Option<bool>,
    pub duelling_deuces: Option<bool>,
    /// Fewest counter-intuitive moves over all shortest solutions (Fujisan).
    pub counter_intuitive: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSplit {
    pub metric: String,
    pub mean_all: Option<f64>,
    pub mean_solvable: Option<f64>,
    pub mean_unsolvable: Option<f64>,
    /// Welch test, solvable against unsolvable challenges.
    pub test: Option<TestResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgorithmReport {
    pub generator: Generator,
    pub algorithm: String,
    pub rows: Vec<ChallengeRow>,
    pub indeterminate: usize,
    /// Solvability of each trial; indeterminate challenges count as unsolved.
    pub trial_solvability: Vec<f64>,
    pub trial_random: Vec<f64>,
    pub solvability: f64,
    pub random_solvability: f64,
    pub interest: f64,
    pub splits: Vec<MetricSplit>,
    pub blockade_rates: Option<BlockadeRates>,
    pub lengths: Option<Histogram>,
    /// Mean counter-intuitive moves over the solvable challenges of each trial.
    pub trial_counter_intuitive: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockadeRates {
    pub ducking_crab: f64,
    pub duelling_deuces: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseTest {
    pub metric: String,
    pub a: String,
    pub b: String,
    pub result: TestResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub crate_version: String,
    pub rng: String,
    pub master_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub provenance: Provenance,
    pub algorithms: Vec<AlgorithmReport>,
    pub pairwise: Vec<PairwiseTest>,
    /// Kruskal–Wallis across the algorithms' solution lengths.
    pub lengths_test: Option<TestResult>,
}

impl ExperimentReport {
    pub fn algorithm(&self, name: &str) -> Option<&AlgorithmReport> {
        self.algorithms.iter().find(|a| a.algorithm == name)
    }

    pub fn pairwise(&self, metric: &str, a: &str, b: &str) -> Option<&PairwiseTest> {
        self.pairwise
            .iter()
            .find(|t| t.metric == metric && t.a == a && t.b == b)
    }
}

pub fn worker_count_from_env() -> Option<usize> {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n| n > 0)
}

/// Runs an experiment with the worker count taken from `SPCG_WORKERS`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_experiment_with_workers(config, worker_count_from_env())
}

/// Runs an experiment on a pool of `workers` threads (`None`: one per core).
/// The report does not depend on the worker count.
pub fn run_experiment_with_workers(
    config: &ExperimentConfig,
    workers: Option<usize>,
) -> Result<ExperimentReport> {
    let gens = config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidParams(format!("worker pool: {e}")))?;
    let n = config.challenge_count();
    let rows = pool.install(|| {
        gens.iter()
            .map(|g| {
                (0..n)
                    .into_par_iter()
                    .map(|i| run_challenge(config, g, i))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;
    summarize(config.clone(), gens.into_iter().zip(rows).collect())
}

fn run_challenge(config: &ExperimentConfig, generator: &Generator, index: usize) -> Result<ChallengeRow> {
    let seed = challenge_seed(config.master_seed, &generator.stream(), index as u64);
    let challenge = generator.generate(seed)?;
    let limits = SearchLimits {
        node_budget: config.node_budget,
    };
    let m = config.metrics;
    let mut row = ChallengeRow {
        index,
        seed,
        solvable: None,
        min_length: None,
        nodes_expanded: 0,
        random_solved: 0,
        pair_equality: None,
        connectivity: None,
        ducking_crab: None,
        duelling_deuces: None,
        counter_intuitive: None,
    };

    let result = if m.lengths {
        challenge.solve(limits).map(|r| (r.solvable, r.min_length, r.nodes_expanded))
    } else {
        challenge.check_solvable(limits).map(|(s, n)| (s, None, n))
    };
    match result {
        Ok((solvable, min_length, nodes)) => {
            row.solvable = Some(solvable);
            row.min_length = min_length;
            row.nodes_expanded = nodes;
        }
        Err(_) => row.nodes_expanded = config.node_budget,
    }
    if let (Challenge::Fujisan(board), true, Some(true)) = (&challenge, m.counter_intuitive, row.solvable) {
        row.counter_intuitive = fujisan::fewest_counterintuitive(board).map(|(_, ci)| ci);
    }

    let cap = config.playout_cap.unwrap_or_else(|| generator.default_playout_cap());
    row.random_solved = (0..config.playouts)
        .filter(|&a| challenge.random_playout(playout_seed(seed, a as u64), cap).solved)
        .count();

    match &challenge {
        Challenge::BoxOff(grid) if m.pair_equality => {
            row.pair_equality = Some(boxoff::pair_equality(grid)?);
        }
        Challenge::Pretzel(layout) if m.blockades => {
            let b = pretzel::detect_blockades(layout);
            row.ducking_crab = Some(b.ducking_crab);
            row.duelling_deuces = Some(b.duelling_deuces);
        }
        Challenge::Fujisan(board) if m.connectivity => {
            row.connectivity = Some(fujisan::connectivity(board));
        }
        _ => {}
    }
    Ok(row)
}

fn mean_of(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| stats::mean(values))
}

fn split(metric: &str, rows: &[ChallengeRow], value: impl Fn(&ChallengeRow) -> Option<f64>, alpha: f64) -> Option<MetricSplit> {
    let mut all = Vec::new();
    let (mut yes, mut no) = (Vec::new(), Vec::new());
    for r in rows {
        let Some(v) = value(r) else { continue };
        all.push(v);
        match r.solvable {
            Some(true) => yes.push(v),
            Some(false) => no.push(v),
            None => {}
        }
    }
    if all.is_empty() {
        return None;
    }
    Some(MetricSplit {
        metric: metric.into(),
        mean_all: mean_of(&all),
        mean_solvable: mean_of(&yes),
        mean_unsolvable: mean_of(&no),
        test: stats::welch_t_test(&yes, &no, alpha).ok(),
    })
}

/// Builds every summary and test from per-challenge rows.
pub fn summarize(config: ExperimentConfig, rows: Vec<(Generator, Vec<ChallengeRow>)>) -> Result<ExperimentReport> {
    let (size, count) = (config.trial_size(), config.trial_count);
    let playouts = config.playouts.max(1) as f64;
    let alpha = config.alpha;
    let mut algorithms = Vec::with_capacity(rows.len());
    for (generator, rows) in rows {
        let solved: Vec<bool> = rows.iter().map(|r| r.solvable == Some(true)).collect();
        let trials = stats::partition_trials(&solved, size, count)?;
        let random: Vec<f64> = rows.iter().map(|r| r.random_solved as f64 / playouts).collect();
        let trial_random: Vec<f64> = random.chunks(size).map(stats::mean).collect();
        let solvability = stats::proportion(&solved);
        let random_solvability = stats::mean(&random);

        let mut splits = Vec::new();
        splits.extend(split("pair_equality", &rows, |r| r.pair_equality, alpha));
        splits.extend(split("connectivity", &rows, |r| r.connectivity, alpha));

        let blockade_rates = rows.iter().all(|r| r.ducking_crab.is_some()).then(|| {
            let rate = |f: fn(&ChallengeRow) -> Option<bool>| {
                rows.iter().filter(|&r| f(r) == Some(true)).count() as f64 / rows.len() as f64
            };
            BlockadeRates {
                ducking_crab: rate(|r| r.ducking_crab),
                duelling_deuces: rate(|r| r.duelling_deuces),
            }
        });

        let lengths: Vec<i64> = rows.iter().filter_map(|r| r.min_length.map(|l| l as i64)).collect();
        let lengths = config.metrics.lengths.then(|| stats::histogram(&lengths, 1)).transpose()?;

        let trial_counter_intuitive = rows.iter().any(|r| r.counter_intuitive.is_some()).then(|| {
            rows.chunks(size)
                .map(|t| {
                    let v: Vec<f64> = t.iter().filter_map(|r| r.counter_intuitive.map(|c| c as f64)).collect();
                    mean_of(&v).unwrap_or(0.0)
                })
                .collect()
        });

        algorithms.push(AlgorithmReport {
            algorithm: generator.algorithm_name().to_string(),
            generator,
            indeterminate: rows.iter().filter(|r| r.solvable.is_none()).count(),
            trial_solvability: trials.proportions(),
            trial_random,
            solvability,
            random_solvability,
            interest: stats::interest_metric(solvability, random_solvability),
            splits,
            blockade_rates,
            lengths,
            trial_counter_intuitive,
            rows,
        });
    }

    let mut pairwise = Vec::new();
    for (i, a) in algorithms.iter().enumerate() {
        for b in &algorithms[i + 1..] {
            let mut push = |metric: &str, x: &[f64], y: &[f64]| -> Result<()> {
                pairwise.push(PairwiseTest {
                    metric: metric.into(),
                    a: a.algorithm.clone(),
                    b: b.algorithm.clone(),
                    result: stats::welch_t_test(x, y, alpha)?,
                });
                Ok(())
            };
            if count >= 2 {
                push("solvability", &a.trial_solvability, &b.trial_solvability)?;
                if let (Some(x), Some(y)) = (&a.trial_counter_intuitive, &b.trial_counter_intuitive) {
                    push("counter_intuitive", x, y)?;
                }
            }
        }
    }

    let length_groups: Vec<Vec<f64>> = algorithms
        .iter()
        .map(|a| a.rows.iter().filter_map(|r| r.min_length.map(|l| l as f64)).collect())
        .collect();
    let lengths_test = if config.metrics.lengths && length_groups.len() >= 2 {
        stats::kruskal_wallis(&length_groups, alpha).ok()
    } else {
        None
    };

    Ok(ExperimentReport {
        provenance: Provenance {
            crate_version: env!("CARGO_PKG_VERSION").into(),
            rng: RNG_DESCRIPTION.into(),
            master_seed: config.master_seed,
        },
        config,
        algorithms,
        pairwise,
        lengths_test,
    })
}

/// Recomputes every summary and test of a report from its rows.
pub fn analyze(report: &ExperimentReport) -> Result<ExperimentReport> {
    let rows = report
        .algorithms
        .iter()
        .map(|a| (a.generator, a.rows.clone()))
        .collect();
    let mut fresh = summarize(report.config.clone(), rows)?;
    fresh.provenance = report.provenance.clone();
    Ok(fresh)
}

const CSV_HEADER: [&str; 15] = [
    "game",
    "algorithm",
    "params",
    "index",
    "seed",
    "solvable",
    "min_length",
    "nodes_expanded",
    "random_solved",
    "pair_equality",
    "connectivity",
    "ducking_crab",
    "duelling_deuces",
    "counter_intuitive",
    "playouts",
];

const SUMMARY_HEADER: [&str; 9] = [
    "game",
    "algorithm",
    "params",
    "challenges",
    "indeterminate",
    "solvability",
    "random_solvability",
    "interest",
    "median_length",
];

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_bytes(header: &[&str], records: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(io)?;
    for r in records {
        w.write_record(&r).map_err(io)?;
    }
    w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

/// Per-challenge rows (CSV) or the whole report (JSON).
pub fn serialize_report(report: &ExperimentReport, format: OutputFormat) -> Result<Vec<u8>> {
    match format {
        OutputFormat::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        OutputFormat::Csv => {
            let playouts = report.config.playouts.to_string();
            csv_bytes(
                &CSV_HEADER,
                report.algorithms.iter().flat_map(|a| {
                    let playouts = playouts.clone();
                    a.rows.iter().map(move |r| {
                        vec![
                            a.generator.game().to_string(),
                            a.algorithm.clone(),
                            a.generator.params_label(),
                            r.index.to_string(),
                            r.seed.to_string(),
                            r.solvable.map_or("indeterminate".into(), |s| s.to_string()),
                            opt(r.min_length),
                            r.nodes_expanded.to_string(),
                            r.random_solved.to_string(),
                            opt(r.pair_equality),
                            opt(r.connectivity),
                            opt(r.ducking_crab),
                            opt(r.duelling_deuces),
                            opt(r.counter_intuitive),
                            playouts.clone(),
                        ]
                    })
                }),
            )
        }
    }
}

/// One row per algorithm with its pooled rates.
pub fn serialize_summary_csv(report: &ExperimentReport) -> Result<Vec<u8>> {
    csv_bytes(
        &SUMMARY_HEADER,
        report.algorithms.iter().map(|a| {
            vec![
                a.generator.game().to_string(),
                a.algorithm.clone(),
                a.generator.params_label(),
                a.rows.len().to_string(),
                a.indeterminate.to_string(),
                a.solvability.to_string(),
                a.random_solvability.to_string(),
                a.interest.to_string(),
                opt(a.lengths.as_ref().and_then(|h| h.median)),
            ]
        }),
    )
}

pub fn parse_report(bytes: &[u8]) -> Result<ExperimentReport> {
    Ok(serde_json::from_slice(bytes)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(game: Game, algos: &[&str], params: &[usize]) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(game, algos, params);
        c.challenges = Some(40);
        c.trial_count = 4;
        c.master_seed = 9;
        c
    }

    #[test]
    fn config_defaults_from_json() {
        let c: ExperimentConfig =
            serde_json::from_str(r#"{"game":"boxoff","algorithms":["shuffled"],"params":[6,6,6]}"#).unwrap();
        assert_eq!(c.challenge_count(), 200);
        assert_eq!(c.trial_size(), 20);
        assert_eq!(c.node_budget, DEFAULT_NODE_BUDGET);
        let d: ExperimentConfig = serde_json::from_str(r#"{"game":"fujisan","algorithms":["dominoes"]}"#).unwrap();
        assert_eq!((d.challenge_count(), d.trial_size(), d.playouts), (1000, 100, 1));
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"game":"fujisan","algorithms":[],"bogus":1}"#).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = small(Game::BoxOff, &["shuffled"], &[]);
        c.challenges = Some(41);
        assert!(run_experiment(&c).is_err());
        let c = small(Game::BoxOff, &["shuffled", "shuffled"], &[]);
        assert!(run_experiment(&c).is_err());
        let c = small(Game::BoxOff, &[], &[]);
        assert!(run_experiment(&c).is_err());
        let c = small(Game::Pretzel, &["dominoes"], &[]);
        assert!(run_experiment(&c).is_err());
    }

    #[test]
    fn report_shape_and_rates() {
        let mut c = small(Game::BoxOff, &["shuffled", "l-tiles"], &[]);
        c.metrics.pair_equality = true;
        let r = run_experiment_with_workers(&c, Some(2)).unwrap();
        assert_eq!(r.algorithms.len(), 2);
        for a in &r.algorithms {
            assert_eq!(a.rows.len(), 40);
            assert_eq!(a.trial_solvability.len(), 4);
            assert!((0.0..=1.0).contains(&a.solvability));
            assert!((stats::mean(&a.trial_solvability) - a.solvability).abs() < 1e-12);
            assert_eq!(a.splits[0].metric, "pair_equality");
        }
        assert!(r.pairwise("solvability", "shuffled", "l-tiles").is_some());
        assert_eq!(r.provenance.rng, RNG_DESCRIPTION);
    }

    #[test]
    fn adding_an_algorithm_keeps_existing_rows() {
        let one = run_experiment(&small(Game::Fujisan, &["dominoes"], &[])).unwrap();
        let two = run_experiment(&small(Game::Fujisan, &["shuffled", "dominoes"], &[])).unwrap();
        assert_eq!(one.algorithms[0].rows, two.algorithms[1].rows);
    }

    #[test]
    fn budget_exhaustion_is_indeterminate() {
        let mut c = small(Game::Pretzel, &["shuffled"], &[4, 6]);
        c.node_budget = 5;
        let r = run_experiment(&c).unwrap();
        let a = &r.algorithms[0];
        assert!(a.indeterminate > 0);
        assert!(a.rows.iter().any(|row| row.solvable.is_none()));
        let csv = String::from_utf8(serialize_report(&r, OutputFormat::Csv).unwrap()).unwrap();
        assert!(csv.contains("indeterminate"));
    }

    #[test]
    fn serialization() {
        let mut c = small(Game::Fujisan, &["shuffled", "engraved-tiles"], &[]);
        c.metrics = MetricToggles {
            connectivity: true,
            counter_intuitive: true,
            lengths: true,
            ..Default::default()
        };
        let r = run_experiment(&c).unwrap();
        let json = serialize_report(&r, OutputFormat::Json).unwrap();
        assert_eq!(parse_report(&json).unwrap(), r);
        assert_eq!(analyze(&r).unwrap(), r);
        let csv = serialize_report(&r, OutputFormat::Csv).unwrap();
        assert_eq!(csv.iter().filter(|&&b| b == b'\n').count(), 1 + 80);
        let summary = serialize_summary_csv(&r).unwrap();
        assert_eq!(summary.iter().filter(|&&b| b == b'\n').count(), 3);

        let empty = ExperimentReport {
            algorithms: Vec::new(),
            pairwise: Vec::new(),
            lengths_test: None,
            ..r
        };
        let csv = String::from_utf8(serialize_report(&empty, OutputFormat::Csv).unwrap()).unwrap();
        assert_eq!(csv, CSV_HEADER.join(",") + "\n");
    }
}
