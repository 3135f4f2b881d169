use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use solitaire_pcg::counting::count_report;
use solitaire_pcg::generator::{Challenge, Game, Generator};
use solitaire_pcg::harness::{
    analyze, parse_report, run_experiment, serialize_report, serialize_summary_csv, ExperimentConfig,
    ExperimentReport, OutputFormat,
};
use solitaire_pcg::search::{SearchLimits, DEFAULT_NODE_BUDGET};

#[derive(Parser)]
#[command(name = "spcg", version, about = "Generate, solve and evaluate BoxOff, Pretzel and Fujisan challenges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print challenges in text form, one per seed, separated by blank lines.
    Generate {
        game: Game,
        #[arg(short, long)]
        algorithm: String,
        #[arg(short, long, default_value_t = 0)]
        seed: u64,
        /// Number of challenges, using consecutive seeds.
        #[arg(short, default_value_t = 1)]
        n: u64,
        /// Game parameters, e.g. 4,6,4 for BoxOff or 4,4 for Pretzel.
        #[arg(short, long, value_delimiter = ',')]
        params: Vec<usize>,
    },
    /// Solve a challenge file and print the shortest solution as JSON.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
        budget: u64,
    },
    /// Size of a generator's challenge space.
    Count {
        game: Game,
        #[arg(short, long)]
        algorithm: String,
        #[arg(short, long, value_delimiter = ',')]
        params: Vec<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Run an experiment described by a JSON config.
    Experiment {
        #[arg(short, long)]
        config: PathBuf,
        /// Overrides the config's output path; `-` writes to stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(short, long)]
        format: Option<Format>,
    },
    /// Recompute summaries and tests from a JSON report.
    Analyze {
        report: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match cli.command {
        Command::Generate {
            game,
            algorithm,
            seed,
            n,
            params,
        } => {
            let generator = Generator::new(game, &algorithm, &params)?;
            for i in 0..n {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "{}", generator.generate(seed.wrapping_add(i))?)?;
            }
        }
        Command::Solve { file, budget } => {
            let text = read(&file)?;
            let challenge: Challenge = text.parse().with_context(|| format!("parsing {}", file.display()))?;
            let result = challenge.solve(SearchLimits { node_budget: budget })?;
            serde_json::to_writer_pretty(&mut out, &result)?;
            writeln!(out)?;
        }
        Command::Count {
            game,
            algorithm,
            params,
            json,
        } => {
            let report = count_report(&Generator::new(game, &algorithm, &params)?)?;
            if json {
                serde_json::to_writer_pretty(&mut out, &report)?;
                writeln!(out)?;
            } else {
                writeln!(out, "generator: {}", report.generator)?;
                writeln!(out, "exact:     {}", report.count.exact)?;
                writeln!(out, "magnitude: 10^{}", report.count.oom)?;
                if let Some(claim) = report.claimed_oom {
                    let flag = if report.claim_matches == Some(true) { "" } else { "  (mismatch)" };
                    writeln!(out, "published: 10^{claim}{flag}")?;
                }
                if let Some(alt) = &report.printed_reading {
                    writeln!(out, "(hw)!/c!^(hw/c): {} (10^{})", alt.exact, alt.oom)?;
                }
            }
        }
        Command::Experiment {
            config,
            output,
            format,
        } => {
            let text = read(&config)?;
            let mut cfg: ExperimentConfig =
                serde_json::from_str(&text).with_context(|| format!("parsing {}", config.display()))?;
            if let Some(f) = format {
                cfg.format = f.into();
            }
            if let Some(o) = output {
                cfg.output = (o != Path::new("-")).then_some(o);
            }
            let report = run_experiment(&cfg)?;
            let bytes = serialize_report(&report, cfg.format)?;
            match &cfg.output {
                Some(path) => {
                    fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?;
                    if cfg.format == OutputFormat::Csv {
                        let summary = path.with_extension("summary.csv");
                        fs::write(&summary, serialize_summary_csv(&report)?)
                            .with_context(|| format!("writing {}", summary.display()))?;
                    }
                    print_summary(&mut out, &report)?;
                }
                None => out.write_all(&bytes)?,
            }
        }
        Command::Analyze { report, json } => {
            let stored = parse_report(read(&report)?.as_bytes())
                .with_context(|| format!("parsing {}", report.display()))?;
            let fresh = analyze(&stored)?;
            if json {
                out.write_all(&serialize_report(&fresh, OutputFormat::Json)?)?;
            } else {
                print_summary(&mut out, &fresh)?;
            }
            if fresh != stored {
                bail!("stored summaries differ from those recomputed from the rows");
            }
        }
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn print_summary(out: &mut impl Write, report: &ExperimentReport) -> Result<()> {
    writeln!(
        out,
        "{:<24} {:>8} {:>8} {:>8} {:>6} {:>7}",
        "algorithm", "P(Sp)", "P(Sr)", "interest", "indet", "median"
    )?;
    for a in &report.algorithms {
        let median = a
            .lengths
            .as_ref()
            .and_then(|h| h.median)
            .map_or("-".into(), |m| m.to_string());
        writeln!(
            out,
            "{:<24} {:>8.3} {:>8.3} {:>8.3} {:>6} {:>7}",
            a.algorithm, a.solvability, a.random_solvability, a.interest, a.indeterminate, median
        )?;
        for s in &a.splits {
            let fmt = |v: Option<f64>| v.map_or("-".into(), |v| format!("{v:.3}"));
            let p = s.test.map_or("-".into(), |t| format!("{:.3e}", t.p_value));
            writeln!(
                out,
                "  {}: all {} solvable {} unsolvable {} p {}",
                s.metric,
                fmt(s.mean_all),
                fmt(s.mean_solvable),
                fmt(s.mean_unsolvable),
                p
            )?;
        }
        if let Some(b) = &a.blockade_rates {
            writeln!(
                out,
                "  blockades: ducking crab {:.4} duelling deuces {:.4}",
                b.ducking_crab, b.duelling_deuces
            )?;
        }
    }
    for t in &report.pairwise {
        writeln!(
            out,
            "{} {} vs {}: t = {:.3}, p = {:.3e}{}",
            t.metric,
            t.a,
            t.b,
            t.result.statistic,
            t.result.p_value,
            if t.result.significant { " *" } else { "" }
        )?;
    }
    if let Some(k) = &report.lengths_test {
        writeln!(out, "lengths Kruskal-Wallis: H = {:.3}, p = {:.3e}", k.statistic, k.p_value)?;
    }
    Ok(())
}
