//! The `ces` command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::compose::{Algorithm, PerChunk, Preference};
use crate::error::Error;
use crate::experiment::{run_completeness, run_scalability, write_csv};
use crate::pipeline::{Engine, EngineConfig};
use crate::workload::{check_scenario, generate_scenario, load_scenario, scenario_to_json, MetaScenario, ScenarioConfig};

pub const SEED_ENV: &str = "CES_SEED";

#[derive(Debug, Parser)]
#[command(name = "ces", version, about = "Compose crowdsourced wireless energy services")]
struct Cli {
    /// Seed for scenario generation and the GA (overrides CES_SEED and the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON file with optional `scenario` and `engine` blocks.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format for experiment results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic scenario.
    Gen(GenArgs),
    /// Compose one query with one algorithm and print the plan as JSON.
    Compose(ComposeArgs),
    /// Run a completeness or scalability sweep.
    Experiment {
        #[command(subcommand)]
        kind: ExperimentKind,
    },
    /// Check a scenario file against every schema and invariant.
    Validate {
        file: PathBuf,
    },
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long)]
    services: Option<usize>,
    #[arg(long)]
    queries: Option<usize>,
    #[arg(long)]
    meta: Option<String>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ComposeArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long = "query-id")]
    query_id: String,
    #[arg(long, default_value = "knapsack")]
    algo: String,
    #[arg(long = "per-chunk")]
    per_chunk: Option<String>,
    #[arg(long)]
    preference: Option<String>,
    /// Include the composition wall time in the output.
    #[arg(long)]
    timing: bool,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, default_value = "1,2,3,4,5,6,7,8,9")]
    ratios: String,
    #[arg(long, default_value = "greedy,knapsack,heuristic,priority,ga")]
    algos: String,
    /// Queries per scenario.
    #[arg(long)]
    queries: Option<usize>,
    #[arg(long)]
    meta: Option<String>,
    #[arg(long = "per-chunk")]
    per_chunk: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum ExperimentKind {
    Completeness {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, default_value = "0.7,0.8,0.9,1.0")]
        sq: String,
        #[arg(long, default_value_t = 5)]
        repeats: usize,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    Scalability {
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

#[derive(Debug, Default, Deserialize)]
#[serde(default)]
struct ConfigFile {
    scenario: ScenarioConfig,
    engine: EngineConfig,
}

enum Failure {
    Usage(String),
    Data(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownAlgorithm(_) | Error::UnknownQuery(_) => Failure::Usage(e.to_string()),
            other => Failure::Data(other),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.into())
    }
}

fn usage(e: Error) -> Failure {
    Failure::Usage(e.to_string())
}

fn parse_floats(s: &str, what: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            x.parse::<f64>()
                .map_err(|_| Failure::Usage(format!("{what}: `{x}` is not a number")))
        })
        .collect()
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, bytes)?,
        None => io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

fn records_bytes<T: serde::Serialize>(format: Format, records: &[T]) -> Result<Vec<u8>, Failure> {
    let mut buf = Vec::new();
    match format {
        Format::Csv => write_csv(&mut buf, records)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, records).map_err(Error::from)?;
            buf.push(b'\n');
        }
    }
    Ok(buf)
}

fn apply_sweep(sweep: &SweepArgs, cfg: &mut ScenarioConfig, engine: &mut EngineConfig) -> Result<Vec<Algorithm>, Failure> {
    if let Some(n) = sweep.queries {
        cfg.n_queries = n;
    }
    if let Some(m) = &sweep.meta {
        cfg.meta_scenario = m.parse::<MetaScenario>().map_err(usage)?;
    }
    if let Some(p) = &sweep.per_chunk {
        engine.compose.per_chunk = p.parse::<PerChunk>().map_err(usage)?;
    }
    Algorithm::parse_list(&sweep.algos).map_err(usage)
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut file = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p)?;
            serde_json::from_str::<ConfigFile>(&text).map_err(Error::from)?
        }
        None => ConfigFile::default(),
    };
    let env_seed = match std::env::var(SEED_ENV) {
        Ok(v) => Some(
            v.trim()
                .parse::<u64>()
                .map_err(|_| Failure::Usage(format!("{SEED_ENV}=`{v}` is not an unsigned integer")))?,
        ),
        Err(_) => None,
    };
    if let Some(seed) = cli.seed.or(env_seed) {
        file.scenario.seed = seed;
        file.engine.compose.ga.seed = seed;
    }
    let ConfigFile {
        scenario: mut cfg,
        mut engine,
    } = file;

    match cli.command {
        Command::Gen(args) => {
            if let Some(n) = args.services {
                cfg.n_services = n;
            }
            if let Some(n) = args.queries {
                cfg.n_queries = n;
            }
            if let Some(m) = &args.meta {
                cfg.meta_scenario = m.parse::<MetaScenario>().map_err(usage)?;
            }
            cfg.validate().map_err(usage)?;
            let scenario = generate_scenario(&cfg)?;
            let mut text = scenario_to_json(&scenario)?;
            text.push('\n');
            emit(args.out.as_deref(), text.as_bytes())
        }
        Command::Compose(args) => {
            let algorithm: Algorithm = args.algo.parse().map_err(usage)?;
            if let Some(p) = &args.per_chunk {
                engine.compose.per_chunk = p.parse().map_err(usage)?;
            }
            if let Some(p) = &args.preference {
                engine.compose.preference = p.parse::<Preference>().map_err(usage)?;
            }
            let scenario = load_scenario(&args.input)?;
            let q = scenario
                .queries
                .iter()
                .find(|q| q.qid == args.query_id)
                .ok_or_else(|| Error::UnknownQuery(args.query_id.clone()))?;
            let engine = Engine::new(&scenario.services, scenario.config.tsr_params, engine)?;
            let plan = if args.timing {
                engine.compose_timed(algorithm, q)?
            } else {
                engine.compose(algorithm, q)?
            };
            let mut text = serde_json::to_string_pretty(&plan).map_err(Error::from)?;
            text.push('\n');
            emit(None, text.as_bytes())
        }
        Command::Experiment { kind } => match kind {
            ExperimentKind::Completeness {
                sweep,
                sq,
                repeats,
                workers,
            } => {
                let algorithms = apply_sweep(&sweep, &mut cfg, &mut engine)?;
                let ratios = parse_floats(&sweep.ratios, "--ratios")?;
                let sq = parse_floats(&sq, "--sq")?;
                if repeats == 0 || sq.iter().any(|s| !(0.0..=1.0).contains(s)) {
                    return Err(Failure::Usage("--repeats must be >= 1 and --sq values in [0, 1]".into()));
                }
                cfg.validate().map_err(usage)?;
                let records = run_completeness(&cfg, &engine, &ratios, &sq, &algorithms, repeats, workers)?;
                emit(sweep.out.as_deref(), &records_bytes(cli.format, &records)?)
            }
            ExperimentKind::Scalability { sweep } => {
                let algorithms = apply_sweep(&sweep, &mut cfg, &mut engine)?;
                let ratios = parse_floats(&sweep.ratios, "--ratios")?;
                cfg.validate().map_err(usage)?;
                let records = run_scalability(&cfg, &engine, &ratios, &algorithms)?;
                emit(sweep.out.as_deref(), &records_bytes(cli.format, &records)?)
            }
        },
        Command::Validate { file } => {
            let text = fs::read_to_string(&file)?;
            let report = check_scenario(&text)?;
            match report.scenario {
                Some(s) => {
                    println!("ok: {} services, {} queries", s.services.len(), s.queries.len());
                    Ok(())
                }
                None => {
                    for p in &report.problems {
                        eprintln!("{p}");
                    }
                    Err(Failure::Data(Error::InvalidArgument(format!(
                        "{} problem(s) in {}",
                        report.problems.len(),
                        file.display()
                    ))))
                }
            }
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Data(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}
