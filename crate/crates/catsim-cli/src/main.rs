//! `catsim` command-line scenario runner.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use catsim::experiment::{
    basis_dump, rate_table, rate_table_row, run_scenario, RateRow, ScenarioConfig, ScenarioOutput, VERSION,
};
use catsim::Error;

use config::{ConfigError, Run, RunFile};

const EXIT_FIT_FAILURE: u8 = 2;
const EXIT_DIMENSION_CAP: u8 = 3;
const EXIT_CONFIG: u8 = 4;
const EXIT_OTHER: u8 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "catsim",
    version,
    about = "Kerr cat qubit scenarios with filtered engineered dissipation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output directory.
    #[arg(long, global = true, default_value = "results")]
    out: PathBuf,

    /// Worker threads for sweeps; all cores when absent.
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Multiplies the fit residual tolerance of every scenario.
    #[arg(long, global = true, default_value_t = 1.0)]
    tolerance_scale: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Runs the configured scenario, once per sweep point.
    Run { config: PathBuf },
    /// Simulated and analytic bit-flip rates over the sweep.
    Rates { config: PathBuf },
    /// Writes per-level Kerr basis data.
    DumpBasis { config: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Sim(Error),
    Io(std::io::Error),
    Fit(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Sim(e) => sim_code(e),
            Failure::Io(_) => EXIT_OTHER,
            Failure::Fit(_) => EXIT_FIT_FAILURE,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "config error: {m}"),
            Failure::Sim(e) => write!(f, "{e}"),
            Failure::Io(e) => write!(f, "i/o error: {e}"),
            Failure::Fit(m) => write!(f, "fit failure: {m}"),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.0)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

fn sim_code(e: &Error) -> u8 {
    match e {
        Error::DimensionCap { .. } => EXIT_DIMENSION_CAP,
        Error::FitFailure(_) => EXIT_FIT_FAILURE,
        Error::InvalidParameter(_) => EXIT_CONFIG,
        _ => EXIT_OTHER,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { config } => cmd_run(&cli, config),
        Command::Rates { config } => cmd_rates(&cli, config),
        Command::DumpBasis { config } => cmd_dump_basis(&cli, config),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("catsim: {f}");
            ExitCode::from(f.code())
        }
    }
}

fn load(cli: &Cli, path: &Path) -> Result<Run, Failure> {
    Ok(RunFile::load(path)?.resolve(cli.tolerance_scale)?)
}

fn points(run: &Run) -> Result<Vec<ScenarioConfig>, Failure> {
    match &run.sweep {
        Some(s) => s.expand(&run.base).map_err(|e| Failure::Config(e.to_string())),
        None => Ok(vec![run.base.clone()]),
    }
}

/// Maps `f` over `items` on a pool of `workers` threads, preserving order.
fn parallel_map<T, R, F>(workers: Option<usize>, items: &[T], f: F) -> Result<Vec<R>, Failure>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            return Err(Failure::Config("--workers must be at least 1".into()));
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Failure::Config(e.to_string()))?;
    Ok(pool.install(|| items.par_iter().map(&f).collect()))
}

fn cmd_run(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let run = load(cli, path)?;
    let configs = points(&run)?;
    let results: Vec<catsim::Result<ScenarioOutput>> = parallel_map(cli.workers, &configs, run_scenario)?;
    let many = configs.len() > 1;
    let mut first_failure = None;
    for (i, res) in results.into_iter().enumerate() {
        let stem = if many {
            format!("{}_{i:02}", run.output)
        } else {
            run.output.clone()
        };
        match res {
            Ok(out) => {
                output::write_outputs(&cli.out, &stem, &out.table, &out.summary)?;
                report(&stem, &out);
                if let Some(e) = &out.summary.fit_error {
                    first_failure.get_or_insert(Failure::Fit(format!("{stem}: {e}")));
                }
            }
            Err(e) => {
                eprintln!("{stem}: {e}");
                first_failure.get_or_insert(Failure::Sim(e));
            }
        }
    }
    first_failure.map_or(Ok(()), Err)
}

fn report(stem: &str, out: &ScenarioOutput) {
    if out.summary.simulated.is_empty() {
        println!("{stem}: {} rows", out.table.rows.len());
        return;
    }
    let values: Vec<String> = out
        .summary
        .simulated
        .iter()
        .map(|(k, v)| format!("{k}={v:.6e}"))
        .collect();
    println!("{stem}: {}", values.join(" "));
}

#[derive(Serialize)]
struct RatesSummary<'a> {
    version: &'a str,
    base: &'a ScenarioConfig,
    points: usize,
    errors: Vec<(usize, String)>,
    rows: Vec<RateRow>,
}

fn cmd_rates(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let run = load(cli, path)?;
    let configs = points(&run)?;
    let results = parallel_map(cli.workers, &configs, rate_table_row)?;
    let mut rows = Vec::with_capacity(results.len());
    let mut errors = Vec::new();
    let mut first_failure = None;
    for (i, (cfg, res)) in configs.iter().zip(results).enumerate() {
        match res {
            Ok(r) => rows.push(r),
            Err(e) => {
                errors.push((i, e.to_string()));
                rows.push(RateRow {
                    alpha2: cfg.params.alpha2,
                    modes: cfg.params.modes,
                    kappa1_eng: cfg.params.kappa1_eng.unwrap_or(0.0),
                    n_th: cfg.params.n_th,
                    gamma_x_sim: f64::NAN,
                    gamma_x_analytic: f64::NAN,
                    gamma_x_simplified: f64::NAN,
                    chi1_numeric: f64::NAN,
                    chi1_formula: f64::NAN,
                    kappa1_eng_resolved: f64::NAN,
                    kappa_ind: f64::NAN,
                });
                first_failure.get_or_insert(Failure::Sim(e));
            }
        }
    }
    std::fs::create_dir_all(&cli.out)?;
    let stem = format!("{}_rates", run.output);
    output::write_table(&cli.out.join(format!("{stem}.csv")), &rate_table(&rows))?;
    let summary = RatesSummary {
        version: VERSION,
        base: &run.base,
        points: configs.len(),
        errors,
        rows,
    };
    output::write_json(&cli.out.join(format!("{stem}.json")), &summary)?;
    println!("{stem}: {} points", configs.len());
    first_failure.map_or(Ok(()), Err)
}

fn cmd_dump_basis(cli: &Cli, path: &Path) -> Result<(), Failure> {
    let run = load(cli, path)?;
    let table = basis_dump(&run.base.params, &run.base.model).map_err(Failure::Sim)?;
    std::fs::create_dir_all(&cli.out)?;
    let stem = format!("{}_basis", run.output);
    output::write_table(&cli.out.join(format!("{stem}.csv")), &table)?;
    println!("{stem}: {} levels", table.rows.len());
    Ok(())
}
