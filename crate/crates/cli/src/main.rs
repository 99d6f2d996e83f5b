use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::{debug, info};
use mpencil::harness::{ExampleId, ExperimentConfig, ExponentReading, MhatChoice, OutputFormat};

mod commands;
mod io;

use commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "mpencil", version, about = "Matrix-pencil estimation of monomial-exponential sums")]
struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate a model from a CSV of complex samples (`re,im` per line).
    Estimate(EstimateArgs),
    /// Reproduce one table preset, `all`, or `extra`.
    Reproduce(ReproduceArgs),
    /// Write samples of a registered example as `re,im` lines.
    Generate(GenerateArgs),
    /// Run a single experiment described by a config file and/or flags.
    Run(RunArgs),
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long)]
    input: PathBuf,
    /// Index of the first sample.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    k0: i64,
    #[arg(long, default_value = "auto")]
    mhat: MhatChoice,
    #[arg(long, default_value_t = 1e-3)]
    cluster_tol: f64,
    /// Known noise amplitude; raises the rank cutoff to the noise floor.
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct ReproduceArgs {
    /// `table1` ... `table12`, `ex1_further`, `ex6_union`, `all` or `extra`.
    table: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "results")]
    out_dir: PathBuf,
    /// Log per-table wall time (never written to the output files).
    #[arg(long)]
    timings: bool,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    example: ExampleId,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    k0: i64,
    #[arg(long, default_value = "exponents")]
    reading: ExponentReading,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Flat `key = value` file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    example: Option<ExampleId>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    mhat: Option<MhatChoice>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    k0: Option<i64>,
    #[arg(long)]
    reading: Option<ExponentReading>,
    #[arg(long)]
    cluster_tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<OutputFormat>,
}

impl RunArgs {
    fn into_config(self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(v) = self.example {
            cfg.example = v;
        }
        if let Some(v) = self.n {
            cfg.n = v;
        }
        if let Some(v) = self.delta {
            cfg.delta = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.mhat {
            cfg.mhat = v;
        }
        if self.b.is_some() {
            cfg.b = self.b;
        }
        if let Some(v) = self.k0 {
            cfg.k0 = v;
        }
        if let Some(v) = self.reading {
            cfg.reading = v;
        }
        if let Some(v) = self.cluster_tol {
            cfg.cluster_tol = v;
        }
        if self.out.is_some() {
            cfg.output = self.out;
        }
        if let Some(v) = self.format {
            cfg.format = v;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Estimate(a) => commands::estimate(&commands::EstimateRequest {
            input: a.input,
            k0: a.k0,
            mhat: a.mhat,
            cluster_tol: a.cluster_tol,
            delta: a.delta,
            out: a.out,
            format: a.format,
        }),
        Command::Reproduce(a) => commands::reproduce(&a.table, a.seed, &a.out_dir, a.timings),
        Command::Generate(a) => {
            let cfg = ExperimentConfig {
                example: a.example,
                n: a.n,
                delta: a.delta,
                seed: a.seed,
                k0: a.k0,
                reading: a.reading,
                mhat: MhatChoice::Fixed(1),
                output: a.out,
                ..Default::default()
            };
            cfg.validate()?;
            commands::generate(&cfg)
        }
        Command::Run(a) => commands::run(&a.into_config()?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match dispatch(cli) {
        Ok(()) => {
            info!("done");
            ExitCode::SUCCESS
        }
        Err(err) => {
            debug!("{err:?}");
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
