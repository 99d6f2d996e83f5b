use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use log::info;
use mpencil::estimator::{estimate as run_estimator, RecoveredModel};
use mpencil::harness::runner::harness_options;
use mpencil::harness::tables::table_csv;
use mpencil::harness::{
    resolve_presets, run_experiment, run_table, sample_example, write_table, ExperimentConfig, MhatChoice,
    OutputFormat, RowStatus, TableResult,
};
use mpencil::{Error, SampleSet};

use crate::io::{emit, read_samples, samples_to_csv};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Input(String),
    /// A single experiment ran but the estimator failed.
    #[error("estimator failed: {0}")]
    Failed(String),
}

impl CliError {
    /// 2 for estimator failures, 3 for unreadable input, bad arguments and I/O.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 3,
            CliError::Failed(_) => 2,
            CliError::Core(e) => match e.root() {
                Error::Io(_)
                | Error::Json(_)
                | Error::Config(_)
                | Error::UnknownExample(_)
                | Error::Dimension(_)
                | Error::Sizing { .. }
                | Error::InvalidGrid(_) => 3,
                _ => 2,
            },
        }
    }
}

pub struct EstimateRequest {
    pub input: PathBuf,
    pub k0: i64,
    pub mhat: MhatChoice,
    pub cluster_tol: f64,
    pub delta: f64,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

fn recovered_csv(rec: &RecoveredModel) -> String {
    let mut out = String::from("term,multiplicity,degree,f_re,f_im,z_re,z_im,c_re,c_im\n");
    for (j, term) in rec.model.terms().iter().enumerate() {
        let z = term.zero();
        for (s, c) in term.coeffs.iter().enumerate() {
            let _ = writeln!(
                out,
                "{j},{},{s},{:e},{:e},{:e},{:e},{:e},{:e}",
                term.multiplicity(),
                term.exponent.re,
                term.exponent.im,
                z.re,
                z.im,
                c.re,
                c.im
            );
        }
    }
    out
}

pub fn estimate(req: &EstimateRequest) -> Result<(), CliError> {
    let values = read_samples(&req.input)?;
    if values.len() % 2 != 0 {
        return Err(CliError::Input(format!(
            "{}: expected an even number 2N of samples, got {}",
            req.input.display(),
            values.len()
        )));
    }
    let samples = SampleSet::from_values(req.k0, values)?;
    let n = samples.len() / 2;
    let mhat = req.mhat.resolve(n);
    let opts = harness_options(req.delta, req.cluster_tol);
    let rec = run_estimator(&samples, mhat, &opts)?;
    info!("N = {n}, M̂ = {mhat}, estimated M = {}", rec.estimated_m);
    let text = match req.format {
        OutputFormat::Csv => recovered_csv(&rec),
        OutputFormat::Json => serde_json::to_string_pretty(&rec).map_err(Error::from)? + "\n",
    };
    emit(req.out.as_deref(), &text)
}

pub fn reproduce(selector: &str, seed: u64, out_dir: &Path, timings: bool) -> Result<(), CliError> {
    for preset in resolve_presets(selector)? {
        let result = run_table(&preset, seed)?;
        for path in write_table(&result, out_dir)? {
            info!("wrote {}", path.display());
        }
        if timings {
            eprintln!("{}: {:.3} s", result.name, result.total_runtime().as_secs_f64());
        }
    }
    Ok(())
}

pub fn generate(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let (_, samples) = sample_example(cfg)?;
    emit(cfg.output.as_deref(), &samples_to_csv(&samples.values))
}

pub fn run(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let outcome = run_experiment(cfg)?;
    let text = match cfg.format {
        OutputFormat::Csv => table_csv(&TableResult {
            name: cfg.example.to_string(),
            seed: cfg.seed,
            rows: vec![outcome.clone()],
        }),
        OutputFormat::Json => serde_json::to_string_pretty(&outcome).map_err(Error::from)? + "\n",
    };
    emit(cfg.output.as_deref(), &text)?;
    if outcome.row.status == RowStatus::Failed {
        return Err(CliError::Failed(outcome.row.detail.unwrap_or_default()));
    }
    Ok(())
}
