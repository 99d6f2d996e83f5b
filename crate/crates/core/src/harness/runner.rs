//! Single-experiment runner.

use std::time::{Duration, Instant};

use log::debug;
use num_complex::Complex64;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::examples::{generate_example, marchenko_kernel, soliton_a_values, soliton_gamma, ExampleId};
use crate::error::{Error, Result};
use crate::estimator::{estimate, EstimatorOptions, RecoveredModel};
use crate::hankel::RankPolicy;
use crate::metrics::{error_report, ErrorReport};
use crate::model::{MonomialExponentialModel, SampleGrid, SampleSet};
use crate::numkernels::{lstsq, CMatrix, CVector};

/// Noise on the right-kernel samples uses a stream distinct from the left one.
const RIGHT_KERNEL_STREAM: u64 = 0x5DEE_CE66_D1CE_5EED;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Ok,
    /// Recovered structure differs from the truth; `e(f)` and `e(c)` are infinite.
    Mismatch,
    /// The estimator stopped with an error.
    Failed,
}

/// One line of a reproduced table.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub example: ExampleId,
    pub n: usize,
    pub delta: f64,
    pub mhat: usize,
    pub e_f: f64,
    /// `None` when some true coefficient is zero.
    pub e_c: Option<f64>,
    pub e_h: f64,
    pub estimated_m: Option<usize>,
    pub status: RowStatus,
    pub detail: Option<String>,
    /// Wall time of the estimator call; left out of serialized output.
    #[serde(skip)]
    pub runtime: Duration,
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaRecovery {
    pub gamma: Vec<Complex64>,
    /// Worst relative coefficient error against the true right-kernel coefficients.
    pub error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunOutcome {
    pub config: ExperimentConfig,
    pub row: TableRow,
    pub truth: MonomialExponentialModel,
    pub recovered: Option<RecoveredModel>,
    pub errors: Option<ErrorReport>,
    pub gamma_r: Option<GammaRecovery>,
}

/// Noisy samples of `cfg.example` at `k0, ..., k0 + 2N - 1`.
pub fn sample_example(cfg: &ExperimentConfig) -> Result<(MonomialExponentialModel, SampleSet)> {
    let (truth, _) = generate_example(cfg.example, cfg.seed, cfg.reading)?;
    let samples = truth
        .sample(SampleGrid::pairs(cfg.k0, cfg.n)?)
        .add_noise(cfg.delta, cfg.noise_seed())?;
    Ok((truth, samples))
}

/// Options the harness hands to the estimator for a given noise level.
pub fn harness_options(delta: f64, cluster_tol: f64) -> EstimatorOptions {
    EstimatorOptions {
        cluster_tol,
        rank_policy: if delta > 0.0 {
            RankPolicy::Noise { delta }
        } else {
            RankPolicy::MachinePrecision
        },
        ..Default::default()
    }
}

fn factorial(s: usize) -> f64 {
    (1..=s).map(|k| k as f64).product()
}

/// Least-squares fit of the right-kernel coefficients `Γ_js` on the basis
/// `e^{a_j k} k^s / s!`, given the bound-state parameters `(a_j, m_j)`.
pub fn recover_gamma_r(bound_states: &[(Complex64, usize)], samples: &SampleSet) -> Result<Vec<Complex64>> {
    let nodes: Vec<i64> = samples.grid.nodes().collect();
    let cols: usize = bound_states.iter().map(|&(_, m)| m).sum();
    let mut k = CMatrix::zeros(nodes.len(), cols);
    for (row, &node) in nodes.iter().enumerate() {
        let x = node as f64;
        let mut col = 0;
        for &(a, m) in bound_states {
            let e = (a * x).exp();
            for s in 0..m {
                k[(row, col)] = e * x.powi(s as i32) / factorial(s);
                col += 1;
            }
        }
    }
    let sol = lstsq(&k, &CVector::from_column_slice(&samples.values))?;
    Ok(sol.x.iter().copied().collect())
}

fn soliton_right(cfg: &ExperimentConfig, recovered: &MonomialExponentialModel, matching: &[usize]) -> Result<GammaRecovery> {
    let truth_states = soliton_a_values(cfg.example);
    let gamma_true = soliton_gamma();
    let omega_r = marchenko_kernel(&truth_states, &gamma_true, 1.0)?;
    let n = cfg.n as i64;
    let samples = omega_r
        .sample(SampleGrid::pairs(-2 * n, cfg.n)?)
        .add_noise(cfg.delta, cfg.noise_seed() ^ RIGHT_KERNEL_STREAM)?;

    let states: Vec<(Complex64, usize)> = recovered
        .terms()
        .iter()
        .map(|t| (-t.exponent, t.multiplicity()))
        .collect();
    let gamma = recover_gamma_r(&states, &samples)?;

    let offsets: Vec<usize> = truth_states
        .iter()
        .scan(0, |acc, &(_, m)| {
            let start = *acc;
            *acc += m;
            Some(start)
        })
        .collect();
    let mut error: f64 = 0.0;
    let mut at = 0;
    for (i, &j) in matching.iter().enumerate() {
        for s in 0..states[i].1 {
            let g_true = gamma_true[offsets[j] + s];
            error = error.max((Complex64::new(1.0, 0.0) - gamma[at + s] / g_true).norm());
        }
        at += states[i].1;
    }
    Ok(GammaRecovery { gamma, error })
}

fn failed_row(cfg: &ExperimentConfig, err: &Error, runtime: Duration) -> TableRow {
    TableRow {
        example: cfg.example,
        n: cfg.n,
        delta: cfg.delta,
        mhat: cfg.mhat_value(),
        e_f: f64::INFINITY,
        e_c: Some(f64::INFINITY),
        e_h: f64::INFINITY,
        estimated_m: None,
        status: RowStatus::Failed,
        detail: Some(err.to_string()),
        runtime,
    }
}

/// Generate, estimate and score one configuration.
///
/// Estimator failures become a `Failed` row rather than an error; only an
/// unusable configuration (unknown example, bad sizes) is returned as `Err`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let (truth, samples) = sample_example(cfg)?;
    let opts = harness_options(cfg.delta, cfg.cluster_tol);

    let start = Instant::now();
    let result = estimate(&samples, cfg.mhat_value(), &opts);
    let runtime = start.elapsed();

    let recovered = match result {
        Ok(r) => r,
        Err(err) => {
            debug!("{} N={} delta={}: {err}", cfg.example, cfg.n, cfg.delta);
            return Ok(RunOutcome {
                config: cfg.clone(),
                row: failed_row(cfg, &err, runtime),
                truth,
                recovered: None,
                errors: None,
                gamma_r: None,
            });
        }
    };

    let report = error_report(&recovered.model, &truth, cfg.domain_bound());
    let gamma_r = match (&report.matching, cfg.example.is_soliton()) {
        (Some(matching), true) => match soliton_right(cfg, &recovered.model, matching) {
            Ok(g) => Some(g),
            Err(err) => {
                debug!("right-kernel fit failed: {err}");
                None
            }
        },
        _ => None,
    };
    let row = TableRow {
        example: cfg.example,
        n: cfg.n,
        delta: cfg.delta,
        mhat: cfg.mhat_value(),
        e_f: report.e_f,
        e_c: report.e_c,
        e_h: report.e_h,
        estimated_m: Some(recovered.estimated_m),
        status: if report.mismatch.is_some() {
            RowStatus::Mismatch
        } else {
            RowStatus::Ok
        },
        detail: report.mismatch.clone(),
        runtime,
    };
    Ok(RunOutcome {
        config: cfg.clone(),
        row,
        truth,
        recovered: Some(recovered),
        errors: Some(report),
        gamma_r,
    })
}
