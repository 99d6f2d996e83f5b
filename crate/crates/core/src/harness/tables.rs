//! Table presets, parallel reproduction and CSV/JSON output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, MhatChoice};
use super::examples::ExampleId;
use super::runner::{run_experiment, RunOutcome};
use crate::error::{Error, Result};

/// Presets run by `all`.
pub const TABLE_NAMES: [&str; 13] = [
    "table1", "table2", "table3", "table4", "table5", "table6", "table7", "table8", "table9", "table10",
    "table11", "table12", "ex1_further",
];

/// Presets outside `all`.
pub const EXTRA_TABLES: [&str; 1] = ["ex6_union"];

const DEFAULT_NOISE: f64 = 1e-9;
const CIRCLE_NOISE: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RowSpec {
    pub example: ExampleId,
    pub n: usize,
    pub delta: f64,
    pub mhat: MhatChoice,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TablePreset {
    pub name: String,
    pub rows: Vec<RowSpec>,
}

fn sweep(example: ExampleId, ns: &[usize], delta: f64) -> Vec<RowSpec> {
    ns.iter()
        .map(|&n| RowSpec {
            example,
            n,
            delta,
            mhat: MhatChoice::Auto,
        })
        .collect()
}

fn soliton_rows(example: ExampleId) -> Vec<RowSpec> {
    let mut rows = Vec::new();
    for delta in [0.0, 1e-9, 1e-7] {
        for n in [4, 8, 16, 32, 64] {
            rows.push(RowSpec {
                example,
                n,
                delta,
                mhat: MhatChoice::Fixed(if n == 4 { 4 } else { 7 }),
            });
        }
    }
    rows
}

fn circle_rows(ids: &[ExampleId], n: usize) -> Vec<RowSpec> {
    let mut rows = Vec::new();
    for delta in [0.0, CIRCLE_NOISE] {
        for &example in ids {
            rows.push(RowSpec {
                example,
                n,
                delta,
                mhat: MhatChoice::Fixed(n),
            });
        }
    }
    rows
}

/// Look up a preset by name.
pub fn preset(name: &str) -> Result<TablePreset> {
    const SHORT: [usize; 5] = [6, 12, 24, 36, 48];
    const LONG: [usize; 5] = [5, 10, 15, 20, 50];
    let rows = match name {
        "table1" => sweep(ExampleId::Ex1, &SHORT, 0.0),
        "table2" => sweep(ExampleId::Ex1, &SHORT, DEFAULT_NOISE),
        "table3" => sweep(ExampleId::Ex2, &LONG, 0.0),
        "table4" => sweep(ExampleId::Ex2, &LONG, DEFAULT_NOISE),
        "table5" => sweep(ExampleId::Ex3, &LONG, 0.0),
        "table6" => sweep(ExampleId::Ex3, &LONG, DEFAULT_NOISE),
        "table7" => sweep(ExampleId::Ex4, &LONG, 0.0),
        "table8" => sweep(ExampleId::Ex4, &LONG, DEFAULT_NOISE),
        "table9" => {
            let mut rows = sweep(ExampleId::Ex5, &SHORT, 0.0);
            rows.extend(sweep(ExampleId::Ex5, &SHORT, DEFAULT_NOISE));
            rows
        }
        "table10" => circle_rows(&[ExampleId::Ex6R07, ExampleId::Ex6R08, ExampleId::Ex6R09], 40),
        "table11" => soliton_rows(ExampleId::SolitonA),
        "table12" => soliton_rows(ExampleId::SolitonB),
        "ex1_further" => [(6, 6), (7, 7), (12, 8)]
            .into_iter()
            .map(|(n, m)| RowSpec {
                example: ExampleId::Ex1,
                n,
                delta: 0.0,
                mhat: MhatChoice::Fixed(m),
            })
            .collect(),
        "ex6_union" => circle_rows(&[ExampleId::Ex6Union], 120),
        other => return Err(Error::Config(format!("no table preset named `{other}`"))),
    };
    Ok(TablePreset {
        name: name.to_string(),
        rows,
    })
}

/// Expand `all` / `extra` / a single name into presets.
pub fn resolve_presets(selector: &str) -> Result<Vec<TablePreset>> {
    match selector {
        "all" => TABLE_NAMES.iter().map(|n| preset(n)).collect(),
        "extra" => EXTRA_TABLES.iter().map(|n| preset(n)).collect(),
        name => Ok(vec![preset(name)?]),
    }
}

/// Per-row noise seed; rows of one table draw independent noise.
pub fn derive_seed(seed: u64, row: usize) -> u64 {
    seed ^ (row as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

#[derive(Debug, Clone, Serialize)]
pub struct TableResult {
    pub name: String,
    pub seed: u64,
    pub rows: Vec<RunOutcome>,
}

impl TableResult {
    /// Wall time summed over rows.
    pub fn total_runtime(&self) -> std::time::Duration {
        self.rows.iter().map(|r| r.row.runtime).sum()
    }
}

/// Run every row of a preset in parallel. Results keep preset order, so the
/// output depends only on `seed`.
pub fn run_table(preset: &TablePreset, seed: u64) -> Result<TableResult> {
    let rows = preset
        .rows
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            run_experiment(&ExperimentConfig {
                example: spec.example,
                n: spec.n,
                delta: spec.delta,
                seed,
                noise_seed: Some(derive_seed(seed, i)),
                mhat: spec.mhat,
                ..Default::default()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(TableResult {
        name: preset.name.clone(),
        seed,
        rows,
    })
}

/// Two significant decimals with a signed two-digit exponent, e.g. `6.77e-13`.
pub fn format_sci(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let s = format!("{x:.2e}");
    let (mantissa, exp) = s.split_once('e').expect("LowerExp always has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

pub const CSV_HEADER: &str = "example,N,delta,Mhat,e_f,e_c,e_h,M_est,status";

pub fn table_csv(result: &TableResult) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for outcome in &result.rows {
        let r = &outcome.row;
        let status = match &r.detail {
            Some(d) => format!("{:?}: {}", r.status, d.replace([',', '\n'], ";")),
            None => format!("{:?}", r.status),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.example,
            r.n,
            format_sci(r.delta),
            r.mhat,
            format_sci(r.e_f),
            r.e_c.map(format_sci).unwrap_or_else(|| "n/a".into()),
            format_sci(r.e_h),
            r.estimated_m.map(|m| m.to_string()).unwrap_or_else(|| "-".into()),
            status.to_lowercase(),
        );
    }
    out
}

/// True against recovered nodes for the circle examples, paired by the
/// matching; unmatched recovered nodes get empty truth columns.
pub fn node_plot_csv(result: &TableResult) -> String {
    let mut out = String::from("example,delta,true_re,true_im,recovered_re,recovered_im\n");
    for outcome in result.rows.iter().filter(|o| o.row.example.is_circle()) {
        let Some(rec) = &outcome.recovered else { continue };
        let est = rec.model.zeros();
        let truth = outcome.truth.zeros();
        let matching = outcome.errors.as_ref().and_then(|e| e.matching.clone());
        for (i, z) in est.iter().enumerate() {
            let t: Option<Complex64> = matching.as_ref().map(|m| truth[m[i]]);
            let (tr, ti) = match t {
                Some(t) => (format!("{:e}", t.re), format!("{:e}", t.im)),
                None => (String::new(), String::new()),
            };
            let _ = writeln!(
                out,
                "{},{},{tr},{ti},{:e},{:e}",
                outcome.row.example,
                format_sci(outcome.row.delta),
                z.re,
                z.im
            );
        }
    }
    out
}

/// Write `<name>.csv`, `<name>.json` and, for circle tables, `<name>_nodes.csv`.
pub fn write_table(result: &TableResult, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let csv = dir.join(format!("{}.csv", result.name));
    fs::write(&csv, table_csv(result))?;
    written.push(csv);
    let json = dir.join(format!("{}.json", result.name));
    fs::write(&json, serde_json::to_string_pretty(result)?)?;
    written.push(json);
    if result.rows.iter().any(|o| o.row.example.is_circle()) {
        let nodes = dir.join(format!("{}_nodes.csv", result.name));
        fs::write(&nodes, node_plot_csv(result))?;
        written.push(nodes);
    }
    Ok(written)
}
