//! Relative error measures of a recovered model against ground truth.
//!
//! `e(f) = max_j |1 - f_j / f*_j|`, `e(c) = max_{j,s} |1 - c_js / c*_js|` and
//! `e(h) = max_{x in X} |1 - h(x) / h*(x)|` with `X = {i b / 50 : i = 1..50}`.
//! The maxima over `j` need a pairing of estimated and true terms; it is the
//! minimum-cost assignment in zero space among terms of equal multiplicity.

use std::f64::consts::PI;

use log::warn;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::MonomialExponentialModel;

/// Number of evaluation points in the `e(h)` grid.
pub const EVAL_POINTS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    pub e_f: f64,
    /// `None` when some true coefficient is zero.
    pub e_c: Option<f64>,
    pub e_h: f64,
    /// `matching[i]` is the true term paired with estimated term `i`.
    pub matching: Option<Vec<usize>>,
    pub b: f64,
    /// Set when the models differ in term count or multiplicity multiset.
    pub mismatch: Option<String>,
}

/// Pair estimated terms with true terms.
///
/// Fails with a description when the term counts or multiplicity multisets differ.
pub fn match_parameters(
    estimated: &MonomialExponentialModel,
    truth: &MonomialExponentialModel,
) -> std::result::Result<Vec<usize>, String> {
    if estimated.len() != truth.len() {
        return Err(format!(
            "estimated {} terms, truth has {}",
            estimated.len(),
            truth.len()
        ));
    }
    let mut em = estimated.multiplicities();
    let mut tm = truth.multiplicities();
    em.sort_unstable();
    tm.sort_unstable();
    if em != tm {
        return Err(format!("multiplicities {em:?} vs {tm:?}"));
    }

    let ez = estimated.zeros();
    let tz = truth.zeros();
    let emult = estimated.multiplicities();
    let tmult = truth.multiplicities();
    let mut matching = vec![usize::MAX; ez.len()];
    let mut levels: Vec<usize> = tm.clone();
    levels.dedup();
    for level in levels {
        let rows: Vec<usize> = (0..ez.len()).filter(|&i| emult[i] == level).collect();
        let cols: Vec<usize> = (0..tz.len()).filter(|&j| tmult[j] == level).collect();
        let cost: Vec<Vec<f64>> = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| (ez[i] - tz[j]).norm()).collect())
            .collect();
        for (r, c) in min_cost_assignment(&cost).into_iter().enumerate() {
            matching[rows[r]] = cols[c];
        }
    }
    Ok(matching)
}

/// Total `|z_est - z_true|` of a matching.
pub fn matching_cost(
    estimated: &MonomialExponentialModel,
    truth: &MonomialExponentialModel,
    matching: &[usize],
) -> f64 {
    let ez = estimated.zeros();
    let tz = truth.zeros();
    matching.iter().enumerate().map(|(i, &j)| (ez[i] - tz[j]).norm()).sum()
}

/// Hungarian algorithm (shortest augmenting paths with potentials) for a
/// square cost matrix. Returns `assignment[row] = col`.
pub fn min_cost_assignment(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-based internal arrays; index 0 is the virtual source column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let i0 = owner[col0];
            let mut delta = f64::INFINITY;
            let mut col1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let reduced = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if reduced < minv[j] {
                    minv[j] = reduced;
                    way[j] = col0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    col1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let prev = way[col0];
            owner[col0] = owner[prev];
            col0 = prev;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    assignment
}

/// `e(f)` after moving each estimated exponent by the multiple of `2πi`
/// closest to its true counterpart.
pub fn error_f(
    estimated: &MonomialExponentialModel,
    truth: &MonomialExponentialModel,
    matching: &[usize],
) -> f64 {
    matching
        .iter()
        .enumerate()
        .map(|(i, &j)| {
            let f = estimated.terms()[i].exponent;
            let f_true = truth.terms()[j].exponent;
            let turns = ((f_true.im - f.im) / (2.0 * PI)).round();
            let f = f + Complex64::new(0.0, 2.0 * PI * turns);
            (Complex64::new(1.0, 0.0) - f / f_true).norm()
        })
        .fold(0.0, f64::max)
}

/// `e(c)` over all matched coefficient pairs of equal degree.
pub fn error_c(
    estimated: &MonomialExponentialModel,
    truth: &MonomialExponentialModel,
    matching: &[usize],
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (i, &j) in matching.iter().enumerate() {
        let est = &estimated.terms()[i].coeffs;
        let tru = &truth.terms()[j].coeffs;
        for (s, (&c, &c_true)) in est.iter().zip(tru).enumerate() {
            if c_true == Complex64::new(0.0, 0.0) {
                return Err(Error::InvalidModel(format!(
                    "true coefficient c[{j}][{s}] is zero; e(c) is undefined"
                )));
            }
            worst = worst.max((Complex64::new(1.0, 0.0) - c / c_true).norm());
        }
    }
    Ok(worst)
}

/// Evaluation nodes `i b / 50`, `i = 1..=50`.
pub fn evaluation_grid(b: f64) -> Vec<f64> {
    (1..=EVAL_POINTS).map(|i| i as f64 * b / EVAL_POINTS as f64).collect()
}

/// `e(h)` on the grid for domain `[0, b]`; points where the truth vanishes are skipped.
pub fn error_h(estimated: &MonomialExponentialModel, truth: &MonomialExponentialModel, b: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for x in evaluation_grid(b) {
        let h_true = truth.evaluate_real(x);
        if h_true == Complex64::new(0.0, 0.0) {
            warn!("true sum vanishes at x = {x}; point excluded from e(h)");
            continue;
        }
        let h = estimated.evaluate_real(x);
        worst = worst.max((Complex64::new(1.0, 0.0) - h / h_true).norm());
    }
    worst
}

/// All three errors. Structural mismatches give infinite `e(f)`/`e(c)` and
/// a diagnostic instead of an error; `e(h)` needs no pairing and is always computed.
pub fn error_report(
    estimated: &MonomialExponentialModel,
    truth: &MonomialExponentialModel,
    b: f64,
) -> ErrorReport {
    let e_h = error_h(estimated, truth, b);
    match match_parameters(estimated, truth) {
        Ok(matching) => ErrorReport {
            e_f: error_f(estimated, truth, &matching),
            e_c: error_c(estimated, truth, &matching).ok(),
            e_h,
            matching: Some(matching),
            b,
            mismatch: None,
        },
        Err(why) => ErrorReport {
            e_f: f64::INFINITY,
            e_c: Some(f64::INFINITY),
            e_h,
            matching: None,
            b,
            mismatch: Some(why),
        },
    }
}
