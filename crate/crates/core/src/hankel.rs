//! Shifted Hankel pairs and numerical-rank order estimation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::SampleSet;
use crate::numkernels::{singular_values, svd, CMatrix};

/// The `N x M̂` Hankel windows at `k0` and `k0 + 1`:
/// `h0[i][j] = h(k0 + i + j)`, `h1[i][j] = h(k0 + 1 + i + j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelPair {
    pub h0: CMatrix,
    pub h1: CMatrix,
    pub k0: i64,
}

impl HankelPair {
    pub fn rows(&self) -> usize {
        self.h0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.h0.ncols()
    }

    /// Keep the leading `cols` columns of both windows.
    pub fn truncate(&self, cols: usize) -> Result<HankelPair> {
        if cols == 0 || cols > self.cols() {
            return Err(Error::Dimension(format!(
                "cannot truncate {} columns to {cols}",
                self.cols()
            )));
        }
        Ok(HankelPair {
            h0: self.h0.columns(0, cols).into_owned(),
            h1: self.h1.columns(0, cols).into_owned(),
            k0: self.k0,
        })
    }

    /// Restrict both windows to the span of the orthonormal columns of
    /// `basis` (`M̂ x M`): returns `(H0 W, H1 W)`.
    pub fn project(&self, basis: &CMatrix) -> Result<HankelPair> {
        if basis.nrows() != self.cols() || basis.ncols() == 0 || basis.ncols() > self.cols() {
            return Err(Error::Dimension(format!(
                "projection basis is {}x{} for a pair with {} columns",
                basis.nrows(),
                basis.ncols(),
                self.cols()
            )));
        }
        Ok(HankelPair {
            h0: &self.h0 * basis,
            h1: &self.h1 * basis,
            k0: self.k0,
        })
    }

    /// Project onto the `m` dominant right singular vectors of `h0`.
    pub fn dominant_subspace(&self, m: usize) -> Result<HankelPair> {
        if m == 0 || m > self.cols() {
            return Err(Error::Dimension(format!(
                "cannot keep {m} of {} singular directions",
                self.cols()
            )));
        }
        let dec = svd(&self.h0)?;
        self.project(&dec.v.columns(0, m).into_owned())
    }
}

/// Assemble the pair from the first `rows + cols` samples.
pub fn build_hankel_pair(samples: &SampleSet, rows: usize, cols: usize) -> Result<HankelPair> {
    if cols == 0 || rows < cols {
        return Err(Error::Dimension(format!(
            "Hankel pair needs N >= M̂ >= 1, got N = {rows}, M̂ = {cols}"
        )));
    }
    let required = rows + cols;
    if samples.len() < required {
        return Err(Error::Sizing {
            required,
            available: samples.len(),
        });
    }
    let h = &samples.values;
    Ok(HankelPair {
        h0: CMatrix::from_fn(rows, cols, |i, j| h[i + j]),
        h1: CMatrix::from_fn(rows, cols, |i, j| h[i + j + 1]),
        k0: samples.grid.k0,
    })
}

/// Singular-value cutoff used to count the model order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum RankPolicy {
    /// `sigma_i > max(rows, cols) * eps * sigma_max`.
    #[default]
    MachinePrecision,
    /// Noise of amplitude `delta`: floor `10 * delta * sqrt(rows * cols)`.
    Noise { delta: f64 },
    /// Caller-supplied absolute floor.
    Floor { tau: f64 },
}

impl RankPolicy {
    /// Effective threshold for a `rows x cols` matrix with largest singular value `sigma_max`.
    ///
    /// Noise-aware floors never drop below the machine-precision cutoff.
    pub fn threshold(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        let machine = (rows.max(cols) as f64) * f64::EPSILON * sigma_max;
        match *self {
            RankPolicy::MachinePrecision => machine,
            RankPolicy::Noise { delta } => machine.max(10.0 * delta * ((rows * cols) as f64).sqrt()),
            RankPolicy::Floor { tau } => machine.max(tau),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub order: usize,
    pub threshold: f64,
    pub singular_values: Vec<f64>,
}

/// Number of singular values of `h` above the policy threshold.
pub fn estimate_order(h: &CMatrix, policy: RankPolicy) -> Result<OrderEstimate> {
    let sigma = singular_values(h)?;
    let threshold = policy.threshold(h.nrows(), h.ncols(), sigma[0]);
    let order = sigma.iter().filter(|&&s| s > threshold).count();
    if order == 0 {
        return Err(Error::OrderZero {
            count: sigma.len(),
            threshold,
        });
    }
    Ok(OrderEstimate {
        order,
        threshold,
        singular_values: sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{MonomialExponentialModel, SampleGrid, Term};
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn two_by_two_pair() {
        let s = SampleSet::from_values(0, vec![c(1.0), c(2.0), c(3.0), c(4.0)]).unwrap();
        let p = build_hankel_pair(&s, 2, 2).unwrap();
        assert_eq!(p.h0, CMatrix::from_row_slice(2, 2, &[c(1.0), c(2.0), c(2.0), c(3.0)]));
        assert_eq!(p.h1, CMatrix::from_row_slice(2, 2, &[c(2.0), c(3.0), c(3.0), c(4.0)]));
    }

    #[test]
    fn shift_structure() {
        let s = SampleSet::from_values(0, (0..5).map(|k| c(k as f64 * 1.5 + 0.25)).collect()).unwrap();
        let p = build_hankel_pair(&s, 3, 2).unwrap();
        assert_eq!(p.h0.column(1), p.h1.column(0));
    }

    #[test]
    fn sizing_error_names_requirement() {
        let s = SampleSet::from_values(0, vec![c(1.0); 5]).unwrap();
        match build_hankel_pair(&s, 3, 3) {
            Err(Error::Sizing { required, available }) => {
                assert_eq!(required, 6);
                assert_eq!(available, 5);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(build_hankel_pair(&s, 2, 3).is_err());
    }

    #[test]
    fn order_of_two_exponentials() {
        let m = MonomialExponentialModel::new(vec![
            Term::simple(c(2f64.ln()), c(1.0)),
            Term::simple(c(3f64.ln()), c(1.0)),
        ])
        .unwrap();
        let s = m.sample(SampleGrid::new(0, 12).unwrap());
        let p = build_hankel_pair(&s, 6, 4).unwrap();
        let est = estimate_order(&p.h0, RankPolicy::MachinePrecision).unwrap();
        assert_eq!(est.order, 2);
        assert_eq!(est.singular_values.len(), 4);
    }

    #[test]
    fn full_basis_projection_keeps_the_pencil() {
        let s = SampleSet::from_values(0, (0..10).map(|k| c((k as f64 * 0.7).sin())).collect()).unwrap();
        let p = build_hankel_pair(&s, 5, 4).unwrap();
        let id = CMatrix::identity(4, 4);
        assert_eq!(p.project(&id).unwrap(), p);
        assert!(p.project(&CMatrix::identity(3, 3)).is_err());
        let q = p.dominant_subspace(2).unwrap();
        assert_eq!((q.rows(), q.cols()), (5, 2));
    }

    #[test]
    fn zero_matrix_has_no_order() {
        assert!(matches!(
            estimate_order(&CMatrix::zeros(4, 3), RankPolicy::MachinePrecision),
            Err(Error::OrderZero { .. })
        ));
    }

    #[test]
    fn noise_floor_is_never_below_machine_cutoff() {
        let p = RankPolicy::Noise { delta: 0.0 };
        assert_eq!(p.threshold(10, 4, 3.0), RankPolicy::MachinePrecision.threshold(10, 4, 3.0));
        let p = RankPolicy::Noise { delta: 1e-9 };
        assert!((p.threshold(24, 10, 1.0) - 10.0 * 1e-9 * 240f64.sqrt()).abs() < 1e-20);
    }
}
