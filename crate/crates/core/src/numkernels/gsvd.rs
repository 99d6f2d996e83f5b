use num_complex::Complex64;

use super::{frobenius, svd, CMatrix, HouseholderQr};
use crate::error::{Error, Result};

/// Factors of `A = U [diag(sigma_a); 0] X` and `B = V [diag(sigma_b); 0] X`.
///
/// `U` and `V` are `N x N` unitary, `X` is `M x M` nonsingular.
#[derive(Debug, Clone)]
pub struct GsvdFactors {
    pub u: CMatrix,
    pub v: CMatrix,
    pub sigma_a: Vec<f64>,
    pub sigma_b: Vec<f64>,
    pub x: CMatrix,
}

impl GsvdFactors {
    /// `U [diag(sigma_a); 0] X`.
    pub fn reconstruct_a(&self) -> CMatrix {
        scaled_leading(&self.u, &self.sigma_a) * &self.x
    }

    /// `V [diag(sigma_b); 0] X`.
    pub fn reconstruct_b(&self) -> CMatrix {
        scaled_leading(&self.v, &self.sigma_b) * &self.x
    }

    /// Relative Frobenius residuals `(‖A - A'‖/‖A‖, ‖B - B'‖/‖B‖)`.
    pub fn residuals(&self, a: &CMatrix, b: &CMatrix) -> (f64, f64) {
        let ra = frobenius(&(self.reconstruct_a() - a)) / frobenius(a).max(f64::MIN_POSITIVE);
        let rb = frobenius(&(self.reconstruct_b() - b)) / frobenius(b).max(f64::MIN_POSITIVE);
        (ra, rb)
    }

    pub fn order(&self) -> usize {
        self.sigma_a.len()
    }
}

/// First `M` columns of `q`, column `j` scaled by `d[j]`.
fn scaled_leading(q: &CMatrix, d: &[f64]) -> CMatrix {
    let mut out = q.columns(0, d.len()).into_owned();
    for (j, &s) in d.iter().enumerate() {
        out.column_mut(j).scale_mut(s);
    }
    out
}

/// GSVD of an `N x M` pair with `N >= M`.
///
/// Route: QR of the stacked `[A; B] = [Q1; Q2] R`, then the cosine-sine step
/// from the SVD `Q2 = V0 S W*`. Both `Q1 W` and `Q2 W` have orthogonal
/// columns; a Householder QR of each yields exactly unitary `U`, `V` and the
/// diagonal cores. `X = W* R`.
pub fn gsvd(a: &CMatrix, b: &CMatrix) -> Result<GsvdFactors> {
    let (n, m) = a.shape();
    if b.shape() != (n, m) {
        return Err(Error::Dimension(format!(
            "gsvd operands differ in shape: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    if n < m || m == 0 {
        return Err(Error::Dimension(format!("gsvd needs N >= M >= 1, got {n}x{m}")));
    }

    let mut stacked = CMatrix::zeros(2 * n, m);
    stacked.view_mut((0, 0), (n, m)).copy_from(a);
    stacked.view_mut((n, 0), (n, m)).copy_from(b);
    let qr = HouseholderQr::new(&stacked);
    let r = qr.r();

    let diag_max = (0..m).map(|i| r[(i, i)].norm()).fold(0.0, f64::max);
    let tol = (2 * n) as f64 * f64::EPSILON * diag_max;
    let rank = (0..m).filter(|&i| r[(i, i)].norm() > tol).count();
    if rank < m || diag_max == 0.0 {
        return Err(Error::DegeneratePencil { rank, cols: m });
    }

    let q = qr.q_thin();
    let q1 = q.rows(0, n).into_owned();
    let q2 = q.rows(n, n).into_owned();

    let w = svd(&q2)?.v;
    let (u, sigma_a) = orthogonal_columns_to_unitary(&(&q1 * &w));
    let (v, sigma_b) = orthogonal_columns_to_unitary(&(&q2 * &w));
    let x = w.adjoint() * r;

    Ok(GsvdFactors {
        u,
        v,
        sigma_a,
        sigma_b,
        x,
    })
}

/// For `C` (`N x M`) with mutually orthogonal columns, return a unitary
/// `Q` (`N x N`) and `d >= 0` with `C ≈ Q [diag(d); 0]`.
fn orthogonal_columns_to_unitary(c: &CMatrix) -> (CMatrix, Vec<f64>) {
    let m = c.ncols();
    let qr = HouseholderQr::new(c);
    let mut q = qr.q_full();
    let r = qr.r();
    let mut d = Vec::with_capacity(m);
    for j in 0..m {
        let rjj = r[(j, j)];
        let mag = rjj.norm();
        if mag > 0.0 {
            let phase: Complex64 = rjj / mag;
            for i in 0..q.nrows() {
                q[(i, j)] *= phase;
            }
        }
        d.push(mag);
    }
    (q, d)
}
