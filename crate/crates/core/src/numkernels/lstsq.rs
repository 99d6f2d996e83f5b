use super::{numerical_rank, CMatrix, CVector, HouseholderQr, ZERO};
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct LstsqSolution {
    pub x: CVector,
    /// `‖A x - b‖_2`.
    pub residual: f64,
}

/// Minimizer of `‖A x - b‖_2` for a full-column-rank `A` with at least as
/// many rows as columns, via Householder QR.
///
/// Rank is checked up front with the SVD cutoff `max(R, C) * eps * sigma_max`;
/// a deficient matrix is reported with its numerical rank.
pub fn lstsq(a: &CMatrix, b: &CVector) -> Result<LstsqSolution> {
    let (rows, cols) = a.shape();
    if b.len() != rows {
        return Err(Error::Dimension(format!(
            "right-hand side has {} entries for {rows} rows",
            b.len()
        )));
    }
    if rows < cols || cols == 0 {
        return Err(Error::Dimension(format!(
            "least squares needs rows >= cols >= 1, got {rows}x{cols}"
        )));
    }
    let rank = numerical_rank(a)?;
    if rank < cols {
        return Err(Error::IllPosed { rank, cols });
    }

    let qr = HouseholderQr::new(a);
    let mut qtb = CMatrix::from_column_slice(rows, 1, b.as_slice());
    qr.apply_adjoint(&mut qtb);
    let r = qr.r();

    let mut x = CVector::from_element(cols, ZERO);
    for i in (0..cols).rev() {
        let mut acc = qtb[(i, 0)];
        for j in (i + 1)..cols {
            acc -= r[(i, j)] * x[j];
        }
        x[i] = acc / r[(i, i)];
    }
    let residual = (a * &x - b).norm();
    Ok(LstsqSolution { x, residual })
}
