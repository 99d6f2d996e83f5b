use num_complex::Complex64;

use super::{CMatrix, CVector, ONE, ZERO};

/// Householder QR `A = Q R` of an `m x n` complex matrix.
///
/// Each reflector `H_k = I - tau_k v_k v_k*` is Hermitian and unitary and maps
/// the trailing part of column `k` onto a multiple of `e_1`.
#[derive(Debug, Clone)]
pub struct HouseholderQr {
    rows: usize,
    cols: usize,
    reduced: CMatrix,
    reflectors: Vec<(CVector, f64)>,
}

impl HouseholderQr {
    pub fn new(a: &CMatrix) -> Self {
        let (rows, cols) = a.shape();
        let mut r = a.clone();
        let steps = rows.min(cols);
        let mut reflectors = Vec::with_capacity(steps);
        for k in 0..steps {
            let x: CVector = r.view((k, k), (rows - k, 1)).column(0).into_owned();
            let (v, tau, alpha) = reflector(&x);
            if tau != 0.0 {
                let mut block = r.view_mut((k, k), (rows - k, cols - k));
                // block -= tau v (v* block)
                let w = block.adjoint() * &v; // (cols-k) x 1, equals (v* block)*
                for j in 0..cols - k {
                    let wj = w[j].conj() * tau;
                    for i in 0..rows - k {
                        block[(i, j)] -= v[i] * wj;
                    }
                }
                r[(k, k)] = alpha;
                for i in (k + 1)..rows {
                    r[(i, k)] = ZERO;
                }
            }
            reflectors.push((v, tau));
        }
        HouseholderQr {
            rows,
            cols,
            reduced: r,
            reflectors,
        }
    }

    /// Upper-triangular `min(m, n) x n` factor.
    pub fn r(&self) -> CMatrix {
        let p = self.rows.min(self.cols);
        let mut r = CMatrix::zeros(p, self.cols);
        for i in 0..p {
            for j in i..self.cols {
                r[(i, j)] = self.reduced[(i, j)];
            }
        }
        r
    }

    /// Apply `Q*` in place to a matrix with `m` rows.
    pub fn apply_adjoint(&self, b: &mut CMatrix) {
        for (k, (v, tau)) in self.reflectors.iter().enumerate() {
            apply_reflector(b, k, v, *tau);
        }
    }

    /// Apply `Q` in place to a matrix with `m` rows.
    pub fn apply(&self, b: &mut CMatrix) {
        for (k, (v, tau)) in self.reflectors.iter().enumerate().rev() {
            apply_reflector(b, k, v, *tau);
        }
    }

    /// Full `m x m` unitary factor.
    pub fn q_full(&self) -> CMatrix {
        let mut q = CMatrix::identity(self.rows, self.rows);
        self.apply(&mut q);
        q
    }

    /// First `min(m, n)` columns of `Q`.
    pub fn q_thin(&self) -> CMatrix {
        let p = self.rows.min(self.cols);
        let mut q = CMatrix::identity(self.rows, p);
        self.apply(&mut q);
        q
    }
}

/// Reflector for `x`: returns `(v, tau, alpha)` with `(I - tau v v*) x = alpha e_1`.
fn reflector(x: &CVector) -> (CVector, f64, Complex64) {
    let norm = x.norm();
    let mut v = x.clone();
    if norm == 0.0 || x.is_empty() {
        return (v, 0.0, ZERO);
    }
    let x0 = x[0];
    let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
    let alpha = -phase * norm;
    v[0] -= alpha;
    let vnorm2 = v.norm_squared();
    if vnorm2 == 0.0 {
        return (v, 0.0, x0);
    }
    (v, 2.0 / vnorm2, alpha)
}

fn apply_reflector(b: &mut CMatrix, k: usize, v: &CVector, tau: f64) {
    if tau == 0.0 {
        return;
    }
    let len = v.len();
    for j in 0..b.ncols() {
        let mut dot = ZERO;
        for i in 0..len {
            dot += v[i].conj() * b[(k + i, j)];
        }
        let scale = dot * tau;
        for i in 0..len {
            b[(k + i, j)] -= v[i] * scale;
        }
    }
}

/// Extend an `m x k` matrix with orthonormal columns to an `m x m` unitary
/// matrix whose first `k` columns match the input up to rounding.
pub fn complete_unitary(q: &CMatrix) -> CMatrix {
    let (m, k) = q.shape();
    let qr = HouseholderQr::new(q);
    let mut full = qr.q_full();
    let r = qr.r();
    // Q0 = Q_full R with R diagonal of unit modulus; fold the phases back.
    for j in 0..k.min(m) {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            for i in 0..m {
                full[(i, j)] *= phase;
            }
        }
    }
    full
}
