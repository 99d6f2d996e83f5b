use num_complex::Complex64;

use super::{complete_unitary, iteration_cap, CMatrix, HouseholderQr, ZERO};
use crate::error::{Error, Result};

/// Thin SVD `A = U diag(sigma) V*` with `sigma` nonincreasing.
///
/// For an `m x n` input, `U` is `m x p` and `V` is `n x p` with `p = min(m, n)`.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: CMatrix,
    pub sigma: Vec<f64>,
    pub v: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let mut us = self.u.clone();
        for (j, &s) in self.sigma.iter().enumerate() {
            us.column_mut(j).scale_mut(s);
        }
        us * self.v.adjoint()
    }
}

/// One-sided (Hestenes) Jacobi SVD.
///
/// Tall inputs are first reduced by QR so the rotations act on a square
/// triangular factor. The sweep count is capped at `100 * n`.
pub fn svd(a: &CMatrix) -> Result<Svd> {
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Err(Error::Dimension(format!("svd of empty {m}x{n} matrix")));
    }
    if a.iter().any(|z| !z.is_finite()) {
        return Err(Error::Dimension("svd input is not finite".into()));
    }
    if m < n {
        let t = svd(&a.adjoint())?;
        return Ok(Svd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        });
    }

    let qr = HouseholderQr::new(a);
    let r = qr.r();
    let (w, v) = jacobi_sweeps(r)?;

    let mut sigma: Vec<f64> = (0..n).map(|j| w.column(j).norm()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| sigma[j].total_cmp(&sigma[i]).then(i.cmp(&j)));

    let smax = order.first().map(|&i| sigma[i]).unwrap_or(0.0);
    let negligible = smax * f64::EPSILON * (n as f64);
    let mut u_small = CMatrix::zeros(n, n);
    let mut v_sorted = CMatrix::zeros(n, n);
    let mut sorted = Vec::with_capacity(n);
    let mut defined = 0;
    for (dst, &src) in order.iter().enumerate() {
        let s = sigma[src];
        sorted.push(s);
        v_sorted.set_column(dst, &v.column(src));
        if s > negligible && s > 0.0 {
            u_small.set_column(dst, &(w.column(src) / Complex64::new(s, 0.0)));
            defined = dst + 1;
        }
    }
    sigma = sorted;
    // Columns for (numerically) zero singular values carry no information;
    // replace them with an orthonormal completion of the defined ones.
    if defined < n {
        let basis = complete_unitary(&u_small.columns(0, defined).into_owned());
        for j in defined..n {
            u_small.set_column(j, &basis.column(j));
        }
    }

    let mut u = CMatrix::zeros(m, n);
    u.view_mut((0, 0), (n, n)).copy_from(&u_small);
    qr.apply(&mut u);

    Ok(Svd {
        u,
        sigma,
        v: v_sorted,
    })
}

/// Singular values only, nonincreasing.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(svd(a)?.sigma)
}

/// Count of singular values above `max(m, n) * eps * sigma_max`.
pub fn numerical_rank(a: &CMatrix) -> Result<usize> {
    let sigma = singular_values(a)?;
    let (m, n) = a.shape();
    let tol = (m.max(n) as f64) * f64::EPSILON * sigma[0];
    Ok(sigma.iter().filter(|&&s| s > tol).count())
}

/// Orthogonalize the columns of a square matrix by plane rotations.
/// Returns `(W, V)` with `W = A V`, `V` unitary and the columns of `W` orthogonal.
fn jacobi_sweeps(mut w: CMatrix) -> Result<(CMatrix, CMatrix)> {
    let (m, n) = w.shape();
    let mut v = CMatrix::identity(n, n);
    let tol = f64::EPSILON * (m as f64);
    // Columns below this squared norm are rounding noise and are left alone.
    let negligible = (f64::EPSILON * w.norm()).powi(2);
    let cap = iteration_cap(n);

    for _sweep in 0..cap {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = ZERO;
                for i in 0..m {
                    let wp = w[(i, p)];
                    let wq = w[(i, q)];
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                let g = gamma.norm();
                if g == 0.0 || alpha.min(beta) <= negligible || g <= tol * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate column q by the phase of gamma so the 2x2 Gram matrix is real.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate(&mut w, p, q, phase, c, s);
                rotate(&mut v, p, q, phase, c, s);
            }
        }
        if !rotated {
            return Ok((w, v));
        }
    }
    Err(Error::KernelFailure {
        kernel: "jacobi svd",
        iterations: cap,
    })
}

fn rotate(a: &mut CMatrix, p: usize, q: usize, phase: Complex64, c: f64, s: f64) {
    let conj_phase = phase.conj();
    for i in 0..a.nrows() {
        let xp = a[(i, p)];
        let xq = a[(i, q)] * conj_phase;
        a[(i, p)] = xp * c - xq * s;
        a[(i, q)] = xp * s + xq * c;
    }
    // Undo the phase on column q so that V stays a plain product of unitary factors.
    for i in 0..a.nrows() {
        a[(i, q)] *= phase;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkernels::{frobenius, unitarity_defect};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rows: usize, cols: usize, seed: u64) -> CMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        CMatrix::from_fn(rows, cols, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        })
    }

    #[test]
    fn identity_has_unit_singular_values() {
        let s = svd(&CMatrix::identity(3, 3)).unwrap();
        for x in s.sigma {
            assert!((x - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rank_one_outer_product() {
        // ‖u‖ = 2, ‖v‖ = 3
        let u = CMatrix::from_column_slice(
            4,
            1,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let v = CMatrix::from_column_slice(
            3,
            1,
            &[
                Complex64::new(0.0, 3.0 / 3f64.sqrt()),
                Complex64::new(3.0 / 3f64.sqrt(), 0.0),
                Complex64::new(-3.0 / 3f64.sqrt(), 0.0),
            ],
        );
        let a = &u * v.adjoint();
        let s = svd(&a).unwrap();
        assert!((s.sigma[0] - 6.0).abs() < 1e-14);
        assert!(s.sigma[1..].iter().all(|&x| x < 1e-14));
        assert!(frobenius(&(s.reconstruct() - &a)) < 1e-13);
        assert!(unitarity_defect(&s.u) < 1e-13);
        assert_eq!(numerical_rank(&a).unwrap(), 1);
    }

    #[test]
    fn rank_one_hankel_converges() {
        let z = Complex64::new(0.6016274473794109, 0.751260647998654);
        let c = Complex64::from_polar(1.3, 0.4);
        for n in 2..6 {
            let a = CMatrix::from_fn(n, n, |i, j| c * z.powi((i + j) as i32));
            let s = svd(&a).unwrap();
            assert!(frobenius(&(s.reconstruct() - &a)) < 1e-13 * frobenius(&a));
            assert!(unitarity_defect(&s.u) < 1e-13);
            assert!(unitarity_defect(&s.v) < 1e-13);
            assert_eq!(numerical_rank(&a).unwrap(), 1);
        }
    }

    #[test]
    fn random_reconstruction() {
        for (m, n, seed) in [(8, 5, 1), (5, 8, 2), (6, 6, 3), (40, 20, 4), (1, 3, 5)] {
            let a = random(m, n, seed);
            let s = svd(&a).unwrap();
            let rel = frobenius(&(s.reconstruct() - &a)) / frobenius(&a);
            assert!(rel <= 1e-12, "{m}x{n}: {rel:e}");
            assert!(unitarity_defect(&s.u) < 1e-13);
            assert!(unitarity_defect(&s.v) < 1e-13);
            assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn zero_matrix() {
        let s = svd(&CMatrix::zeros(3, 2)).unwrap();
        assert_eq!(s.sigma, vec![0.0, 0.0]);
        assert!(unitarity_defect(&s.u) < 1e-14);
    }
}
