use num_complex::Complex64;

use super::{iteration_cap, CMatrix, ONE, ZERO};
use crate::error::{Error, Result};

/// Eigenvalues of a square complex matrix, with algebraic multiplicity.
///
/// Balancing by powers of two, Householder reduction to upper Hessenberg
/// form, then single-shift QR with Wilkinson shifts and deflation. At most
/// `100 * n` QR steps are taken in total.
pub fn eigenvalues(a: &CMatrix) -> Result<Vec<Complex64>> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(Error::Dimension(format!(
            "eigenvalues need a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if a.iter().any(|z| !z.is_finite()) {
        return Err(Error::Dimension("eigenvalue input is not finite".into()));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);
    hessenberg_qr(h)
}

/// Companion matrix of the monic polynomial `z^M + p_{M-1} z^{M-1} + .. + p_0`,
/// given `p = [p_0, .., p_{M-1}]`: ones on the subdiagonal, `-p` in the last column.
pub fn companion_matrix(p: &[Complex64]) -> CMatrix {
    let m = p.len();
    let mut c = CMatrix::zeros(m, m);
    for i in 1..m {
        c[(i, i - 1)] = ONE;
    }
    for (i, &pi) in p.iter().enumerate() {
        c[(i, m - 1)] = -pi;
    }
    c
}

fn abs1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity by powers of two equalizing row and column norms.
fn balance(a: &mut CMatrix) {
    let n = a.nrows();
    const RADIX: f64 = 2.0;
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 64 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += abs1(a[(j, i)]);
                    r += abs1(a[(i, j)]);
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            while cc < r / RADIX {
                f *= RADIX;
                cc *= RADIX * RADIX;
            }
            while cc > r * RADIX {
                f /= RADIX;
                cc /= RADIX * RADIX;
            }
            if (cc + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    a[(i, j)] /= f;
                }
                for j in 0..n {
                    a[(j, i)] *= f;
                }
            }
        }
    }
}

/// In-place unitary reduction to upper Hessenberg form.
fn hessenberg(a: &mut CMatrix) {
    let n = a.nrows();
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let len = n - k - 1;
        let mut v: Vec<Complex64> = (0..len).map(|i| a[(k + 1 + i, k)]).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == 0.0 { ONE } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let tau = 2.0 / vnorm2;

        // Left: rows k+1.., all columns from k.
        for j in k..n {
            let mut dot = ZERO;
            for i in 0..len {
                dot += v[i].conj() * a[(k + 1 + i, j)];
            }
            let s = dot * tau;
            for i in 0..len {
                a[(k + 1 + i, j)] -= v[i] * s;
            }
        }
        // Right: all rows, columns k+1..
        for i in 0..n {
            let mut dot = ZERO;
            for j in 0..len {
                dot += a[(i, k + 1 + j)] * v[j];
            }
            let s = dot * tau;
            for j in 0..len {
                a[(i, k + 1 + j)] -= s * v[j].conj();
            }
        }
        a[(k + 1, k)] = alpha;
        for i in (k + 2)..n {
            a[(i, k)] = ZERO;
        }
    }
}

/// Givens rotation `[c s; -conj(s) c]` mapping `(x, y)` to `(r, 0)` with real `c`.
fn givens(x: Complex64, y: Complex64) -> (f64, Complex64) {
    let ax = x.norm();
    let ay = y.norm();
    if ay == 0.0 {
        return (1.0, ZERO);
    }
    if ax == 0.0 {
        return (0.0, ONE);
    }
    let r = ax.hypot(ay);
    let c = ax / r;
    let s = (x / ax) * y.conj() / r;
    (c, s)
}

fn hessenberg_qr(mut h: CMatrix) -> Result<Vec<Complex64>> {
    let n = h.nrows();
    let cap = iteration_cap(n);
    let mut eigs = vec![ZERO; n];
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;

    loop {
        // Find the start of the active unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = abs1(h[(lo, lo - 1)]);
            let mut scale = abs1(h[(lo, lo)]) + abs1(h[(lo - 1, lo - 1)]);
            if scale == 0.0 {
                scale = (lo.saturating_sub(1)..=hi)
                    .flat_map(|i| (lo.saturating_sub(1)..=hi).map(move |j| (i, j)))
                    .map(|(i, j)| abs1(h[(i, j)]))
                    .sum();
            }
            if sub <= f64::EPSILON * scale || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }

        if lo == hi {
            eigs[hi] = h[(hi, hi)];
            since_deflation = 0;
            if hi == 0 {
                break;
            }
            hi -= 1;
            continue;
        }

        total += 1;
        since_deflation += 1;
        if total > cap {
            return Err(Error::KernelFailure {
                kernel: "hessenberg qr",
                iterations: cap,
            });
        }

        let shift = if since_deflation.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(0.75 * abs1(h[(hi, hi - 1)]), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for i in lo..=hi {
            h[(i, i)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = x * c + s * y;
                h[(k + 1, j)] = -s.conj() * x + y * c;
            }
            h[(k + 1, k)] = ZERO;
            rotations.push((k, c, s));
        }
        for &(k, c, s) in &rotations {
            let top = (k + 2).min(hi);
            for i in lo..=top {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = x * c + y * s.conj();
                h[(i, k + 1)] = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += shift;
        }
    }
    Ok(eigs)
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let l1 = mid + disc;
    let l2 = mid - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn companion_of_simple_roots() {
        // (z - 2)(z - 3) = z^2 - 5z + 6
        let e = sorted(eigenvalues(&companion_matrix(&[c(6.0, 0.0), c(-5.0, 0.0)])).unwrap());
        assert!((e[0] - c(2.0, 0.0)).norm() < 1e-13);
        assert!((e[1] - c(3.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn companion_of_double_root() {
        // (z - 2)^2 = z^2 - 4z + 4
        let e = eigenvalues(&companion_matrix(&[c(4.0, 0.0), c(-4.0, 0.0)])).unwrap();
        for z in e {
            assert!((z - c(2.0, 0.0)).norm() < 1e-7);
        }
    }

    #[test]
    fn trace_of_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in [1, 2, 3, 7, 20, 40] {
            let a = CMatrix::from_fn(n, n, |_, _| c(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            let e = eigenvalues(&a).unwrap();
            assert_eq!(e.len(), n);
            let sum: Complex64 = e.iter().sum();
            let tr = a.trace();
            assert!((sum - tr).norm() <= 1e-10 * tr.norm().max(1.0), "n = {n}");
        }
    }

    #[test]
    fn triangular_and_diagonal() {
        let mut a = CMatrix::zeros(3, 3);
        a[(0, 0)] = c(1.0, 1.0);
        a[(1, 1)] = c(-2.0, 0.0);
        a[(2, 2)] = c(0.0, 3.0);
        a[(0, 2)] = c(5.0, 0.0);
        let e = sorted(eigenvalues(&a).unwrap());
        assert!((e[0] - c(-2.0, 0.0)).norm() < 1e-14);
        assert!((e[1] - c(0.0, 3.0)).norm() < 1e-14);
        assert!((e[2] - c(1.0, 1.0)).norm() < 1e-14);
    }

    #[test]
    fn rotation_matrix_has_unimodular_eigenvalues() {
        let t = 0.3f64;
        let mut a = CMatrix::zeros(2, 2);
        a[(0, 0)] = c(t.cos(), 0.0);
        a[(0, 1)] = c(-t.sin(), 0.0);
        a[(1, 0)] = c(t.sin(), 0.0);
        a[(1, 1)] = c(t.cos(), 0.0);
        let e = sorted(eigenvalues(&a).unwrap());
        assert!((e[0] - c(t.cos(), -t.sin())).norm() < 1e-14);
        assert!((e[1] - c(t.cos(), t.sin())).norm() < 1e-14);
    }

    #[test]
    fn rejects_non_square() {
        assert!(eigenvalues(&CMatrix::zeros(2, 3)).is_err());
    }
}
