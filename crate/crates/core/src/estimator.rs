//! Matrix-pencil estimation of a monomial-exponential sum from `2N` samples.
//!
//! Pipeline: Hankel pair -> numerical order `M` -> GSVD of the pair cut
//! down to `M` columns -> eigenvalues of the reduced `M x M` matrix -> multiplicity
//! clustering -> exponents -> Casorati least squares for the coefficients.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ResultExt, Stage};
use crate::hankel::{build_hankel_pair, estimate_order, HankelPair, RankPolicy};
use crate::model::{MonomialExponentialModel, SampleSet, Term};
use crate::numkernels::{eigenvalues, gsvd, lstsq, CMatrix, CVector, LstsqSolution};

/// How the `N x M̂` pair is cut down to `M` columns once the order is known.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    /// Project onto the `M` dominant right singular vectors of `H0`.
    /// Every sample enters the pencil, which matters once the data are noisy.
    #[default]
    Subspace,
    /// Keep the first `M` columns (uses only `h(k0), ..., h(k0 + N + M - 1)`).
    LeadingColumns,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatorOptions {
    /// Relative single-linkage radius for grouping repeated eigenvalues.
    pub cluster_tol: f64,
    pub rank_policy: RankPolicy,
    /// Solve for coefficients on all `2N` nodes rather than the first `M`.
    pub use_all_samples: bool,
    /// Smallest admissible diagonal of the reference GSVD core, relative to its maximum.
    pub sigma_floor: f64,
    pub truncation: Truncation,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        EstimatorOptions {
            cluster_tol: 1e-3,
            rank_policy: RankPolicy::MachinePrecision,
            use_all_samples: true,
            sigma_floor: 1e-12,
            truncation: Truncation::Subspace,
        }
    }
}

impl EstimatorOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.cluster_tol > 0.0) || !(self.sigma_floor > 0.0) {
            return Err(Error::Config(format!(
                "tolerances must be positive (cluster_tol = {}, sigma_floor = {})",
                self.cluster_tol, self.sigma_floor
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Cluster {
    pub center: Complex64,
    pub multiplicity: usize,
    /// Indices into the raw eigenvalue list.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoveredModel {
    pub model: MonomialExponentialModel,
    pub estimated_m: usize,
    pub raw_eigenvalues: Vec<Complex64>,
    pub clusters: Vec<Cluster>,
    /// `‖K c - h‖_2` of the coefficient solve.
    pub fit_residual: f64,
    pub order_spectrum: Vec<f64>,
    pub order_threshold: f64,
}

/// Generalized eigenvalues of `(H0* H1, H0* H0)` for a pair truncated to `M` columns.
///
/// With `H1 = U [Sa; 0] X` and `H0 = V [Sb; 0] X`, these are the eigenvalues
/// of `Sb^{-1} V_NM* U_NM Sa`.
pub fn pencil_eigenvalues(pair: &HankelPair, sigma_floor: f64) -> Result<Vec<Complex64>> {
    let m = pair.cols();
    let factors = gsvd(&pair.h1, &pair.h0)?;
    let smax = factors.sigma_b.iter().copied().fold(0.0, f64::max);
    for (index, &s) in factors.sigma_b.iter().enumerate() {
        let ratio = if smax > 0.0 { s / smax } else { 0.0 };
        if ratio < sigma_floor {
            return Err(Error::SingularPencil { index, ratio });
        }
    }
    let coupling = factors.v.columns(0, m).adjoint() * factors.u.columns(0, m);
    let reduced = CMatrix::from_fn(m, m, |i, j| {
        coupling[(i, j)] * (factors.sigma_a[j] / factors.sigma_b[i])
    });
    eigenvalues(&reduced)
}

/// Single-linkage grouping under `|a - b| <= tol * max(1, |a|, |b|)`.
///
/// Centers are member means; groups whose centers still fall within the
/// linkage radius are merged until all centers are separated. Output is
/// sorted by descending multiplicity, then ascending argument.
pub fn cluster_multiplicities(eigs: &[Complex64], tol: f64) -> Vec<Cluster> {
    let linked = |a: Complex64, b: Complex64| (a - b).norm() <= tol * 1f64.max(a.norm()).max(b.norm());

    let n = eigs.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut root = i;
        while parent[root] != root {
            root = parent[root];
        }
        let mut cur = i;
        while parent[cur] != root {
            let next = parent[cur];
            parent[cur] = root;
            cur = next;
        }
        root
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if linked(eigs[i], eigs[j]) {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri.max(rj)] = ri.min(rj);
                }
            }
        }
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }

    let center = |members: &[usize]| -> Complex64 {
        members.iter().map(|&i| eigs[i]).sum::<Complex64>() / members.len() as f64
    };
    loop {
        let centers: Vec<Complex64> = groups.iter().map(|g| center(g)).collect();
        let close = (0..groups.len())
            .flat_map(|i| ((i + 1)..groups.len()).map(move |j| (i, j)))
            .find(|&(i, j)| linked(centers[i], centers[j]));
        match close {
            Some((i, j)) => {
                let absorbed = groups.remove(j);
                groups[i].extend(absorbed);
                groups[i].sort_unstable();
            }
            None => break,
        }
    }

    let mut clusters: Vec<Cluster> = groups
        .into_iter()
        .map(|members| Cluster {
            center: center(&members),
            multiplicity: members.len(),
            members,
        })
        .collect();
    clusters.sort_by(|a, b| {
        b.multiplicity
            .cmp(&a.multiplicity)
            .then(a.center.arg().total_cmp(&b.center.arg()))
            .then(a.center.norm().total_cmp(&b.center.norm()))
    });
    clusters
}

/// Principal logarithm of each cluster center, with its multiplicity.
pub fn recover_exponents(clusters: &[Cluster]) -> Result<Vec<(Complex64, usize)>> {
    clusters
        .iter()
        .map(|c| {
            if c.center.norm() < 1e-12 {
                Err(Error::DegenerateZero { center: c.center })
            } else {
                Ok((c.center.ln(), c.multiplicity))
            }
        })
        .collect()
}

/// Casorati matrix: row `i`, block `j` holds `k_i^s z_j^{k_i}` for `s < m_j`
/// (with `0^0 = 1`). For simple zeros this is the Vandermonde matrix.
pub fn casorati_matrix(terms: &[(Complex64, usize)], points: &[i64]) -> CMatrix {
    let order: usize = terms.iter().map(|&(_, m)| m).sum();
    let mut k = CMatrix::zeros(points.len(), order);
    for (i, &node) in points.iter().enumerate() {
        let kf = node as f64;
        let mut col = 0;
        for &(z, m) in terms {
            let power = z.powi(node as i32);
            for s in 0..m {
                k[(i, col)] = power * kf.powi(s as i32);
                col += 1;
            }
        }
    }
    k
}

/// Least-squares coefficients `c` of `K c = h`, in term-major order.
pub fn solve_coefficients(casorati: &CMatrix, values: &[Complex64]) -> Result<LstsqSolution> {
    let rows = casorati.nrows();
    if values.len() < rows {
        return Err(Error::Sizing {
            required: rows,
            available: values.len(),
        });
    }
    let h = CVector::from_column_slice(&values[..rows]);
    lstsq(casorati, &h)
}

/// Run the full pipeline on `2N` samples with column bound `mhat <= N`.
pub fn estimate(samples: &SampleSet, mhat: usize, opts: &EstimatorOptions) -> Result<RecoveredModel> {
    opts.validate()?;
    let count = samples.len();
    if !count.is_multiple_of(2) {
        return Err(Error::Dimension(format!("expected 2N samples, got an odd count {count}")))
            .at(Stage::Hankel);
    }
    let n = count / 2;
    let pair = build_hankel_pair(samples, n, mhat).at(Stage::Hankel)?;

    let order = estimate_order(&pair.h0, opts.rank_policy).at(Stage::Order)?;
    let m = order.order;
    let truncated = match opts.truncation {
        Truncation::Subspace => pair.dominant_subspace(m),
        Truncation::LeadingColumns => pair.truncate(m),
    }
    .at(Stage::Order)?;

    let raw = pencil_eigenvalues(&truncated, opts.sigma_floor).at(Stage::Pencil)?;
    let clusters = cluster_multiplicities(&raw, opts.cluster_tol);
    let exponents = recover_exponents(&clusters).at(Stage::Exponents)?;

    let zeros: Vec<(Complex64, usize)> = clusters.iter().map(|c| (c.center, c.multiplicity)).collect();
    let rows = if opts.use_all_samples { count } else { m };
    let points: Vec<i64> = samples.grid.nodes().take(rows).collect();
    let casorati = casorati_matrix(&zeros, &points);
    let solution = solve_coefficients(&casorati, &samples.values).at(Stage::Coefficients)?;

    let mut rest = solution.x.as_slice();
    let terms: Vec<Term> = exponents
        .iter()
        .map(|&(f, mult)| {
            let (mine, tail) = rest.split_at(mult);
            rest = tail;
            Term::new(f, mine.to_vec())
        })
        .collect();
    let model = MonomialExponentialModel::new(terms).at(Stage::Clustering)?;

    Ok(RecoveredModel {
        model,
        estimated_m: m,
        raw_eigenvalues: raw,
        clusters,
        fit_residual: solution.residual,
        order_spectrum: order.singular_values,
        order_threshold: order.threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SampleGrid;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cluster_simple_and_double() {
        let cl = cluster_multiplicities(&[c(2.0, 0.0), c(3.0, 0.0)], 1e-3);
        assert_eq!(cl.len(), 2);
        assert!(cl.iter().all(|c| c.multiplicity == 1));
        assert_eq!(cl[0].center, c(2.0, 0.0));

        let cl = cluster_multiplicities(&[c(2.0 + 1e-7, 0.0), c(2.0 - 1e-7, 0.0)], 1e-3);
        assert_eq!(cl.len(), 1);
        assert_eq!(cl[0].multiplicity, 2);
        assert!((cl[0].center - c(2.0, 0.0)).norm() < 1e-15);
        assert_eq!(cl[0].members, vec![0, 1]);
    }

    #[test]
    fn cluster_centers_are_separated() {
        // A chain that links pairwise but whose means would sit close together.
        let tol = 1e-3;
        let e = [c(1.0, 0.0), c(1.0009, 0.0), c(1.0018, 0.0), c(1.5, 0.0)];
        let cl = cluster_multiplicities(&e, tol);
        for i in 0..cl.len() {
            for j in (i + 1)..cl.len() {
                let (a, b) = (cl[i].center, cl[j].center);
                assert!((a - b).norm() > tol * 1f64.max(a.norm()).max(b.norm()));
            }
        }
        assert_eq!(cl.iter().map(|c| c.multiplicity).sum::<usize>(), 4);
        assert_eq!(cl[0].multiplicity, 3);
    }

    #[test]
    fn exponents_use_principal_branch() {
        let e = recover_exponents(&cluster_multiplicities(&[c(std::f64::consts::E, 0.0)], 1e-3)).unwrap();
        assert!((e[0].0 - c(1.0, 0.0)).norm() < 1e-15);
        let e = recover_exponents(&cluster_multiplicities(&[c(-1.0, 0.0)], 1e-3)).unwrap();
        assert!((e[0].0 - c(0.0, std::f64::consts::PI)).norm() < 1e-15);
        assert!(recover_exponents(&cluster_multiplicities(&[c(1e-13, 0.0)], 1e-3)).is_err());
    }

    #[test]
    fn casorati_small_cases() {
        let k = casorati_matrix(&[(c(2.0, 0.0), 1), (c(3.0, 0.0), 1)], &[0, 1]);
        assert_eq!(k, CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]));
        let k = casorati_matrix(&[(c(2.0, 0.0), 2)], &[0, 1]);
        assert_eq!(k, CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0), c(2.0, 0.0)]));
    }

    #[test]
    fn coefficients_of_small_vandermonde() {
        let k = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let sol = solve_coefficients(&k, &[c(2.0, 0.0), c(5.0, 0.0)]).unwrap();
        assert!((sol.x[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((sol.x[1] - c(1.0, 0.0)).norm() < 1e-14);
    }

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
        v
    }

    #[test]
    fn pencil_of_two_powers() {
        let s = SampleSet::from_values(0, (0..6).map(|k| c(2f64.powi(k) + 3f64.powi(k), 0.0)).collect())
            .unwrap();
        let pair = build_hankel_pair(&s, 3, 2).unwrap();
        let e = sorted_re(pencil_eigenvalues(&pair, 1e-12).unwrap());
        assert!((e[0] - c(2.0, 0.0)).norm() < 1e-12);
        assert!((e[1] - c(3.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pencil_of_double_zero() {
        // (1 + k) 2^k
        let s = SampleSet::from_values(0, (0..8).map(|k| c((1.0 + k as f64) * 2f64.powi(k), 0.0)).collect())
            .unwrap();
        let pair = build_hankel_pair(&s, 4, 2).unwrap();
        for z in pencil_eigenvalues(&pair, 1e-12).unwrap() {
            assert!((z - c(2.0, 0.0)).norm() < 1e-6);
        }
    }

    #[test]
    fn estimate_recovers_double_term() {
        let truth = MonomialExponentialModel::new(vec![
            Term::new(c(-0.05, 0.4), vec![c(1.0, 0.5), c(-0.3, 0.2)]),
            Term::simple(c(-0.1, -1.1), c(2.0, 0.0)),
        ])
        .unwrap();
        let s = truth.sample(SampleGrid::pairs(0, 8).unwrap());
        let rec = estimate(&s, 5, &EstimatorOptions::default()).unwrap();
        assert_eq!(rec.estimated_m, 3);
        assert_eq!(rec.model.multiplicities(), vec![2, 1]);
        assert!((rec.model.terms()[0].exponent - c(-0.05, 0.4)).norm() < 1e-6);
        assert!((rec.model.terms()[1].exponent - c(-0.1, -1.1)).norm() < 1e-10);
    }

    #[test]
    fn estimate_reports_stage() {
        let s = SampleSet::from_values(0, vec![c(0.0, 0.0); 8]).unwrap();
        let err = estimate(&s, 3, &EstimatorOptions::default()).unwrap_err();
        assert_eq!(err.stage(), Some(Stage::Order));
        assert!(matches!(err.root(), Error::OrderZero { .. }));

        let s = SampleSet::from_values(0, vec![c(1.0, 0.0); 7]).unwrap();
        assert_eq!(estimate(&s, 2, &EstimatorOptions::default()).unwrap_err().stage(), Some(Stage::Hankel));

        let s = SampleSet::from_values(0, vec![c(1.0, 0.0); 8]).unwrap();
        assert_eq!(estimate(&s, 5, &EstimatorOptions::default()).unwrap_err().stage(), Some(Stage::Hankel));
    }

    #[test]
    fn options_are_validated() {
        let s = SampleSet::from_values(0, vec![c(1.0, 0.0); 8]).unwrap();
        let opts = EstimatorOptions {
            cluster_tol: 0.0,
            ..Default::default()
        };
        assert!(estimate(&s, 2, &opts).is_err());
    }
}
