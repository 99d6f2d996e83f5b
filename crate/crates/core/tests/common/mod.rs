#![allow(dead_code)]

use std::f64::consts::TAU;

use mpencil::numkernels::CMatrix;
use mpencil::MonomialExponentialModel;
use num_complex::Complex64;
use proptest::collection::vec;
use proptest::prelude::*;

/// Random model with well separated zeros: one zero per angular sector,
/// moduli in `radius`, coefficient moduli in [0.5, 2].
pub fn models(
    max_terms: usize,
    max_mult: usize,
    max_order: usize,
    radius: std::ops::Range<f64>,
) -> impl Strategy<Value = MonomialExponentialModel> {
    (1..=max_terms)
        .prop_flat_map(move |n| {
            (
                vec(1..=max_mult, n),
                vec(0.15f64..0.85, n),
                vec(radius.clone(), n),
                0.0f64..1.0,
                vec((0.5f64..2.0, 0.0..TAU), n * max_mult),
            )
        })
        .prop_filter("order cap", move |(mults, ..)| mults.iter().sum::<usize>() <= max_order)
        .prop_map(|(mults, angles, radii, offset, coeffs)| {
            let n = mults.len() as f64;
            let zeros: Vec<(Complex64, usize)> = mults
                .iter()
                .enumerate()
                .map(|(j, &m)| (Complex64::from_polar(radii[j], TAU * ((j as f64 + angles[j]) / n + offset)), m))
                .collect();
            let order: usize = mults.iter().sum();
            let c: Vec<Complex64> = coeffs[..order].iter().map(|&(r, t)| Complex64::from_polar(r, t)).collect();
            MonomialExponentialModel::from_zeros(&zeros, &c).unwrap()
        })
}

pub fn complex_matrix(rows: usize, cols: usize) -> impl Strategy<Value = CMatrix> {
    vec((-1.0f64..1.0, -1.0f64..1.0), rows * cols)
        .prop_map(move |v| CMatrix::from_iterator(rows, cols, v.into_iter().map(|(re, im)| Complex64::new(re, im))))
}

/// `[p_0, .., p_{M-1}]` of the monic `prod (z - z_j)^{m_j}`, by repeated multiplication.
pub fn prony_coefficients(model: &MonomialExponentialModel) -> Vec<Complex64> {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for term in model.terms() {
        for _ in 0..term.multiplicity() {
            let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
            for (k, &p) in poly.iter().enumerate() {
                next[k + 1] += p;
                next[k] -= p * term.zero();
            }
            poly = next;
        }
    }
    poly.pop();
    poly
}

/// Largest distance after pairing each element of `a` with a distinct
/// element of `b` by brute force over permutations (small sets only).
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut idx: Vec<usize> = (0..b.len()).collect();
    let mut best = f64::INFINITY;
    permute(&mut idx, 0, &mut |p| {
        let d = a.iter().zip(p).map(|(x, &j)| (x - b[j]).norm()).fold(0.0, f64::max);
        best = best.min(d);
    });
    best
}

pub fn permute(idx: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k == idx.len() {
        visit(idx);
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute(idx, k + 1, visit);
        idx.swap(k, i);
    }
}
