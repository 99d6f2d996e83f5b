//! Monomial-exponential sums `h(x) = Σ_j Σ_s c_js x^s exp(f_j x)` and their
//! sampling on integer grids.
//!
//! The exponent `f_j` is the canonical parameter of a term; the zero
//! `z_j = exp(f_j)` is derived. Evaluation always goes through
//! `exp(x * f_j)`, so non-integer `x` uses the branch fixed by the stored
//! exponent rather than a complex power of `z_j`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Two zeros closer than this (relative to their modulus) are treated as equal.
const ZERO_COINCIDENCE: f64 = 8.0 * f64::EPSILON;

/// One term `Σ_s c_s x^s exp(f x)`; the multiplicity is the number of coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub exponent: Complex64,
    pub coeffs: Vec<Complex64>,
}

impl Term {
    pub fn new(exponent: Complex64, coeffs: Vec<Complex64>) -> Self {
        Term { exponent, coeffs }
    }

    pub fn simple(exponent: Complex64, coeff: Complex64) -> Self {
        Term::new(exponent, vec![coeff])
    }

    pub fn multiplicity(&self) -> usize {
        self.coeffs.len()
    }

    pub fn zero(&self) -> Complex64 {
        self.exponent.exp()
    }

    fn evaluate(&self, x: Complex64) -> Complex64 {
        // Horner in x for the polynomial factor; x^0 = 1 so 0^0 is handled.
        let poly = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c);
        poly * (x * self.exponent).exp()
    }
}

/// A validated monomial-exponential sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonomialExponentialModel {
    terms: Vec<Term>,
}

impl MonomialExponentialModel {
    /// Build a model, checking `f_j != 0`, `m_j >= 1` and that the zeros
    /// `exp(f_j)` are pairwise distinct.
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidModel("model has no terms".into()));
        }
        for (j, term) in terms.iter().enumerate() {
            if term.coeffs.is_empty() {
                return Err(Error::InvalidModel(format!("term {j} has multiplicity 0")));
            }
            if term.exponent == Complex64::new(0.0, 0.0) {
                return Err(Error::InvalidModel(format!("term {j} has zero exponent")));
            }
            if !term.exponent.is_finite() || term.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidModel(format!("term {j} is not finite")));
            }
        }
        let zeros: Vec<Complex64> = terms.iter().map(Term::zero).collect();
        check_distinct(&zeros)?;
        Ok(MonomialExponentialModel { terms })
    }

    /// Build a model from zeros `z_j` (with multiplicities) and the flat
    /// coefficient list `[c_10, .., c_1(m1-1), c_20, ..]`.
    ///
    /// The exponent is the principal logarithm of each zero.
    pub fn from_zeros(zeros: &[(Complex64, usize)], coeffs: &[Complex64]) -> Result<Self> {
        let total: usize = zeros.iter().map(|&(_, m)| m).sum();
        if total != coeffs.len() {
            return Err(Error::InvalidModel(format!(
                "multiplicities sum to {total} but {} coefficients were given",
                coeffs.len()
            )));
        }
        if let Some(j) = zeros.iter().position(|&(z, _)| z == Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidModel(format!("zero {j} is 0")));
        }
        let just_zeros: Vec<Complex64> = zeros.iter().map(|&(z, _)| z).collect();
        check_distinct(&just_zeros)?;

        let mut rest = coeffs;
        let terms = zeros
            .iter()
            .map(|&(z, m)| {
                let (mine, tail) = rest.split_at(m);
                rest = tail;
                Term::new(z.ln(), mine.to_vec())
            })
            .collect();
        Self::new(terms)
    }

    /// Build a model from exponents with multiplicities and a flat coefficient list.
    pub fn from_exponents(exponents: &[(Complex64, usize)], coeffs: &[Complex64]) -> Result<Self> {
        let total: usize = exponents.iter().map(|&(_, m)| m).sum();
        if total != coeffs.len() {
            return Err(Error::InvalidModel(format!(
                "multiplicities sum to {total} but {} coefficients were given",
                coeffs.len()
            )));
        }
        let mut rest = coeffs;
        let terms = exponents
            .iter()
            .map(|&(f, m)| {
                let (mine, tail) = rest.split_at(m);
                rest = tail;
                Term::new(f, mine.to_vec())
            })
            .collect();
        Self::new(terms)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of terms `n`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total order `M = Σ m_j`.
    pub fn order(&self) -> usize {
        self.terms.iter().map(Term::multiplicity).sum()
    }

    pub fn zeros(&self) -> Vec<Complex64> {
        self.terms.iter().map(Term::zero).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.terms.iter().map(Term::multiplicity).collect()
    }

    /// Coefficients in term-major order.
    pub fn flat_coeffs(&self) -> Vec<Complex64> {
        self.terms.iter().flat_map(|t| t.coeffs.iter().copied()).collect()
    }

    pub fn evaluate(&self, x: Complex64) -> Complex64 {
        self.terms.iter().map(|t| t.evaluate(x)).sum()
    }

    pub fn evaluate_real(&self, x: f64) -> Complex64 {
        self.evaluate(Complex64::new(x, 0.0))
    }

    /// Sample at the integer nodes of `grid`.
    pub fn sample(&self, grid: SampleGrid) -> SampleSet {
        let values = grid.nodes().map(|k| self.evaluate_real(k as f64)).collect();
        SampleSet {
            grid,
            values,
            noise_sigma: 0.0,
            seed: None,
        }
    }

    /// Same model with every coefficient multiplied by `alpha`.
    pub fn scaled(&self, alpha: Complex64) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| Term::new(t.exponent, t.coeffs.iter().map(|&c| c * alpha).collect()))
            .collect();
        MonomialExponentialModel { terms }
    }
}

fn check_distinct(zeros: &[Complex64]) -> Result<()> {
    for i in 0..zeros.len() {
        for j in (i + 1)..zeros.len() {
            let scale = zeros[i].norm().max(zeros[j].norm());
            if (zeros[i] - zeros[j]).norm() <= ZERO_COINCIDENCE * scale {
                return Err(Error::InvalidModel(format!(
                    "terms {i} and {j} share the zero {}",
                    zeros[i]
                )));
            }
        }
    }
    Ok(())
}

/// Integer nodes `k0, k0 + 1, .., k0 + count - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub k0: i64,
    pub count: usize,
}

impl SampleGrid {
    pub fn new(k0: i64, count: usize) -> Result<Self> {
        if count < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 samples, got {count}")));
        }
        Ok(SampleGrid { k0, count })
    }

    /// Grid of `2n` nodes starting at `k0`.
    pub fn pairs(k0: i64, n: usize) -> Result<Self> {
        Self::new(k0, 2 * n)
    }

    pub fn nodes(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.count as i64).map(move |i| self.k0 + i)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    pub grid: SampleGrid,
    pub values: Vec<Complex64>,
    /// Amplitude `δ` of the additive noise; 0 for exact data.
    pub noise_sigma: f64,
    pub seed: Option<u64>,
}

impl SampleSet {
    /// Wrap raw values observed on `k0, k0 + 1, ..`.
    pub fn from_values(k0: i64, values: Vec<Complex64>) -> Result<Self> {
        let grid = SampleGrid::new(k0, values.len())?;
        Ok(SampleSet {
            grid,
            values,
            noise_sigma: 0.0,
            seed: None,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Add `δ e_k` with `e_k = u + i v`, `u, v ~ U[0, 1)` drawn from a
    /// ChaCha stream seeded with `seed`.
    pub fn add_noise(&self, delta: f64, seed: u64) -> Result<SampleSet> {
        if !(delta >= 0.0) || !delta.is_finite() {
            return Err(Error::Config(format!("noise amplitude must be >= 0, got {delta}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = self
            .values
            .iter()
            .map(|&h| {
                let u: f64 = rng.random();
                let v: f64 = rng.random();
                h + Complex64::new(u, v) * delta
            })
            .collect();
        Ok(SampleSet {
            grid: self.grid,
            values,
            noise_sigma: delta,
            seed: Some(seed),
        })
    }
}
