//! Registered test signals.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{MonomialExponentialModel, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExampleId {
    Ex1,
    Ex2,
    Ex3,
    Ex4,
    Ex5,
    Ex6R07,
    Ex6R08,
    Ex6R09,
    /// The three circles at once (120 nodes).
    Ex6Union,
    SolitonA,
    SolitonB,
    Custom,
}

impl ExampleId {
    pub const ALL: [ExampleId; 12] = [
        ExampleId::Ex1,
        ExampleId::Ex2,
        ExampleId::Ex3,
        ExampleId::Ex4,
        ExampleId::Ex5,
        ExampleId::Ex6R07,
        ExampleId::Ex6R08,
        ExampleId::Ex6R09,
        ExampleId::Ex6Union,
        ExampleId::SolitonA,
        ExampleId::SolitonB,
        ExampleId::Custom,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            ExampleId::Ex1 => "ex1",
            ExampleId::Ex2 => "ex2",
            ExampleId::Ex3 => "ex3",
            ExampleId::Ex4 => "ex4",
            ExampleId::Ex5 => "ex5",
            ExampleId::Ex6R07 => "ex6_r07",
            ExampleId::Ex6R08 => "ex6_r08",
            ExampleId::Ex6R09 => "ex6_r09",
            ExampleId::Ex6Union => "ex6_union",
            ExampleId::SolitonA => "soliton_a",
            ExampleId::SolitonB => "soliton_b",
            ExampleId::Custom => "custom",
        }
    }

    pub fn is_soliton(&self) -> bool {
        matches!(self, ExampleId::SolitonA | ExampleId::SolitonB)
    }

    pub fn is_circle(&self) -> bool {
        matches!(
            self,
            ExampleId::Ex6R07 | ExampleId::Ex6R08 | ExampleId::Ex6R09 | ExampleId::Ex6Union
        )
    }

    /// Default upper bound `b` of the `e(h)` domain.
    pub fn default_b(&self) -> f64 {
        if self.is_soliton() {
            5.0
        } else {
            50.0
        }
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        ExampleId::ALL
            .into_iter()
            .find(|id| id.as_str() == norm)
            .ok_or_else(|| Error::UnknownExample(s.to_string()))
    }
}

/// How the listed vectors of examples 2-4 are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentReading {
    /// The listed values are exponents `f_j` (so `|exp(f_j)| ≈ 1`).
    #[default]
    Exponents,
    /// The listed values are the zeros `z_j` themselves.
    Zeros,
}

impl FromStr for ExponentReading {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "exponents" => Ok(ExponentReading::Exponents),
            "zeros" => Ok(ExponentReading::Zeros),
            other => Err(Error::Config(format!("unknown reading `{other}`"))),
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Zeros of example 1.
pub fn example1_zeros() -> [Complex64; 6] {
    [
        c(0.9856, -0.1628),
        c(0.9856, 0.1628),
        c(0.8976, -0.4305),
        c(0.8976, 0.4305),
        c(0.8127, -0.5690),
        c(0.8127, 0.5690),
    ]
}

/// The five listed values shared by examples 2-4, `2e-5 * (a + 2π b i)`.
pub fn example2_values() -> [Complex64; 5] {
    let scale = 2e-5;
    [
        c(-208.0, -2.0 * PI * 1379.0) * scale,
        c(-256.0, -2.0 * PI * 685.0) * scale,
        c(-197.0, -2.0 * PI * 271.0) * scale,
        c(-117.0, 2.0 * PI * 353.0) * scale,
        c(-808.0, 2.0 * PI * 478.0) * scale,
    ]
}

/// `e^{15i} [3.1, 9.9, 6.0, 2.8, 17]`.
pub fn example2_coeffs() -> Vec<Complex64> {
    let phase = c(0.0, 15.0).exp();
    [3.1, 9.9, 6.0, 2.8, 17.0].iter().map(|&x| phase * x).collect()
}

/// Bound-state parameters `a_j` of the soliton kernels.
pub fn soliton_a_values(id: ExampleId) -> Vec<(Complex64, usize)> {
    match id {
        ExampleId::SolitonA => vec![
            (c(0.1, 0.7), 1),
            (c(0.12, 0.3), 1),
            (c(0.14, 0.6), 1),
            (c(0.3, 0.16), 1),
        ],
        _ => vec![(c(0.1, 0.7), 2), (c(0.14, 0.6), 1), (c(0.3, 0.16), 1)],
    }
}

/// `Γ = [1+i, 2+i, 3+i, 4+i]`, term-major.
pub fn soliton_gamma() -> Vec<Complex64> {
    vec![c(1.0, 1.0), c(2.0, 1.0), c(3.0, 1.0), c(4.0, 1.0)]
}

fn factorial(s: usize) -> f64 {
    (1..=s).map(|k| k as f64).product()
}

/// Kernel `Σ_j e^{sign a_j x} Σ_s Γ_js x^s / s!` as a model.
/// `sign = -1` gives the left kernel, `+1` the right one.
pub fn marchenko_kernel(bound_states: &[(Complex64, usize)], gamma: &[Complex64], sign: f64) -> Result<MonomialExponentialModel> {
    let total: usize = bound_states.iter().map(|&(_, m)| m).sum();
    if total != gamma.len() {
        return Err(Error::InvalidModel(format!(
            "{total} kernel coefficients expected, got {}",
            gamma.len()
        )));
    }
    let mut rest = gamma;
    let terms = bound_states
        .iter()
        .map(|&(a, m)| {
            let (mine, tail) = rest.split_at(m);
            rest = tail;
            let coeffs = mine.iter().enumerate().map(|(s, &g)| g / factorial(s)).collect();
            Term::new(a * sign, coeffs)
        })
        .collect();
    MonomialExponentialModel::new(terms)
}

fn circle_model(radii: &[f64], nodes_per_circle: usize, seed: u64) -> Result<MonomialExponentialModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::with_capacity(radii.len() * nodes_per_circle);
    for &r in radii {
        for j in 0..nodes_per_circle {
            let theta = 2.0 * PI * j as f64 / nodes_per_circle as f64;
            let coeff: f64 = rng.random();
            terms.push(Term::simple(c(r.ln(), theta), c(coeff, 0.0)));
        }
    }
    MonomialExponentialModel::new(terms)
}

/// Ground-truth model and `e(h)` domain bound for a registered example.
///
/// `seed` only matters for the circle examples, whose coefficients are
/// uniform on `[0, 1)`.
pub fn generate_example(id: ExampleId, seed: u64, reading: ExponentReading) -> Result<(MonomialExponentialModel, f64)> {
    let listed = |i: usize| -> Complex64 {
        let v = example2_values()[i];
        match reading {
            ExponentReading::Exponents => v,
            ExponentReading::Zeros => v.ln(),
        }
    };
    let one_to_six: Vec<Complex64> = (1..=6).map(|k| c(k as f64, 0.0)).collect();
    let z1 = example1_zeros();
    let model = match id {
        ExampleId::Ex1 => {
            let zeros: Vec<(Complex64, usize)> = z1.iter().map(|&z| (z, 1)).collect();
            MonomialExponentialModel::from_zeros(&zeros, &one_to_six)?
        }
        ExampleId::Ex2 => {
            let exps: Vec<(Complex64, usize)> = (0..5).map(|i| (listed(i), 1)).collect();
            MonomialExponentialModel::from_exponents(&exps, &example2_coeffs())?
        }
        ExampleId::Ex3 => MonomialExponentialModel::from_exponents(
            &[(listed(0), 2), (listed(2), 1), (listed(3), 1), (listed(4), 1)],
            &example2_coeffs(),
        )?,
        ExampleId::Ex4 => MonomialExponentialModel::from_exponents(
            &[(listed(0), 2), (listed(1), 2), (listed(2), 1)],
            &example2_coeffs(),
        )?,
        ExampleId::Ex5 => MonomialExponentialModel::from_zeros(
            &[(z1[0], 2), (z1[2], 2), (z1[4], 1), (z1[5], 1)],
            &one_to_six,
        )?,
        ExampleId::Ex6R07 => circle_model(&[0.7], 40, seed)?,
        ExampleId::Ex6R08 => circle_model(&[0.8], 40, seed)?,
        ExampleId::Ex6R09 => circle_model(&[0.9], 40, seed)?,
        ExampleId::Ex6Union => circle_model(&[0.7, 0.8, 0.9], 40, seed)?,
        ExampleId::SolitonA | ExampleId::SolitonB => {
            marchenko_kernel(&soliton_a_values(id), &soliton_gamma(), -1.0)?
        }
        ExampleId::Custom => {
            return Err(Error::UnknownExample(
                "custom (no registered model; supply samples instead)".into(),
            ))
        }
    };
    Ok((model, id.default_b()))
}
