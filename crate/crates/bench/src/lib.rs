//! Shared inputs for the criterion benches.

use mpencil::harness::{sample_example, ExampleId, ExperimentConfig};
use mpencil::numkernels::CMatrix;
use mpencil::SampleSet;
use num_complex::Complex64;

/// Seeded samples of a registered example.
pub fn example_samples(example: ExampleId, n: usize, delta: f64) -> SampleSet {
    let cfg = ExperimentConfig {
        seed: 1,
        ..ExperimentConfig::new(example, n, delta)
    };
    sample_example(&cfg).expect("registered example").1
}

/// Dense, well conditioned test matrix; `salt` varies the entries.
pub fn dense(rows: usize, cols: usize, salt: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |i, j| {
        let k = (i * 31 + j * 17 + salt * 7) as f64;
        let diag = if i == j { 2.0 } else { 0.0 };
        Complex64::new((0.37 * k).sin() + diag, (0.11 * k).cos())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use mpencil::numkernels::numerical_rank;

    #[test]
    fn fixtures_have_expected_shape() {
        assert_eq!(example_samples(ExampleId::Ex1, 48, 0.0).len(), 96);
        let a = dense(64, 40, 0);
        assert_eq!(a.shape(), (64, 40));
        assert_eq!(numerical_rank(&a).unwrap(), 40);
        assert_ne!(dense(4, 4, 0), dense(4, 4, 1));
    }
}
