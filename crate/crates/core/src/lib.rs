//! Estimation of monomial-exponential sums `Σ_j Σ_s c_js x^s e^{f_j x}` from
//! equispaced samples, via a generalized SVD of the shifted Hankel pencil.

pub mod error;
pub mod estimator;
pub mod hankel;
pub mod harness;
pub mod metrics;
pub mod model;
pub mod numkernels;

pub use error::{Error, Result, Stage};
pub use estimator::{estimate, Cluster, EstimatorOptions, RecoveredModel, Truncation};
pub use hankel::{build_hankel_pair, estimate_order, HankelPair, OrderEstimate, RankPolicy};
pub use metrics::{error_report, ErrorReport};
pub use model::{MonomialExponentialModel, SampleGrid, SampleSet, Term};
