//! Estimation of the complier average causal effect in cluster-randomized
//! trials with noncompliance.
//!
//! Three rival estimators are provided: the Wald ratio of cluster-level
//! averages, unit-level two-stage least squares, and the effect ratio of
//! difference-in-means of cluster sums. The effect ratio comes with a
//! Fieller-type confidence region and an exact permutation region. The
//! [`identification`] module computes what each estimator targets on a
//! fully specified population, and [`simulation`] runs Monte Carlo studies
//! of bias and coverage.

pub mod ci;
pub mod combinatorics;
pub mod data;
pub mod error;
pub mod estimators;
pub mod identification;
pub mod normal;
pub mod region;
pub mod seeds;
pub mod simulation;

pub use data::{ingest_csv, itt_estimates, read_trial, summarize, ClusterSummary, ClusterTrial, ParseOptions, UnitRecord};
pub use error::{DataError, EstimationError, IdentificationError, SimulationError};
pub use estimators::{EstimateReport, Method, RegionMethod};
pub use region::{ConfidenceRegion, Region};
