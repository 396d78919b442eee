//! Confidence regions for the effect-ratio estimator: Fieller-type
//! quadratic inversion and exact randomization inference.

mod permutation;
mod quadratic;

pub use permutation::{
    permutation_null, permutation_region, random_assignment, AssignmentLines, PermutationMode, PermutationNull,
    PermutationOptions, Piece, DEFAULT_CAP,
};
pub use quadratic::{quadratic_coefficients, quadratic_region, solve_quadratic_set, variance_s2, QuadraticCoefficients};
