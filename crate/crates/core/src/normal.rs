//! Standard normal quantiles.

use statrs::distribution::{ContinuousCDF, Normal};

/// Returns `x` such that `Φ(x) = p`. Panics unless `0 < p < 1`.
pub fn quantile(p: f64) -> f64 {
    assert!(p > 0.0 && p < 1.0, "quantile requires 0 < p < 1, got {p}");
    Normal::standard().inverse_cdf(p)
}

/// Two-sided critical value `z_{1-α/2}`.
pub fn two_sided_critical(alpha: f64) -> f64 {
    quantile(1.0 - alpha / 2.0)
}
