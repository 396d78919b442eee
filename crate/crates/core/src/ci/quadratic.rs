//! Fieller-type confidence region for the effect ratio.
//!
//! The region collects every `t` with `T(t)² ≤ z² S²(t)`. Both sides are
//! polynomials in `t` of degree two, so the set is
//! `{t : a t² + 2 b t + c ≤ 0}` for coefficients built from arm-wise
//! variances and covariances of the cluster sums.

use serde::{Deserialize, Serialize};

use crate::data::{ClusterSummary, DesignCounts};
use crate::error::EstimationError;
use crate::estimators::{adjusted_responses, sum_differences};
use crate::normal;
use crate::region::{ConfidenceRegion, Region};

/// Coefficients of `a t² + 2 b t + c` and the arm-wise moments behind them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadraticCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub s2_y_t: f64,
    pub s2_y_c: f64,
    pub s2_d_t: f64,
    pub s2_d_c: f64,
    pub s2_yd_t: f64,
    pub s2_yd_c: f64,
    /// Difference in arm means of outcome sums.
    pub diff_y: f64,
    /// Difference in arm means of compliance sums.
    pub diff_d: f64,
    pub z: f64,
    pub treated: usize,
    pub control: usize,
}

impl QuadraticCoefficients {
    /// `b² - a c`
    pub fn discriminant(&self) -> f64 {
        self.b * self.b - self.a * self.c
    }

    /// `S²(t)` rebuilt from the expanded moments.
    pub fn s2_expanded(&self, t: f64) -> f64 {
        let (m, mc) = (self.treated as f64, self.control as f64);
        let vy = self.s2_y_t / m + self.s2_y_c / mc;
        let vd = self.s2_d_t / m + self.s2_d_c / mc;
        let cyd = self.s2_yd_t / m + self.s2_yd_c / mc;
        vy - 2.0 * t * cyd + t * t * vd
    }

    pub fn evaluate(&self, t: f64) -> f64 {
        self.a * t * t + 2.0 * self.b * t + self.c
    }
}

fn arm_sizes(summaries: &[ClusterSummary]) -> Result<(usize, usize), EstimationError> {
    let k = DesignCounts::of(summaries);
    for size in [k.treated, k.control()] {
        if size < 2 {
            return Err(EstimationError::DegenerateArm { size });
        }
    }
    Ok((k.treated, k.control()))
}

/// Sample variance of `x` and sample covariance of `x` with `w` inside one arm.
fn arm_moments(pairs: impl Iterator<Item = (f64, f64)> + Clone) -> (f64, f64, f64) {
    let (mut n, mut sx, mut sw) = (0.0, 0.0, 0.0);
    for (x, w) in pairs.clone() {
        n += 1.0;
        sx += x;
        sw += w;
    }
    let (mx, mw) = (sx / n, sw / n);
    let (mut vx, mut vw, mut cxw) = (0.0, 0.0, 0.0);
    for (x, w) in pairs {
        vx += (x - mx) * (x - mx);
        vw += (w - mw) * (w - mw);
        cxw += (x - mx) * (w - mw);
    }
    (vx / (n - 1.0), vw / (n - 1.0), cxw / (n - 1.0))
}

/// `S²(t)` with per-arm divisors `m(m-1)` and `(J-m)(J-m-1)`.
pub fn variance_s2(summaries: &[ClusterSummary], tau0: f64) -> Result<f64, EstimationError> {
    let (m, mc) = arm_sizes(summaries)?;
    let a = adjusted_responses(summaries, tau0);
    let mut out = 0.0;
    for (arm, size) in [(true, m), (false, mc)] {
        let vals: Vec<f64> = summaries.iter().zip(&a).filter(|(s, _)| s.treated == arm).map(|(_, &v)| v).collect();
        let mean = vals.iter().sum::<f64>() / size as f64;
        let ss: f64 = vals.iter().map(|v| (v - mean) * (v - mean)).sum();
        out += ss / (size as f64 * (size as f64 - 1.0));
    }
    Ok(out)
}

pub fn quadratic_coefficients(summaries: &[ClusterSummary], alpha: f64) -> Result<QuadraticCoefficients, EstimationError> {
    let (m, mc) = arm_sizes(summaries)?;
    let z = normal::two_sided_critical(alpha);
    let arm = |treated: bool| {
        arm_moments(
            summaries
                .iter()
                .filter(move |s| s.treated == treated)
                .map(|s| (s.y_sum, s.d_sum)),
        )
    };
    let (s2_y_t, s2_d_t, s2_yd_t) = arm(true);
    let (s2_y_c, s2_d_c, s2_yd_c) = arm(false);
    let diff = sum_differences(summaries);
    let (mf, mcf) = (m as f64, mc as f64);
    let z2 = z * z;
    Ok(QuadraticCoefficients {
        a: diff.d * diff.d - z2 * (s2_d_t / mf + s2_d_c / mcf),
        b: -(diff.y * diff.d - z2 * (s2_yd_t / mf + s2_yd_c / mcf)),
        c: diff.y * diff.y - z2 * (s2_y_t / mf + s2_y_c / mcf),
        s2_y_t,
        s2_y_c,
        s2_d_t,
        s2_d_c,
        s2_yd_t,
        s2_yd_c,
        diff_y: diff.y,
        diff_d: diff.d,
        z,
        treated: m,
        control: mc,
    })
}

/// Solves `{t : a t² + 2 b t + c ≤ 0}`.
///
/// `a` is treated as zero when it is below `a_tol` in magnitude.
pub fn solve_quadratic_set(a: f64, b: f64, c: f64, a_tol: f64) -> Region {
    if a.abs() <= a_tol {
        return if b > 0.0 {
            Region::Below { hi: -c / (2.0 * b) }
        } else if b < 0.0 {
            Region::Above { lo: -c / (2.0 * b) }
        } else if c <= 0.0 {
            Region::WholeLine
        } else {
            Region::Empty
        };
    }
    let disc = b * b - a * c;
    if a > 0.0 {
        if disc < 0.0 {
            return Region::Empty;
        }
        let (lo, hi) = roots(a, b, c, disc);
        Region::Finite { lo, hi }
    } else if disc > 0.0 {
        let (lo, hi) = roots(a, b, c, disc);
        Region::ComplementOf { lo, hi }
    } else {
        Region::WholeLine
    }
}

/// Ordered roots of `a t² + 2 b t + c`, avoiding cancellation.
fn roots(a: f64, b: f64, c: f64, disc: f64) -> (f64, f64) {
    let q = -(b + b.signum() * disc.sqrt());
    if q == 0.0 {
        return (0.0, 0.0);
    }
    let (r1, r2) = (q / a, c / q);
    (r1.min(r2), r1.max(r2))
}

/// Fieller-type region for the effect ratio at level `1 - alpha`.
pub fn quadratic_region(summaries: &[ClusterSummary], alpha: f64) -> Result<ConfidenceRegion, EstimationError> {
    let q = quadratic_coefficients(summaries, alpha)?;
    let (m, mc) = (q.treated as f64, q.control as f64);
    let scale = q.diff_d * q.diff_d + q.z * q.z * (q.s2_d_t / m + q.s2_d_c / mc);
    let region = solve_quadratic_set(q.a, q.b, q.c, 1e-14 * scale);
    if region == Region::Empty {
        log::warn!("quadratic confidence set is empty (a = {:e}, b^2 - ac = {:e})", q.a, q.discriminant());
    }
    Ok(ConfidenceRegion::new(region, alpha))
}
