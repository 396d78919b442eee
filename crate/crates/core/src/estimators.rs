//! Point estimators of the complier average causal effect and their
//! variances: the cluster-level Wald ratio, unit-level two-stage least
//! squares with a cluster-robust sandwich, and the effect ratio of
//! difference-in-means of cluster sums.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ci::{self, PermutationOptions};
use crate::data::{itt_estimates, ClusterSummary, DesignCounts};
use crate::error::EstimationError;
use crate::normal;
use crate::region::{ConfidenceRegion, Region};

/// Below this many clusters the asymptotic intervals are flagged.
pub const SMALL_J_THRESHOLD: usize = 40;

const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    #[serde(rename = "cl")]
    ClusterLevel,
    #[serde(rename = "tsls")]
    Tsls,
    #[serde(rename = "er")]
    EffectRatio,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::EffectRatio, Method::ClusterLevel, Method::Tsls];

    pub fn tag(&self) -> &'static str {
        match self {
            Method::ClusterLevel => "cl",
            Method::Tsls => "tsls",
            Method::EffectRatio => "er",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::ClusterLevel => "Cluster-level averages",
            Method::Tsls => "TSLS",
            Method::EffectRatio => "Effect ratio",
        })
    }
}

/// Output of one estimator run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub method: Method,
    pub point: f64,
    pub variance: Option<f64>,
    pub region: ConfidenceRegion,
    pub alpha: f64,
    pub diagnostics: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
}

impl EstimateReport {
    fn new(method: Method, point: f64, variance: Option<f64>, region: ConfidenceRegion) -> Self {
        Self {
            method,
            point,
            variance,
            alpha: region.alpha,
            region,
            diagnostics: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    fn diag(&mut self, key: &str, value: f64) {
        self.diagnostics.insert(key.to_string(), value);
    }

    fn flag_small_j(&mut self, clusters: usize) {
        let small = clusters < SMALL_J_THRESHOLD;
        self.diag("small_j", if small { 1.0 } else { 0.0 });
        if small {
            self.warnings.push(format!(
                "only {clusters} clusters; asymptotic interval may be unreliable below {SMALL_J_THRESHOLD}"
            ));
        }
    }
}

fn check_alpha(alpha: f64) -> Result<(), EstimationError> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(EstimationError::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// Arm averages of the cluster means.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmMeans {
    pub y_bar_t: f64,
    pub y_bar_c: f64,
    pub d_bar_t: f64,
    pub d_bar_c: f64,
}

impl ArmMeans {
    pub fn from_summaries(summaries: &[ClusterSummary]) -> Self {
        let k = DesignCounts::of(summaries);
        let (m, mc) = (k.treated as f64, k.control() as f64);
        let mut out = ArmMeans {
            y_bar_t: 0.0,
            y_bar_c: 0.0,
            d_bar_t: 0.0,
            d_bar_c: 0.0,
        };
        for s in summaries {
            if s.treated {
                out.y_bar_t += s.y_bar / m;
                out.d_bar_t += s.d_bar / m;
            } else {
                out.y_bar_c += s.y_bar / mc;
                out.d_bar_c += s.d_bar / mc;
            }
        }
        out
    }
}

/// Variance pieces of the Delta-method variance for the cluster-level estimator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterLevelMoments {
    pub s2_y: f64,
    pub s2_d: f64,
    pub var_y: f64,
    pub var_d: f64,
    pub cov_yd: f64,
}

pub fn cluster_level_moments(summaries: &[ClusterSummary]) -> Result<ClusterLevelMoments, EstimationError> {
    let k = DesignCounts::of(summaries);
    if k.clusters <= 2 {
        return Err(EstimationError::DegenerateVariance(format!(
            "pooled variance needs J > 2, got J = {}",
            k.clusters
        )));
    }
    let means = ArmMeans::from_summaries(summaries);
    let (j, m, mc) = (k.clusters as f64, k.treated as f64, k.control() as f64);
    let (mut ssy, mut ssd, mut cross_t, mut cross_c) = (0.0, 0.0, 0.0, 0.0);
    for s in summaries {
        let (yc, dc) = if s.treated {
            (s.y_bar - means.y_bar_t, s.d_bar - means.d_bar_t)
        } else {
            (s.y_bar - means.y_bar_c, s.d_bar - means.d_bar_c)
        };
        ssy += yc * yc;
        ssd += dc * dc;
        if s.treated {
            cross_t += yc * dc;
        } else {
            cross_c += yc * dc;
        }
    }
    let s2_y = ssy / (j - 2.0);
    let s2_d = ssd / (j - 2.0);
    Ok(ClusterLevelMoments {
        s2_y,
        s2_d,
        var_y: j * s2_y / (m * mc),
        var_d: j * s2_d / (m * mc),
        cov_yd: cross_t / (m * m) + cross_c / (mc * mc),
    })
}

/// Wald ratio of arm averages of cluster means, with a Delta-method interval.
pub fn estimate_cluster_level(summaries: &[ClusterSummary], alpha: f64) -> Result<EstimateReport, EstimationError> {
    check_alpha(alpha)?;
    let means = ArmMeans::from_summaries(summaries);
    let den = means.d_bar_t - means.d_bar_c;
    if den.abs() < ZERO_TOL {
        return Err(EstimationError::ZeroDenominator { denominator: den });
    }
    let point = (means.y_bar_t - means.y_bar_c) / den;
    let mom = cluster_level_moments(summaries)?;
    let raw = (mom.var_y + point * point * mom.var_d - 2.0 * point * mom.cov_yd) / (den * den);
    let variance = raw.max(0.0);
    let z = normal::two_sided_critical(alpha);
    let mut report = EstimateReport::new(
        Method::ClusterLevel,
        point,
        Some(variance),
        ConfidenceRegion::symmetric(point, z * variance.sqrt(), alpha),
    );
    report.diag("denominator", den);
    report.diag("compliance_rate", itt_estimates(summaries).mu_d);
    if raw < 0.0 {
        report.warnings.push(format!("negative Delta-method variance {raw:e} truncated to zero"));
    }
    report.flag_small_j(summaries.len());
    Ok(report)
}

/// Arm totals used by the unit-level closed forms.
#[derive(Debug, Clone, Copy)]
struct ArmTotals {
    n_t: f64,
    n_c: f64,
    y_t: f64,
    y_c: f64,
    d_t: f64,
    d_c: f64,
}

impl ArmTotals {
    fn of(summaries: &[ClusterSummary]) -> Self {
        let mut a = ArmTotals {
            n_t: 0.0,
            n_c: 0.0,
            y_t: 0.0,
            y_c: 0.0,
            d_t: 0.0,
            d_c: 0.0,
        };
        for s in summaries {
            if s.treated {
                a.n_t += s.n as f64;
                a.y_t += s.y_sum;
                a.d_t += s.d_sum;
            } else {
                a.n_c += s.n as f64;
                a.y_c += s.y_sum;
                a.d_c += s.d_sum;
            }
        }
        a
    }

    /// First-stage fitted compliance for the treated and control arms.
    fn fitted(&self) -> (f64, f64) {
        (self.d_t / self.n_t, self.d_c / self.n_c)
    }
}

/// Product form of the TSLS closed form.
pub fn tsls_point(summaries: &[ClusterSummary]) -> Result<f64, EstimationError> {
    let a = ArmTotals::of(summaries);
    let (p_t, p_c) = a.fitted();
    if p_t == p_c {
        return Err(EstimationError::RankDeficientFirstStage);
    }
    if (p_t - p_c).abs() < ZERO_TOL {
        return Err(EstimationError::ZeroDenominator { denominator: p_t - p_c });
    }
    let num = a.n_c * a.y_t - a.n_t * a.y_c;
    let den = a.n_c * a.d_t - a.n_t * a.d_c;
    Ok(num / den)
}

/// Ratio form of the TSLS closed form (difference in unit-level arm means).
pub fn tsls_point_ratio_form(summaries: &[ClusterSummary]) -> Result<f64, EstimationError> {
    let a = ArmTotals::of(summaries);
    let den = a.d_t / a.n_t - a.d_c / a.n_c;
    if den.abs() < ZERO_TOL {
        return Err(EstimationError::ZeroDenominator { denominator: den });
    }
    Ok((a.y_t / a.n_t - a.y_c / a.n_c) / den)
}

/// Cluster-robust variance of the TSLS coefficient, scalar form.
///
/// Residuals are `u_ji = Y_ji - D_ji * tau`; the fitted first stage is
/// constant within a cluster, so every sum reduces to cluster totals.
pub fn tsls_variance(summaries: &[ClusterSummary], tau: f64) -> f64 {
    let a = ArmTotals::of(summaries);
    let (p_t, p_c) = a.fitted();
    let n = a.n_t + a.n_c;
    let (mut sum_dhat, mut sum_dhat2, mut sum_u2, mut sum_du2, mut sum_u_du) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for s in summaries {
        let p = if s.treated { p_t } else { p_c };
        let nj = s.n as f64;
        let u = s.y_sum - s.d_sum * tau;
        let du = p * u;
        sum_dhat += nj * p;
        sum_dhat2 += nj * p * p;
        sum_u2 += u * u;
        sum_du2 += du * du;
        sum_u_du += u * du;
    }
    let num = sum_dhat * sum_dhat * sum_u2 + n * n * sum_du2 - 2.0 * n * sum_dhat * sum_u_du;
    let den = n * sum_dhat2 - sum_dhat * sum_dhat;
    (num / (den * den)).max(0.0)
}

/// Closed-form TSLS with a cluster-robust normal interval.
pub fn estimate_tsls(summaries: &[ClusterSummary], alpha: f64) -> Result<EstimateReport, EstimationError> {
    check_alpha(alpha)?;
    let point = tsls_point(summaries)?;
    let variance = tsls_variance(summaries, point);
    let z = normal::two_sided_critical(alpha);
    let mut report = EstimateReport::new(
        Method::Tsls,
        point,
        Some(variance),
        ConfidenceRegion::symmetric(point, z * variance.sqrt(), alpha),
    );
    let (p_t, p_c) = ArmTotals::of(summaries).fitted();
    report.diag("denominator", p_t - p_c);
    report.diag("compliance_rate", itt_estimates(summaries).mu_d);
    report.flag_small_j(summaries.len());
    Ok(report)
}

/// Difference in arm means of cluster sums for outcome and compliance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumDifferences {
    pub y: f64,
    pub d: f64,
}

pub fn sum_differences(summaries: &[ClusterSummary]) -> SumDifferences {
    let k = DesignCounts::of(summaries);
    let (m, mc) = (k.treated as f64, k.control() as f64);
    let a = ArmTotals::of(summaries);
    SumDifferences {
        y: a.y_t / m - a.y_c / mc,
        d: a.d_t / m - a.d_c / mc,
    }
}

fn d_scale(summaries: &[ClusterSummary]) -> f64 {
    summaries.iter().map(|s| s.d_sum.abs()).fold(1.0, f64::max)
}

/// How the effect-ratio confidence region is built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RegionMethod {
    Quadratic,
    Permutation(PermutationOptions),
}

/// Effect-ratio point estimate: the root of `T(tau) = 0`.
pub fn effect_ratio_point(summaries: &[ClusterSummary]) -> Result<f64, EstimationError> {
    let diff = sum_differences(summaries);
    if diff.d.abs() < ZERO_TOL * d_scale(summaries) {
        return Err(EstimationError::ZeroDenominator { denominator: diff.d });
    }
    Ok(diff.y / diff.d)
}

pub fn estimate_effect_ratio(
    summaries: &[ClusterSummary],
    alpha: f64,
    region_method: RegionMethod,
) -> Result<EstimateReport, EstimationError> {
    check_alpha(alpha)?;
    let point = effect_ratio_point(summaries)?;
    let region = match region_method {
        RegionMethod::Quadratic => ci::quadratic_region(summaries, alpha)?,
        RegionMethod::Permutation(opts) => ci::permutation_region(summaries, alpha, &opts)?,
    };
    let mut report = EstimateReport::new(Method::EffectRatio, point, None, region);
    let diff = sum_differences(summaries);
    report.diag("denominator", diff.d);
    report.diag("compliance_rate", itt_estimates(summaries).mu_d);
    report.diag("t_at_point", test_statistic(summaries, point));
    if let Ok(s2) = ci::variance_s2(summaries, point) {
        report.diag("s2_at_point", s2);
    }
    match region.region {
        Region::Empty => report.warnings.push(match region_method {
            RegionMethod::Quadratic => "quadratic confidence set is empty".to_string(),
            RegionMethod::Permutation(_) => {
                "permutation confidence set is empty; cluster-level effect homogeneity is doubtful".to_string()
            }
        }),
        r if r.is_infinite() => report
            .warnings
            .push("confidence set is unbounded: the instrument is weak and the data carry little information".to_string()),
        _ => {}
    }
    Ok(report)
}

/// `A_j(tau0) = Y_j - D_j * tau0` for every cluster.
pub fn adjusted_responses(summaries: &[ClusterSummary], tau0: f64) -> Vec<f64> {
    summaries.iter().map(|s| s.y_sum - s.d_sum * tau0).collect()
}

/// `T(tau0)`: difference in arm means of the adjusted responses.
pub fn test_statistic(summaries: &[ClusterSummary], tau0: f64) -> f64 {
    let k = DesignCounts::of(summaries);
    let (m, mc) = (k.treated as f64, k.control() as f64);
    let (mut t, mut c) = (0.0, 0.0);
    for (s, a) in summaries.iter().zip(adjusted_responses(summaries, tau0)) {
        if s.treated {
            t += a;
        } else {
            c += a;
        }
    }
    t / m - c / mc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::ClusterSummary as S;
    use rand::{Rng, SeedableRng};
    use rand_xoshiro::Xoshiro256StarStar;

    fn random_summaries(rng: &mut impl Rng, j: usize, equal_sizes: bool) -> Vec<S> {
        (0..j)
            .map(|k| {
                let treated = k % 3 != 0;
                let n = if equal_sizes { 12 } else { rng.random_range(3..40) };
                let d = if treated { rng.random_range(0..=n) as f64 } else { rng.random_range(0..=n / 4) as f64 };
                let y = rng.random_range(-20.0..60.0) + 1.7 * d;
                S::from_sums(treated, n, y, d)
            })
            .collect()
    }

    #[test]
    fn full_compliance_constant_arms() {
        let s: Vec<S> = (0..6)
            .map(|k| {
                let t = k < 3;
                S::from_sums(t, 5, if t { 15.0 } else { 5.0 }, if t { 5.0 } else { 0.0 })
            })
            .collect();
        let r = estimate_cluster_level(&s, 0.05).unwrap();
        assert_eq!(r.point, 2.0);
        assert_eq!(r.variance, Some(0.0));
        assert_eq!(r.region.region, Region::Finite { lo: 2.0, hi: 2.0 });
    }

    #[test]
    fn cluster_level_errors() {
        let s = vec![S::from_sums(true, 2, 1.0, 1.0), S::from_sums(false, 2, 0.0, 0.0)];
        assert!(matches!(estimate_cluster_level(&s, 0.05), Err(EstimationError::DegenerateVariance(_))));
        let s = vec![
            S::from_sums(true, 2, 1.0, 1.0),
            S::from_sums(false, 2, 0.0, 1.0),
            S::from_sums(false, 2, 0.0, 1.0),
        ];
        assert!(matches!(estimate_cluster_level(&s, 0.05), Err(EstimationError::ZeroDenominator { .. })));
    }

    #[test]
    fn cluster_level_variance_matches_term_by_term() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(10);
        let s = random_summaries(&mut rng, 10, false);
        let r = estimate_cluster_level(&s, 0.05).unwrap();
        // independent transcription with explicit indicators
        let zj: Vec<f64> = s.iter().map(|x| x.z()).collect();
        let (j, m) = (10.0, zj.iter().sum::<f64>());
        let ybt = (0..10).map(|k| zj[k] * s[k].y_bar).sum::<f64>() / m;
        let ybc = (0..10).map(|k| (1.0 - zj[k]) * s[k].y_bar).sum::<f64>() / (j - m);
        let dbt = (0..10).map(|k| zj[k] * s[k].d_bar).sum::<f64>() / m;
        let dbc = (0..10).map(|k| (1.0 - zj[k]) * s[k].d_bar).sum::<f64>() / (j - m);
        let mut sy = 0.0;
        let mut sd = 0.0;
        let mut cov_t = 0.0;
        let mut cov_c = 0.0;
        for k in 0..10 {
            sy += zj[k] * (s[k].y_bar - ybt).powi(2) + (1.0 - zj[k]) * (s[k].y_bar - ybc).powi(2);
            sd += zj[k] * (s[k].d_bar - dbt).powi(2) + (1.0 - zj[k]) * (s[k].d_bar - dbc).powi(2);
            cov_t += zj[k] * (s[k].y_bar - ybt) * (s[k].d_bar - dbt);
            cov_c += (1.0 - zj[k]) * (s[k].y_bar - ybc) * (s[k].d_bar - dbc);
        }
        let (sy, sd) = (sy / (j - 2.0), sd / (j - 2.0));
        let vy = j * sy / (m * (j - m));
        let vd = j * sd / (m * (j - m));
        let cv = cov_t / (m * m) + cov_c / ((j - m) * (j - m));
        let tau = (ybt - ybc) / (dbt - dbc);
        let den2 = (dbt - dbc).powi(2);
        let v = vy / den2 + tau * tau * vd / den2 - 2.0 * tau * cv / den2;
        assert!((r.point - tau).abs() < 1e-12 * tau.abs().max(1.0));
        assert!((r.variance.unwrap() - v).abs() < 1e-10 * v.abs());
    }

    #[test]
    fn tsls_forms_agree() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(1);
        for _ in 0..100 {
            let s = random_summaries(&mut rng, 12, false);
            let a = tsls_point(&s).unwrap();
            let b = tsls_point_ratio_form(&s).unwrap();
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn tsls_rank_deficiency() {
        let s = vec![
            S::from_sums(true, 2, 1.0, 0.0),
            S::from_sums(false, 3, 0.0, 0.0),
            S::from_sums(false, 2, 0.0, 0.0),
        ];
        assert_eq!(tsls_point(&s), Err(EstimationError::RankDeficientFirstStage));
    }

    #[test]
    fn perfect_compliance_equal_sizes_is_difference_in_means() {
        let s: Vec<S> = [(true, 9.0), (true, 12.0), (false, 3.0), (false, 1.0), (false, 2.0)]
            .iter()
            .map(|&(t, y)| S::from_sums(t, 3, y, if t { 3.0 } else { 0.0 }))
            .collect();
        let itt = itt_estimates(&s);
        let t = tsls_point(&s).unwrap();
        assert!((t - itt.mu_y / itt.mu_d).abs() < 1e-12);
        // unit-level means: treated 21/6, control 6/9
        assert!((t - (21.0 / 6.0 - 6.0 / 9.0)).abs() < 1e-12);
    }

    #[test]
    fn effect_ratio_is_ratio_of_itt() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(9);
        let s = random_summaries(&mut rng, 9, false);
        let itt = itt_estimates(&s);
        let p = effect_ratio_point(&s).unwrap();
        assert!((p - itt.mu_y / itt.mu_d).abs() < 1e-12 * p.abs().max(1.0));
        assert!(test_statistic(&s, p).abs() < 1e-10 * d_scale(&s) * p.abs().max(1.0));
    }

    #[test]
    fn effect_ratio_zero_outcomes() {
        let s = vec![
            S::from_sums(true, 4, 0.0, 3.0),
            S::from_sums(true, 4, 0.0, 2.0),
            S::from_sums(false, 4, 0.0, 0.0),
            S::from_sums(false, 5, 0.0, 1.0),
        ];
        let r = estimate_effect_ratio(&s, 0.05, RegionMethod::Quadratic).unwrap();
        assert_eq!(r.point, 0.0);
        assert!(r.variance.is_none());
    }

    #[test]
    fn effect_ratio_zero_denominator() {
        let s = vec![
            S::from_sums(true, 4, 3.0, 1.0),
            S::from_sums(true, 4, 1.0, 1.0),
            S::from_sums(false, 4, 2.0, 1.0),
            S::from_sums(false, 5, 0.0, 1.0),
        ];
        assert!(matches!(
            estimate_effect_ratio(&s, 0.05, RegionMethod::Quadratic),
            Err(EstimationError::ZeroDenominator { .. })
        ));
    }

    #[test]
    fn adjusted_response_examples() {
        let s = vec![S::from_sums(true, 3, 5.0, 2.0), S::from_sums(false, 3, 4.0, 0.0)];
        assert_eq!(adjusted_responses(&s, 0.0), vec![5.0, 4.0]);
        assert_eq!(adjusted_responses(&s, 1.5)[0], 2.0);
    }

    #[test]
    fn statistic_is_affine_with_known_slope() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(4);
        let s = random_summaries(&mut rng, 11, false);
        let slope = -sum_differences(&s).d;
        let grid: Vec<f64> = (-20..=20).map(|k| k as f64 * 0.37).collect();
        for w in grid.windows(2) {
            let fd = (test_statistic(&s, w[1]) - test_statistic(&s, w[0])) / (w[1] - w[0]);
            assert!((fd - slope).abs() < 1e-9 * slope.abs().max(1.0), "{fd} vs {slope}");
        }
    }

    #[test]
    fn statistic_without_compliance_ignores_tau() {
        let s = vec![
            S::from_sums(true, 4, 3.0, 0.0),
            S::from_sums(true, 4, 5.0, 0.0),
            S::from_sums(false, 4, 2.0, 0.0),
        ];
        for t in [-3.0, 0.0, 8.0] {
            assert_eq!(test_statistic(&s, t), 4.0 - 2.0);
        }
    }

    #[test]
    fn equal_cluster_sizes_collapse_all_three() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(77);
        for _ in 0..50 {
            let s = random_summaries(&mut rng, 9, true);
            let cl = estimate_cluster_level(&s, 0.05).unwrap().point;
            let ts = tsls_point(&s).unwrap();
            let er = effect_ratio_point(&s).unwrap();
            let tol = 1e-10 * er.abs().max(1.0);
            assert!((cl - er).abs() < tol && (ts - er).abs() < tol, "{cl} {ts} {er}");
        }
    }

    #[test]
    fn outcome_scaling() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(21);
        let s = random_summaries(&mut rng, 10, false);
        let k = -2.5;
        let scaled: Vec<S> = s.iter().map(|x| S::from_sums(x.treated, x.n, x.y_sum * k, x.d_sum)).collect();
        let a = estimate_cluster_level(&s, 0.05).unwrap();
        let b = estimate_cluster_level(&scaled, 0.05).unwrap();
        assert!((b.point - k * a.point).abs() < 1e-10 * a.point.abs().max(1.0));
        assert!((b.variance.unwrap() - k * k * a.variance.unwrap()).abs() < 1e-9 * a.variance.unwrap());
        let a = estimate_tsls(&s, 0.05).unwrap();
        let b = estimate_tsls(&scaled, 0.05).unwrap();
        assert!((b.point - k * a.point).abs() < 1e-10 * a.point.abs().max(1.0));
        assert!((b.variance.unwrap() - k * k * a.variance.unwrap()).abs() < 1e-9 * a.variance.unwrap());
        let a = effect_ratio_point(&s).unwrap();
        let b = effect_ratio_point(&scaled).unwrap();
        assert!((b - k * a).abs() < 1e-10 * a.abs().max(1.0));
    }

    #[test]
    fn alpha_validated() {
        let mut rng = Xoshiro256StarStar::seed_from_u64(2);
        let s = random_summaries(&mut rng, 6, false);
        assert!(matches!(estimate_tsls(&s, 1.0), Err(EstimationError::InvalidArgument(_))));
    }
}
