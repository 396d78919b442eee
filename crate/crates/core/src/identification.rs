//! Population-level analytics: the true complier average causal effect,
//! the implicit cluster weights of each estimator and the values they
//! identify, plus their limits under growing cluster sizes and growing
//! cluster counts.

use std::collections::BTreeMap;
use std::io::Read;

use num_rational::Ratio;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;
use serde::{Deserialize, Serialize};

use crate::data::ClusterSummary;
use crate::error::IdentificationError;
use crate::estimators::Method;

/// Unit-level potential outcomes and treatment receipts of one cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialOutcomes {
    pub y1: Vec<f64>,
    pub y0: Vec<f64>,
    pub d1: Vec<bool>,
    pub d0: Vec<bool>,
}

/// Full description of one cluster of a synthetic population.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleClusterSpec {
    pub n: usize,
    /// Number of compliers.
    pub n_co: usize,
    /// Complier average effect in this cluster.
    pub tau: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub units: Option<PotentialOutcomes>,
}

impl OracleClusterSpec {
    pub fn new(n: usize, n_co: usize, tau: f64) -> Result<Self, IdentificationError> {
        if n == 0 || n_co > n || !tau.is_finite() {
            return Err(IdentificationError::InvalidSpec(format!(
                "need 0 <= n_co <= n, n >= 1 and finite tau; got n = {n}, n_co = {n_co}, tau = {tau}"
            )));
        }
        Ok(Self { n, n_co, tau, units: None })
    }

    /// Builds a spec from unit-level potential outcomes, deriving `n_co`
    /// and `tau` from them.
    pub fn from_units(units: PotentialOutcomes) -> Result<Self, IdentificationError> {
        let n = units.y1.len();
        if [units.y0.len(), units.d1.len(), units.d0.len()].iter().any(|&l| l != n) || n == 0 {
            return Err(IdentificationError::InvalidSpec("potential-outcome arrays differ in length".into()));
        }
        if units.d0.iter().zip(&units.d1).any(|(&d0, &d1)| d0 && !d1) {
            return Err(IdentificationError::InvalidSpec("defier present (d0 = 1, d1 = 0)".into()));
        }
        let (mut n_co, mut effect) = (0usize, 0.0);
        for i in 0..n {
            if units.d1[i] && !units.d0[i] {
                n_co += 1;
                effect += units.y1[i] - units.y0[i];
            }
        }
        let tau = if n_co > 0 { effect / n_co as f64 } else { 0.0 };
        Ok(Self {
            n,
            n_co,
            tau,
            units: Some(units),
        })
    }

    /// Expands the spec into units: the first `n_co` units comply, every
    /// unit has control outcome `baseline`, and compliers gain `tau`.
    pub fn with_units(&self, baseline: f64) -> Self {
        let co = |i: usize| i < self.n_co;
        let units = PotentialOutcomes {
            y0: vec![baseline; self.n],
            y1: (0..self.n).map(|i| if co(i) { baseline + self.tau } else { baseline }).collect(),
            d1: (0..self.n).map(co).collect(),
            d0: vec![false; self.n],
        };
        Self {
            units: Some(units),
            ..self.clone()
        }
    }

    /// Observed cluster summary under assignment `treated`.
    pub fn realize(&self, treated: bool) -> Option<ClusterSummary> {
        let u = self.units.as_ref()?;
        let (y, d) = if treated { (&u.y1, &u.d1) } else { (&u.y0, &u.d0) };
        let d_sum = d.iter().filter(|&&v| v).count() as f64;
        Some(ClusterSummary::from_sums(treated, self.n, y.iter().sum(), d_sum))
    }

    pub fn complier_share(&self) -> f64 {
        self.n_co as f64 / self.n as f64
    }
}

/// Reads a population file with header `n,n_co,tau`.
pub fn read_specs<R: Read>(reader: R) -> Result<Vec<OracleClusterSpec>, IdentificationError> {
    #[derive(Deserialize)]
    struct Row {
        n: usize,
        n_co: usize,
        tau: f64,
    }
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut out = Vec::new();
    for (i, row) in rdr.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| IdentificationError::InvalidSpec(format!("row {}: {e}", i + 1)))?;
        out.push(OracleClusterSpec::new(row.n, row.n_co, row.tau)?);
    }
    if out.is_empty() {
        return Err(IdentificationError::InvalidSpec("no clusters".into()));
    }
    Ok(out)
}

fn raw_weights(specs: &[OracleClusterSpec], method: Method) -> Vec<f64> {
    let n: usize = specs.iter().map(|s| s.n).sum();
    specs
        .iter()
        .map(|s| match method {
            Method::ClusterLevel => s.complier_share(),
            Method::Tsls => s.n_co as f64 * (n - s.n) as f64,
            Method::EffectRatio => s.n_co as f64,
        })
        .collect()
}

/// Normalized cluster weights implied by `method`. Clusters without
/// compliers get weight zero.
pub fn method_weights(specs: &[OracleClusterSpec], method: Method) -> Result<Vec<f64>, IdentificationError> {
    let raw = raw_weights(specs, method);
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return Err(IdentificationError::NoCompliers);
    }
    Ok(raw.into_iter().map(|w| w / total).collect())
}

/// Value identified by `method`: the weighted average of the cluster effects.
pub fn identified_value(specs: &[OracleClusterSpec], method: Method) -> Result<f64, IdentificationError> {
    let w = method_weights(specs, method)?;
    Ok(w.iter().zip(specs).map(|(w, s)| w * s.tau).sum())
}

/// The complier average causal effect of the population.
pub fn true_cace(specs: &[OracleClusterSpec]) -> Result<f64, IdentificationError> {
    identified_value(specs, Method::EffectRatio)
}

pub type Rational = Ratio<i64>;

fn exact_tau(tau: f64) -> Result<Rational, IdentificationError> {
    Rational::approximate_float(tau)
        .filter(|r| (*r.numer() as f64 / *r.denom() as f64) == tau)
        .ok_or_else(|| IdentificationError::InvalidSpec(format!("tau = {tau} has no exact 64-bit rational form")))
}

/// [`method_weights`] in exact rational arithmetic.
pub fn method_weights_exact(specs: &[OracleClusterSpec], method: Method) -> Result<Vec<Rational>, IdentificationError> {
    let n: i64 = specs.iter().map(|s| s.n as i64).sum();
    let raw: Vec<Rational> = specs
        .iter()
        .map(|s| match method {
            Method::ClusterLevel => Rational::new(s.n_co as i64, s.n as i64),
            Method::Tsls => Rational::from_integer(s.n_co as i64 * (n - s.n as i64)),
            Method::EffectRatio => Rational::from_integer(s.n_co as i64),
        })
        .collect();
    let total: Rational = raw.iter().copied().sum();
    if total == Rational::from_integer(0) {
        return Err(IdentificationError::NoCompliers);
    }
    Ok(raw.into_iter().map(|w| w / total).collect())
}

/// [`identified_value`] in exact rational arithmetic; every `tau` must be a
/// dyadic or otherwise exactly representable rational.
pub fn identified_value_exact(specs: &[OracleClusterSpec], method: Method) -> Result<Rational, IdentificationError> {
    let w = method_weights_exact(specs, method)?;
    let mut acc = Rational::from_integer(0);
    for (w, s) in w.iter().zip(specs) {
        acc += w * exact_tau(s.tau)?;
    }
    Ok(acc)
}

/// True effect, weights and identified values of every method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightTable {
    pub true_cace: f64,
    pub weights: BTreeMap<Method, Vec<f64>>,
    pub identified: BTreeMap<Method, f64>,
}

impl WeightTable {
    pub fn compute(specs: &[OracleClusterSpec]) -> Result<Self, IdentificationError> {
        let mut weights = BTreeMap::new();
        let mut identified = BTreeMap::new();
        for m in Method::ALL {
            weights.insert(m, method_weights(specs, m)?);
            identified.insert(m, identified_value(specs, m)?);
        }
        Ok(Self {
            true_cace: true_cace(specs)?,
            weights,
            identified,
        })
    }

    /// Identified value minus the true effect.
    pub fn gap(&self, method: Method) -> f64 {
        self.identified[&method] - self.true_cace
    }
}

/// Limits of complier shares, relative sizes and effects as every cluster grows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticSpec {
    /// Limiting complier proportion of each cluster.
    pub p_co: Vec<f64>,
    /// `rho[j][k]`: limit of `n_j / n_k`.
    pub rho: Vec<Vec<f64>>,
    /// Limiting cluster effects.
    pub tau_inf: Vec<f64>,
}

impl AsymptoticSpec {
    pub fn new(p_co: Vec<f64>, rho: Vec<Vec<f64>>, tau_inf: Vec<f64>) -> Result<Self, IdentificationError> {
        let j = p_co.len();
        if j == 0 || tau_inf.len() != j || rho.len() != j || rho.iter().any(|r| r.len() != j) {
            return Err(IdentificationError::InvalidSpec("dimension mismatch".into()));
        }
        if p_co.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(IdentificationError::InvalidSpec("complier proportions must lie in (0, 1)".into()));
        }
        for a in 0..j {
            if (rho[a][a] - 1.0).abs() > 1e-9 {
                return Err(IdentificationError::InvalidSpec(format!("rho[{a}][{a}] must be 1")));
            }
            for b in 0..j {
                if rho[a][b].is_nan() || rho[a][b] < 0.0 || (rho[a][b] * rho[b][a] - 1.0).abs() > 1e-9 {
                    return Err(IdentificationError::InvalidSpec(format!("rho[{a}][{b}] * rho[{b}][{a}] must be 1")));
                }
            }
        }
        Ok(Self { p_co, rho, tau_inf })
    }

    /// Builds the spec from limiting relative sizes `s_j` (any common scale).
    pub fn from_relative_sizes(p_co: Vec<f64>, sizes: &[f64], tau_inf: Vec<f64>) -> Result<Self, IdentificationError> {
        let rho = sizes.iter().map(|a| sizes.iter().map(|b| a / b).collect()).collect();
        Self::new(p_co, rho, tau_inf)
    }

    fn len(&self) -> usize {
        self.p_co.len()
    }
}

/// Limit of `tau_CL - tau` as cluster sizes grow with fixed ratios.
pub fn asymptotic_gap_cluster_level(spec: &AsymptoticSpec) -> f64 {
    let p = &spec.p_co;
    let total_p: f64 = p.iter().sum();
    (0..spec.len())
        .map(|j| {
            let (mut num, mut mix) = (0.0, p[j]);
            for l in (0..spec.len()).filter(|&l| l != j) {
                num += p[j] * p[l] * (spec.rho[l][j] - 1.0);
                mix += spec.rho[l][j] * p[l];
            }
            spec.tau_inf[j] * num / (total_p * mix)
        })
        .sum()
}

/// Limit of `tau_TSLS - tau` as cluster sizes grow with fixed ratios.
///
/// With sizes measured relative to the first cluster, `r_l = rho[l][0]`,
/// the unit-level weights tend to `p_l r_l (R - r_l)` with `R = Σ r`, and
/// the true weights to `p_l r_l`.
pub fn asymptotic_gap_tsls(spec: &AsymptoticSpec) -> f64 {
    let r: Vec<f64> = spec.rho.iter().map(|row| row[0]).collect();
    let total_r: f64 = r.iter().sum();
    let p = &spec.p_co;
    let s_tsls: f64 = (0..spec.len()).map(|k| p[k] * r[k] * (total_r - r[k])).sum();
    let s_true: f64 = (0..spec.len()).map(|k| p[k] * r[k]).sum();
    (0..spec.len())
        .map(|j| spec.tau_inf[j] * p[j] * r[j] * ((total_r - r[j]) / s_tsls - 1.0 / s_true))
        .sum()
}

/// Finite population with sizes `scale * r_j` and complier counts rounded
/// from the limiting proportions.
pub fn scaled_specs(spec: &AsymptoticSpec, scale: f64) -> Result<Vec<OracleClusterSpec>, IdentificationError> {
    (0..spec.len())
        .map(|j| {
            let n = (scale * spec.rho[j][0]).round() as usize;
            let n_co = (spec.p_co[j] * n as f64).round() as usize;
            OracleClusterSpec::new(n, n_co, spec.tau_inf[j])
        })
        .collect()
}

/// Identification gaps for a population with many small clusters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowingJGap {
    pub clusters: usize,
    pub seed: u64,
    pub true_cace: f64,
    /// `|tau_CL - tau|`
    pub cluster_level: f64,
    /// `|tau_TSLS - tau|`
    pub tsls: f64,
}

/// Draws `j` cluster sizes from `size_law` (pairs of size and probability),
/// gives each cluster a complier share `p_co` and the effect `tau_law[size]`,
/// and reports how far the cluster-level and TSLS targets sit from the truth.
pub fn growing_j_gap_demo(
    size_law: &[(usize, f64)],
    tau_law: &BTreeMap<usize, f64>,
    p_co: f64,
    j: usize,
    seed: u64,
) -> Result<GrowingJGap, IdentificationError> {
    if !(p_co > 0.0 && p_co <= 1.0) {
        return Err(IdentificationError::InvalidSpec(format!("p_co must lie in (0, 1], got {p_co}")));
    }
    let dist = WeightedIndex::new(size_law.iter().map(|&(_, w)| w))
        .map_err(|e| IdentificationError::InvalidSpec(format!("size law: {e}")))?;
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let sizes: Vec<usize> = (0..j).map(|_| size_law[dist.sample(&mut rng)].0).collect();
    let taus = sizes
        .iter()
        .map(|n| {
            tau_law
                .get(n)
                .copied()
                .ok_or_else(|| IdentificationError::InvalidSpec(format!("no effect given for size {n}")))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let total_n: f64 = sizes.iter().map(|&n| n as f64).sum();
    let (mut w_true, mut w_cl, mut w_tsls) = (0.0, 0.0, 0.0);
    let (mut v_true, mut v_cl, mut v_tsls) = (0.0, 0.0, 0.0);
    for (&n, &tau) in sizes.iter().zip(&taus) {
        let n = n as f64;
        let n_co = p_co * n;
        let tsls = n_co * (total_n - n);
        w_true += n_co;
        v_true += n_co * tau;
        w_cl += p_co;
        v_cl += p_co * tau;
        w_tsls += tsls;
        v_tsls += tsls * tau;
    }
    let truth = v_true / w_true;
    Ok(GrowingJGap {
        clusters: j,
        seed,
        true_cace: truth,
        cluster_level: (v_cl / w_cl - truth).abs(),
        tsls: (v_tsls / w_tsls - truth).abs(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::{prop, prop_assert, proptest, Strategy};

    fn table(n_co: [usize; 3]) -> Vec<OracleClusterSpec> {
        [(80, n_co[0], 1.0), (10, n_co[1], 2.0), (10, n_co[2], 1.5)]
            .iter()
            .map(|&(n, c, t)| OracleClusterSpec::new(n, c, t).unwrap())
            .collect()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn first_table() {
        let s = table([40, 5, 5]);
        assert!(close(true_cace(&s).unwrap(), 1.15));
        let cl = method_weights(&s, Method::ClusterLevel).unwrap();
        assert!(cl.iter().all(|&w| close(w, 1.0 / 3.0)));
        assert!(close(identified_value(&s, Method::ClusterLevel).unwrap(), 1.5));
        let ts = method_weights(&s, Method::Tsls).unwrap();
        assert!(close(ts[0], 800.0 / 1700.0) && close(ts[1], 450.0 / 1700.0) && close(ts[2], 450.0 / 1700.0));
        assert!((identified_value(&s, Method::Tsls).unwrap() - 1.397).abs() < 5e-4);
        assert_eq!(identified_value_exact(&s, Method::Tsls).unwrap(), Rational::new(2375, 1700));
        assert_eq!(identified_value_exact(&s, Method::EffectRatio).unwrap(), Rational::new(23, 20));
        assert_eq!(identified_value_exact(&s, Method::ClusterLevel).unwrap(), Rational::new(3, 2));
    }

    #[test]
    fn second_table() {
        let s = table([8, 8, 8]);
        assert!(close(true_cace(&s).unwrap(), 1.5));
        let ts = method_weights(&s, Method::Tsls).unwrap();
        assert!(close(ts[0], 0.1) && close(ts[1], 0.45) && close(ts[2], 0.45));
        assert!(close(identified_value(&s, Method::Tsls).unwrap(), 1.675));
        assert!((identified_value(&s, Method::ClusterLevel).unwrap() - 1.706).abs() < 5e-4);
        assert_eq!(identified_value_exact(&s, Method::ClusterLevel).unwrap(), Rational::new(29, 17));
        assert_eq!(identified_value_exact(&s, Method::Tsls).unwrap(), Rational::new(67, 40));
    }

    #[test]
    fn single_cluster_and_no_compliers() {
        let s = vec![OracleClusterSpec::new(7, 3, 2.5).unwrap()];
        assert_eq!(true_cace(&s).unwrap(), 2.5);
        let none = vec![OracleClusterSpec::new(7, 0, 2.5).unwrap()];
        assert_eq!(true_cace(&none), Err(IdentificationError::NoCompliers));
    }

    #[test]
    fn clusters_without_compliers_get_no_weight() {
        let mut s = table([40, 5, 5]);
        s.push(OracleClusterSpec::new(30, 0, 100.0).unwrap());
        for m in Method::ALL {
            assert_eq!(method_weights(&s, m).unwrap()[3], 0.0);
        }
    }

    #[test]
    fn units_round_trip() {
        let s = OracleClusterSpec::new(6, 4, 1.5).unwrap().with_units(2.0);
        let back = OracleClusterSpec::from_units(s.units.clone().unwrap()).unwrap();
        assert_eq!((back.n, back.n_co, back.tau), (6, 4, 1.5));
        let t = s.realize(true).unwrap();
        assert_eq!((t.y_sum, t.d_sum), (12.0 + 6.0, 4.0));
        let c = s.realize(false).unwrap();
        assert_eq!((c.y_sum, c.d_sum), (12.0, 0.0));
    }

    #[test]
    fn defiers_rejected() {
        let u = PotentialOutcomes {
            y1: vec![0.0],
            y0: vec![0.0],
            d1: vec![false],
            d0: vec![true],
        };
        assert!(OracleClusterSpec::from_units(u).is_err());
    }

    #[test]
    fn spec_file() {
        let s = read_specs("n,n_co,tau\n80,40,1\n10,5,2\n10,5,1.5\n".as_bytes()).unwrap();
        assert_eq!(s, table([40, 5, 5]));
        assert!(read_specs("n,n_co,tau\n3,4,1\n".as_bytes()).is_err());
        assert!(read_specs("n,tau\n3,1\n".as_bytes()).is_err());
    }

    #[test]
    fn asymptotic_gaps_vanish_for_equal_sizes_or_equal_effects() {
        let eq = AsymptoticSpec::from_relative_sizes(vec![0.2, 0.5, 0.7], &[1.0, 1.0, 1.0], vec![1.0, 3.0, -2.0]).unwrap();
        assert!(asymptotic_gap_cluster_level(&eq).abs() < 1e-15);
        assert!(asymptotic_gap_tsls(&eq).abs() < 1e-15);
        let hom = AsymptoticSpec::from_relative_sizes(vec![0.2, 0.5, 0.7], &[8.0, 1.0, 3.0], vec![2.0; 3]).unwrap();
        assert!(asymptotic_gap_cluster_level(&hom).abs() < 1e-14);
        assert!(asymptotic_gap_tsls(&hom).abs() < 1e-14);
    }

    #[test]
    fn asymptotic_gap_matches_scaled_population() {
        let spec = AsymptoticSpec::from_relative_sizes(vec![0.1, 0.8, 0.8], &[8.0, 1.0, 1.0], vec![1.0, 2.0, 1.5]).unwrap();
        for (scale, tol) in [(1e2, 1e-1), (1e4, 1e-3), (1e6, 1e-5)] {
            let s = scaled_specs(&spec, scale).unwrap();
            let t = true_cace(&s).unwrap();
            let cl = identified_value(&s, Method::ClusterLevel).unwrap() - t;
            let ts = identified_value(&s, Method::Tsls).unwrap() - t;
            assert!((cl - asymptotic_gap_cluster_level(&spec)).abs() < tol);
            assert!((ts - asymptotic_gap_tsls(&spec)).abs() < tol);
        }
    }

    #[test]
    fn asymptotic_spec_validation() {
        assert!(AsymptoticSpec::new(vec![0.5, 0.5], vec![vec![1.0, 2.0], vec![2.0, 1.0]], vec![1.0, 1.0]).is_err());
        assert!(AsymptoticSpec::new(vec![0.5, 1.0], vec![vec![1.0, 2.0], vec![0.5, 1.0]], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn two_four_household_example() {
        // sizes 2 and 4 equally likely, half compliers, effects 4 and 2:
        // tau = (0.5*4 + 1*2) / 1.5 = 8/3 while tau_CL = (4 + 2) / 2 = 3
        let law = [(2, 0.5), (4, 0.5)];
        let taus = BTreeMap::from([(2, 4.0), (4, 2.0)]);
        let g = growing_j_gap_demo(&law, &taus, 0.5, 200_000, 1).unwrap();
        assert!((g.cluster_level - 1.0 / 3.0).abs() < 0.01, "{g:?}");
        assert!(g.tsls < 10.0 / 200_000.0, "{g:?}");
        assert_eq!(g.seed, 1);
    }

    #[test]
    fn growing_j_equal_sizes_have_no_gap() {
        let taus = BTreeMap::from([(3, 1.0)]);
        let g = growing_j_gap_demo(&[(3, 1.0)], &taus, 0.4, 1000, 9).unwrap();
        assert_eq!(g.cluster_level, 0.0);
        assert!(g.tsls < 1e-12);
    }

    fn spec_strategy() -> impl Strategy<Value = Vec<OracleClusterSpec>> {
        prop::collection::vec((1usize..200, 0.0f64..1.0, -5.0f64..5.0), 2..12).prop_map(|v| {
            v.into_iter()
                .map(|(n, share, tau)| OracleClusterSpec::new(n, ((n as f64 * share).round() as usize).max(1).min(n), tau).unwrap())
                .collect()
        })
    }

    proptest! {
        #[test]
        fn weights_sum_to_one(specs in spec_strategy()) {
            for m in Method::ALL {
                let s: f64 = method_weights(&specs, m).unwrap().iter().sum();
                prop_assert!((s - 1.0).abs() < 1e-12);
            }
        }

        #[test]
        fn equal_sizes_identify_the_truth(n in 1usize..100, cl in prop::collection::vec((0.0f64..1.0, -4.0f64..4.0), 2..10)) {
            let specs: Vec<_> = cl
                .iter()
                .map(|&(share, tau)| OracleClusterSpec::new(n, ((share * n as f64).ceil() as usize).clamp(1, n), tau).unwrap())
                .collect();
            let truth = true_cace(&specs).unwrap();
            for m in Method::ALL {
                prop_assert!((identified_value(&specs, m).unwrap() - truth).abs() < 1e-12);
            }
        }

        #[test]
        fn constant_effects_identify_the_truth(specs in spec_strategy(), c in -3.0f64..3.0) {
            let specs: Vec<_> = specs.into_iter().map(|s| OracleClusterSpec { tau: c, ..s }).collect();
            for m in Method::ALL {
                prop_assert!((identified_value(&specs, m).unwrap() - c).abs() < 1e-12);
            }
        }

        #[test]
        fn larger_clusters_smaller_effects_favor_cluster_level(
            sizes in prop::collection::btree_set(1usize..500, 2..8),
            k in 1usize..100,
            base in -3.0f64..3.0,
        ) {
            // every cluster has complier share k/100; effects fall as size grows
            let specs: Vec<_> = sizes
                .iter()
                .enumerate()
                .map(|(i, &s)| OracleClusterSpec::new(s * 100, s * k, base - i as f64).unwrap())
                .collect();
            prop_assert!(identified_value(&specs, Method::ClusterLevel).unwrap() > true_cace(&specs).unwrap());
        }
    }
}
