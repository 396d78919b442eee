//! Monte Carlo study of the three estimators on populations drawn from a
//! linear mixed model with cluster-level random effects, size-dependent
//! complier effects and one-sided noncompliance.
//!
//! Each replicate resamples `J` (size, compliance rate) pairs from a table,
//! draws complier status per unit, cluster and unit errors from a Student t
//! law scaled to a target intraclass correlation, randomizes `m` clusters to
//! treatment and runs every estimator. Per-replicate generators are derived
//! from the master seed and the replicate coordinates, so results do not
//! depend on how replicates are scheduled across workers.

use std::fmt::Write as _;
use std::io::Read;
use std::path::PathBuf;

use rand::distr::Distribution;
use rand::Rng;
use rand_distr::{StandardNormal, StudentT};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ci::{random_assignment, PermutationOptions};
use crate::data::{summarize, Cluster, ClusterSummary, ClusterTrial, Unit};
use crate::error::{DataError, SimulationError};
use crate::estimators::{estimate_cluster_level, estimate_effect_ratio, estimate_tsls, RegionMethod};
use crate::identification::OracleClusterSpec;
use crate::region::Region;
use crate::seeds;

/// Bundled synthetic table of 157 (cluster size, compliance rate) pairs.
pub const BUNDLED_TABLE: &str = include_str!("../data/size_compliance_table.csv");

/// One row of a size/compliance table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SizeComplianceRow {
    pub n: usize,
    pub compliance_rate: f64,
}

/// Where cluster sizes and compliance rates are resampled from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PiSource {
    #[default]
    Bundled,
    File(PathBuf),
    Rows(Vec<SizeComplianceRow>),
}

impl PiSource {
    pub fn load(&self) -> Result<Vec<SizeComplianceRow>, SimulationError> {
        let rows = match self {
            PiSource::Bundled => read_table(BUNDLED_TABLE.as_bytes())?,
            PiSource::File(path) => {
                let f = std::fs::File::open(path).map_err(|source| DataError::Io {
                    path: path.clone(),
                    source,
                })?;
                read_table(f)?
            }
            PiSource::Rows(rows) => rows.clone(),
        };
        if rows.is_empty() {
            return Err(SimulationError::EmptyPiSource);
        }
        for r in &rows {
            if r.n == 0 || !(0.0..=1.0).contains(&r.compliance_rate) {
                return Err(SimulationError::InvalidConfig(format!(
                    "table row n = {}, compliance_rate = {} is out of range",
                    r.n, r.compliance_rate
                )));
            }
        }
        Ok(rows)
    }
}

/// Reads a table with header `n,compliance_rate`.
pub fn read_table<R: Read>(reader: R) -> Result<Vec<SizeComplianceRow>, SimulationError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    rdr.deserialize()
        .collect::<Result<Vec<SizeComplianceRow>, _>>()
        .map_err(|e| SimulationError::Data(DataError::Csv(e)))
}

/// Parameters of the data-generating process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DgpConfig {
    pub alpha_intercept: f64,
    /// Complier effect at cluster size zero.
    pub tau: f64,
    /// Main effect of cluster size on the outcome.
    pub beta: f64,
    /// Change in the complier effect per unit of cluster size.
    pub gamma: f64,
    /// Intraclass correlation of the error terms.
    pub lambda_icc: f64,
    /// Degrees of freedom of the Student t errors; `None` gives normal errors.
    pub error_df: Option<f64>,
    pub pi_source: PiSource,
    #[serde(rename = "J")]
    pub j: usize,
    /// Treated clusters; defaults to `round(J * 112 / 157)`.
    pub m: Option<usize>,
    pub seed: u64,
}

impl Default for DgpConfig {
    fn default() -> Self {
        Self {
            alpha_intercept: 0.0,
            tau: 2.0,
            beta: 0.01,
            gamma: 0.0,
            lambda_icc: 0.28,
            error_df: Some(5.0),
            pi_source: PiSource::Bundled,
            j: 50,
            m: None,
            seed: 20_181_123,
        }
    }
}

/// Treated clusters for `j` clusters at the 112-of-157 treated fraction.
pub fn default_treated(j: usize) -> usize {
    ((j as f64 * 112.0 / 157.0).round() as usize).clamp(1, j.saturating_sub(1).max(1))
}

impl DgpConfig {
    pub fn treated(&self) -> usize {
        self.m.unwrap_or_else(|| default_treated(self.j))
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        if !(0.0..1.0).contains(&self.lambda_icc) {
            return Err(SimulationError::InvalidLambda(self.lambda_icc));
        }
        if let Some(df) = self.error_df {
            if df.is_nan() || df <= 2.0 {
                return Err(SimulationError::InvalidConfig(format!("error_df must exceed 2, got {df}")));
            }
        }
        let m = self.treated();
        if self.j < 2 || m == 0 || m >= self.j {
            return Err(SimulationError::InvalidConfig(format!("need 0 < m < J, got m = {m}, J = {}", self.j)));
        }
        for (name, v) in [("alpha_intercept", self.alpha_intercept), ("tau", self.tau), ("beta", self.beta), ("gamma", self.gamma)] {
            if !v.is_finite() {
                return Err(SimulationError::InvalidConfig(format!("{name} must be finite")));
            }
        }
        Ok(())
    }
}

/// Scales of the cluster and unit errors that give intraclass correlation
/// `lambda_target` when both are drawn from the same law.
pub fn icc_calibrate(lambda_target: f64, error_df: Option<f64>) -> Result<(f64, f64), SimulationError> {
    if !(0.0..1.0).contains(&lambda_target) {
        return Err(SimulationError::InvalidLambda(lambda_target));
    }
    if let Some(df) = error_df {
        if df.is_nan() || df <= 2.0 {
            return Err(SimulationError::InvalidConfig(format!("error_df must exceed 2, got {df}")));
        }
    }
    // both terms share the variance v of the base law, so v cancels
    Ok(((lambda_target / (1.0 - lambda_target)).sqrt(), 1.0))
}

enum ErrorLaw {
    Student(StudentT<f64>),
    Normal,
}

impl ErrorLaw {
    fn new(df: Option<f64>) -> Result<Self, SimulationError> {
        match df {
            Some(df) => StudentT::new(df)
                .map(ErrorLaw::Student)
                .map_err(|e| SimulationError::InvalidConfig(format!("error_df: {e}"))),
            None => Ok(ErrorLaw::Normal),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            ErrorLaw::Student(t) => t.sample(rng),
            ErrorLaw::Normal => StandardNormal.sample(rng),
        }
    }
}

/// A generated trial together with its potential-outcome summary.
#[derive(Debug, Clone)]
pub struct Population {
    pub trial: ClusterTrial,
    pub oracle: Vec<OracleClusterSpec>,
}

impl Population {
    /// Complier-weighted mean of the realized cluster effects, if any
    /// complier was drawn.
    pub fn true_cace(&self) -> Option<f64> {
        crate::identification::true_cace(&self.oracle).ok()
    }
}

struct Generator {
    table: Vec<SizeComplianceRow>,
    errors: ErrorLaw,
    cluster_scale: f64,
    unit_scale: f64,
}

impl Generator {
    fn new(dgp: &DgpConfig) -> Result<Self, SimulationError> {
        dgp.validate()?;
        let (cluster_scale, unit_scale) = icc_calibrate(dgp.lambda_icc, dgp.error_df)?;
        Ok(Self {
            table: dgp.pi_source.load()?,
            errors: ErrorLaw::new(dgp.error_df)?,
            cluster_scale,
            unit_scale,
        })
    }

    fn draw<R: Rng + ?Sized>(&self, dgp: &DgpConfig, rng: &mut R) -> Population {
        let j = dgp.j;
        let rows: Vec<SizeComplianceRow> = (0..j).map(|_| self.table[rng.random_range(0..self.table.len())]).collect();
        let z = random_assignment(rng, j, dgp.treated());
        let mut clusters = Vec::with_capacity(j);
        let mut oracle = Vec::with_capacity(j);
        for (k, (row, &treated)) in rows.iter().zip(&z).enumerate() {
            let n = row.n as f64;
            let c = self.cluster_scale * self.errors.sample(rng);
            let effect = dgp.tau + dgp.gamma * n;
            let mut n_co = 0;
            let units = (0..row.n)
                .map(|_| {
                    let complier = rng.random_bool(row.compliance_rate);
                    let eps = self.unit_scale * self.errors.sample(rng);
                    let y0 = dgp.alpha_intercept + dgp.beta * n + c + eps;
                    n_co += complier as usize;
                    let d = treated && complier;
                    Unit {
                        d,
                        y: if d { y0 + effect } else { y0 },
                    }
                })
                .collect();
            clusters.push(Cluster {
                id: format!("c{k}"),
                treated,
                units,
            });
            oracle.push(OracleClusterSpec {
                n: row.n,
                n_co,
                tau: effect,
                units: None,
            });
        }
        Population {
            trial: ClusterTrial::new(clusters).expect("generated design has both arms and finite outcomes"),
            oracle,
        }
    }
}

/// Draws one population from `dgp`, seeded by `dgp.seed`.
pub fn generate_population(dgp: &DgpConfig) -> Result<Population, SimulationError> {
    let generator = Generator::new(dgp)?;
    let mut rng = seeds::stream(dgp.seed, &[]);
    Ok(generator.draw(dgp, &mut rng))
}

/// Complier effect averaged over the table's complier distribution: the
/// estimand when clusters are resampled from the table without limit.
pub fn superpopulation_cace(dgp: &DgpConfig) -> Result<f64, SimulationError> {
    let table = dgp.pi_source.load()?;
    let (mut num, mut den) = (0.0, 0.0);
    for r in &table {
        let w = r.n as f64 * r.compliance_rate;
        num += w * (dgp.tau + dgp.gamma * r.n as f64);
        den += w;
    }
    if den <= 0.0 {
        return Err(SimulationError::InvalidConfig("size table has no compliers".into()));
    }
    Ok(num / den)
}

/// Which effect the confidence intervals are checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum CoverageTarget {
    /// The complier average effect of each generated population.
    #[default]
    Realized,
    /// The fixed effect of the resampling distribution.
    Superpopulation,
}

/// A grid of Monte Carlo cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimScenario {
    pub dgp: DgpConfig,
    #[serde(rename = "J_grid")]
    pub j_grid: Vec<usize>,
    pub gamma_grid: Vec<f64>,
    pub replicates: usize,
    pub alpha_level: f64,
    pub coverage_target: CoverageTarget,
    /// Also build Monte Carlo permutation regions with this many draws.
    pub permutation_draws: Option<usize>,
}

impl Default for SimScenario {
    fn default() -> Self {
        Self {
            dgp: DgpConfig::default(),
            j_grid: vec![20, 30, 50, 80, 100, 200],
            gamma_grid: vec![0.0, -0.03, 0.03],
            replicates: 2000,
            alpha_level: 0.05,
            coverage_target: CoverageTarget::Realized,
            permutation_draws: None,
        }
    }
}

impl SimScenario {
    pub fn from_json(text: &str) -> Result<Self, SimulationError> {
        let s: Self = serde_json::from_str(text).map_err(|e| SimulationError::InvalidConfig(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), SimulationError> {
        if self.replicates == 0 {
            return Err(SimulationError::InvalidConfig("replicates must be at least 1".into()));
        }
        if self.j_grid.is_empty() || self.gamma_grid.is_empty() {
            return Err(SimulationError::InvalidConfig("J_grid and gamma_grid must be non-empty".into()));
        }
        if !(self.alpha_level > 0.0 && self.alpha_level < 1.0) {
            return Err(SimulationError::InvalidConfig(format!("alpha_level must lie in (0, 1), got {}", self.alpha_level)));
        }
        if self.permutation_draws == Some(0) {
            return Err(SimulationError::InvalidConfig("permutation_draws must be positive".into()));
        }
        for cell in self.cells() {
            cell.validate().map_err(|e| match e {
                SimulationError::InvalidConfig(msg) => {
                    SimulationError::InvalidConfig(format!("cell J = {}, gamma = {}: {msg}", cell.j, cell.gamma))
                }
                other => other,
            })?;
        }
        Ok(())
    }

    /// The data-generating process of every cell, gamma-major.
    pub fn cells(&self) -> Vec<DgpConfig> {
        let mut out = Vec::new();
        for &gamma in &self.gamma_grid {
            for &j in &self.j_grid {
                out.push(DgpConfig {
                    gamma,
                    j,
                    m: if j == self.dgp.j { self.dgp.m } else { None },
                    ..self.dgp.clone()
                });
            }
        }
        out
    }

    /// Confidence-interval methods evaluated in every replicate.
    pub fn methods(&self) -> Vec<&'static str> {
        let mut m = vec!["er", "cl", "tsls"];
        if self.permutation_draws.is_some() {
            m.push("er_perm");
        }
        m
    }
}

/// One replicate's result for one method.
#[derive(Debug, Clone, PartialEq)]
enum MethodDraw {
    Ok { point: f64, region: Region },
    Skipped(String),
}

#[derive(Debug, Clone)]
struct Replicate {
    truth: Option<f64>,
    draws: Vec<MethodDraw>,
}

fn run_replicate(scenario: &SimScenario, gen: &Generator, dgp: &DgpConfig, seed: u64, target: f64) -> Replicate {
    let mut rng = seeds::stream(seed, &[]);
    let pop = gen.draw(dgp, &mut rng);
    let truth = match scenario.coverage_target {
        CoverageTarget::Realized => pop.true_cace(),
        CoverageTarget::Superpopulation => Some(target),
    };
    let s: Vec<ClusterSummary> = summarize(&pop.trial);
    let alpha = scenario.alpha_level;
    let wrap = |r: Result<crate::estimators::EstimateReport, crate::error::EstimationError>| match r {
        Ok(rep) => MethodDraw::Ok {
            point: rep.point,
            region: rep.region.region,
        },
        Err(e) => MethodDraw::Skipped(e.to_string()),
    };
    let mut draws = vec![
        wrap(estimate_effect_ratio(&s, alpha, RegionMethod::Quadratic)),
        wrap(estimate_cluster_level(&s, alpha)),
        wrap(estimate_tsls(&s, alpha)),
    ];
    if let Some(n) = scenario.permutation_draws {
        let opts = PermutationOptions::monte_carlo(n, seeds::derive(seed, &[1]));
        draws.push(wrap(estimate_effect_ratio(&s, alpha, RegionMethod::Permutation(opts))));
    }
    Replicate { truth, draws }
}

/// Aggregated metrics of one method in one grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellMetrics {
    pub method: String,
    #[serde(rename = "J")]
    pub j: usize,
    pub gamma: f64,
    pub treated: usize,
    pub replicates: usize,
    /// Replicates where the estimator failed or no complier was drawn.
    pub skipped: usize,
    pub mean_estimate: f64,
    pub mean_true_cace: f64,
    /// Mean estimate over mean true effect.
    pub bias_ratio: f64,
    pub coverage: f64,
    /// Half-width of the 95% normal interval for the coverage proportion.
    pub coverage_half_width: f64,
    /// Mean length over bounded intervals only.
    pub mean_ci_length: f64,
    pub infinite_ci_rate: f64,
    pub empty_ci_rate: f64,
}

impl CellMetrics {
    fn metric_pairs(&self) -> [(&'static str, f64); 11] {
        [
            ("bias_ratio", self.bias_ratio),
            ("coverage", self.coverage),
            ("coverage_half_width", self.coverage_half_width),
            ("mean_ci_length", self.mean_ci_length),
            ("infinite_ci_rate", self.infinite_ci_rate),
            ("empty_ci_rate", self.empty_ci_rate),
            ("mean_estimate", self.mean_estimate),
            ("mean_true_cace", self.mean_true_cace),
            ("replicates", self.replicates as f64),
            ("skipped", self.skipped as f64),
            ("treated", self.treated as f64),
        ]
    }
}

/// A replicate that did not yield an estimate for some method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkipRecord {
    pub method: String,
    #[serde(rename = "J")]
    pub j: usize,
    pub gamma: f64,
    pub replicate: usize,
    pub reason: String,
}

/// Results of a scenario run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimReport {
    pub scenario: SimScenario,
    pub master_seed: u64,
    pub superpopulation_cace: Vec<(f64, f64)>,
    pub cells: Vec<CellMetrics>,
    pub skips: Vec<SkipRecord>,
}

fn aggregate(method: &str, dgp: &DgpConfig, idx: usize, reps: &[Replicate], skips: &mut Vec<SkipRecord>) -> CellMetrics {
    let (mut n, mut est, mut truth, mut covered, mut len_sum, mut bounded, mut infinite, mut empty) =
        (0usize, 0.0, 0.0, 0usize, 0.0, 0usize, 0usize, 0usize);
    for (r, rep) in reps.iter().enumerate() {
        let reason = match (&rep.draws[idx], rep.truth) {
            (_, None) => Some("no compliers in the generated population".to_string()),
            (MethodDraw::Skipped(e), _) => Some(e.clone()),
            (MethodDraw::Ok { point, region }, Some(t)) => {
                n += 1;
                est += point;
                truth += t;
                covered += region.contains(t) as usize;
                match region.length() {
                    Some(l) if *region != Region::Empty => {
                        len_sum += l;
                        bounded += 1;
                    }
                    Some(_) => empty += 1,
                    None => infinite += 1,
                }
                None
            }
        };
        if let Some(reason) = reason {
            skips.push(SkipRecord {
                method: method.to_string(),
                j: dgp.j,
                gamma: dgp.gamma,
                replicate: r,
                reason,
            });
        }
    }
    let nf = n as f64;
    let coverage = covered as f64 / nf;
    CellMetrics {
        method: method.to_string(),
        j: dgp.j,
        gamma: dgp.gamma,
        treated: dgp.treated(),
        replicates: reps.len(),
        skipped: reps.len() - n,
        mean_estimate: est / nf,
        mean_true_cace: truth / nf,
        bias_ratio: est / truth,
        coverage,
        coverage_half_width: 1.96 * (coverage * (1.0 - coverage) / nf).sqrt(),
        mean_ci_length: if bounded > 0 { len_sum / bounded as f64 } else { f64::NAN },
        infinite_ci_rate: infinite as f64 / nf,
        empty_ci_rate: empty as f64 / nf,
    }
}

/// Runs every cell of `scenario` on a pool of `workers` threads.
pub fn run_scenario(scenario: &SimScenario, workers: usize) -> Result<SimReport, SimulationError> {
    scenario.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| SimulationError::InvalidConfig(format!("worker pool: {e}")))?;
    let master = scenario.dgp.seed;
    let methods = scenario.methods();
    let mut cells = Vec::new();
    let mut skips = Vec::new();
    let mut targets = Vec::new();
    for dgp in scenario.cells() {
        let gen = Generator::new(&dgp)?;
        let target = superpopulation_cace(&dgp)?;
        if !targets.iter().any(|&(g, _)| g == dgp.gamma) {
            targets.push((dgp.gamma, target));
        }
        let reps: Vec<Replicate> = pool.install(|| {
            (0..scenario.replicates)
                .into_par_iter()
                .map(|r| {
                    let seed = seeds::derive(master, &[dgp.j as u64, dgp.gamma.to_bits(), r as u64]);
                    run_replicate(scenario, &gen, &dgp, seed, target)
                })
                .collect()
        });
        for (idx, method) in methods.iter().enumerate() {
            cells.push(aggregate(method, &dgp, idx, &reps, &mut skips));
        }
        log::info!("finished cell J = {}, gamma = {}", dgp.j, dgp.gamma);
    }
    Ok(SimReport {
        scenario: scenario.clone(),
        master_seed: master,
        superpopulation_cace: targets,
        cells,
        skips,
    })
}

const TABLE_METHODS: [(&str, &str); 4] = [("er", "ER"), ("cl", "CL"), ("tsls", "TSLS"), ("er_perm", "ER-perm")];

impl SimReport {
    pub fn cell(&self, method: &str, j: usize, gamma: f64) -> Option<&CellMetrics> {
        self.cells.iter().find(|c| c.method == method && c.j == j && c.gamma == gamma)
    }

    /// Long-format CSV with columns `method,J,gamma,metric,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,J,gamma,metric,value\n");
        for c in &self.cells {
            for (metric, value) in c.metric_pairs() {
                let _ = writeln!(out, "{},{},{},{},{}", c.method, c.j, c.gamma, metric, value);
            }
        }
        out
    }

    /// Skip records as CSV.
    pub fn skips_csv(&self) -> String {
        let mut out = String::from("method,J,gamma,replicate,reason\n");
        for s in &self.skips {
            let _ = writeln!(out, "{},{},{},{},\"{}\"", s.method, s.j, s.gamma, s.replicate, s.reason.replace('"', "'"));
        }
        out
    }

    /// Aligned text table of one metric: rows are cluster counts, columns
    /// are methods grouped by gamma.
    pub fn text_table(&self, metric: &str, title: &str) -> String {
        let methods: Vec<(&str, &str)> = TABLE_METHODS
            .iter()
            .copied()
            .filter(|(m, _)| self.cells.iter().any(|c| c.method == *m))
            .collect();
        let width = 9;
        let mut out = format!("{title}\n");
        let mut head1 = format!("{:>5}", "");
        let mut head2 = format!("{:>5}", "J");
        for &g in &self.scenario.gamma_grid {
            let label = format!("gamma = {g}");
            let span = methods.len() * width;
            let _ = write!(head1, " | {label:^span$}");
            head2.push_str(" | ");
            for (_, name) in &methods {
                let _ = write!(head2, "{name:>width$}");
            }
        }
        let _ = writeln!(out, "{head1}");
        let _ = writeln!(out, "{head2}");
        let _ = writeln!(out, "{}", "-".repeat(head2.chars().count()));
        for &j in &self.scenario.j_grid {
            let mut row = format!("{j:>5}");
            for &g in &self.scenario.gamma_grid {
                row.push_str(" | ");
                for (m, _) in &methods {
                    let v = self
                        .cell(m, j, g)
                        .and_then(|c| c.metric_pairs().into_iter().find(|(k, _)| *k == metric).map(|(_, v)| v));
                    let cell = match v {
                        Some(v) if v.is_finite() => format!("{v:.2}"),
                        Some(_) => "-".to_string(),
                        None => "".to_string(),
                    };
                    let _ = write!(row, "{cell:>width$}");
                }
            }
            let _ = writeln!(out, "{row}");
        }
        out
    }

    /// The bias, coverage and interval-length tables.
    pub fn text_tables(&self) -> String {
        [
            ("bias_ratio", "Ratio of average estimate to true effect"),
            ("coverage", "Coverage of nominal confidence intervals"),
            ("mean_ci_length", "Average length of bounded confidence intervals"),
            ("infinite_ci_rate", "Share of unbounded confidence intervals"),
        ]
        .iter()
        .map(|(m, t)| self.text_table(m, t))
        .collect::<Vec<_>>()
        .join("\n")
    }
}

/// ANOVA estimator of the intraclass correlation for groups of unequal size.
pub fn anova_icc(groups: &[Vec<f64>]) -> f64 {
    let k = groups.len() as f64;
    let sizes: Vec<f64> = groups.iter().map(|g| g.len() as f64).collect();
    let n: f64 = sizes.iter().sum();
    let grand = groups.iter().flatten().sum::<f64>() / n;
    let (mut ssb, mut ssw) = (0.0, 0.0);
    for g in groups {
        let mean = g.iter().sum::<f64>() / g.len() as f64;
        ssb += g.len() as f64 * (mean - grand).powi(2);
        ssw += g.iter().map(|y| (y - mean).powi(2)).sum::<f64>();
    }
    let msb = ssb / (k - 1.0);
    let msw = ssw / (n - k);
    let n0 = (n - sizes.iter().map(|s| s * s).sum::<f64>() / n) / (k - 1.0);
    let between = (msb - msw) / n0;
    between / (between + msw)
}
