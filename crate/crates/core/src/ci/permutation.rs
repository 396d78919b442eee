//! Randomization inference for the effect ratio under the hypothesis that
//! every cluster-level effect equals `t`.
//!
//! Under that hypothesis the adjusted responses `A_j(t)` do not depend on
//! the assignment, so the law of `T(t)` is its distribution over all
//! assignments with `m` treated clusters. For an assignment with treated
//! set `z`, `T_z(t)` depends on the data only through the pair of treated
//! sums `(Σ_z Y_j, Σ_z D_j)`, and `T_z(t) - T_obs(t)` is affine in `t`.
//! The accepted set is therefore found exactly by sweeping the sorted
//! crossing points of those lines with zero.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{binomial, next_combination, random_combination, unrank};
use crate::data::ClusterSummary;
use crate::error::EstimationError;
use crate::estimators::adjusted_responses;
use crate::region::{ConfidenceRegion, Region};
use crate::seeds;

pub const DEFAULT_CAP: u128 = 2_000_000;

const CHUNK: u128 = 1 << 15;
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PermutationMode {
    Exhaustive,
    MonteCarlo { draws: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationOptions {
    pub mode: PermutationMode,
    /// Largest number of assignments enumerated in exhaustive mode.
    pub cap: u128,
}

impl Default for PermutationOptions {
    fn default() -> Self {
        Self {
            mode: PermutationMode::Exhaustive,
            cap: DEFAULT_CAP,
        }
    }
}

impl PermutationOptions {
    pub fn monte_carlo(draws: usize, seed: u64) -> Self {
        Self {
            mode: PermutationMode::MonteCarlo { draws, seed },
            cap: DEFAULT_CAP,
        }
    }
}

/// Permutation law of `T(tau0)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermutationNull {
    pub tau0: f64,
    /// `T` over every enumerated or sampled assignment, sorted ascending.
    pub statistics: Vec<f64>,
    pub observed: f64,
    pub exhaustive: bool,
    /// Number of random draws in Monte Carlo mode (the observed assignment
    /// is added on top of them).
    pub draws: Option<usize>,
    pub seed: Option<u64>,
}

impl PermutationNull {
    pub fn len(&self) -> usize {
        self.statistics.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statistics.is_empty()
    }

    fn tie_tol(&self) -> f64 {
        let scale = self.statistics.iter().fold(self.observed.abs(), |a, v| a.max(v.abs()));
        TIE_TOL * scale
    }

    /// Count of statistics at or below the observed value.
    pub fn lower_count(&self) -> usize {
        let bound = self.observed + self.tie_tol();
        self.statistics.partition_point(|&v| v <= bound)
    }

    /// Count of statistics at or above the observed value.
    pub fn upper_count(&self) -> usize {
        let bound = self.observed - self.tie_tol();
        self.len() - self.statistics.partition_point(|&v| v < bound)
    }

    /// Fraction of statistics at least as large in magnitude as the observed one.
    pub fn abs_tail(&self) -> f64 {
        let obs = self.observed.abs() - self.tie_tol();
        self.statistics.iter().filter(|v| v.abs() >= obs).count() as f64 / self.len() as f64
    }

    /// Two-sided p-value: twice the smaller one-sided tail, capped at one.
    pub fn p_value(&self) -> f64 {
        two_sided(self.lower_count(), self.upper_count(), self.len())
    }
}

fn two_sided(lower: usize, upper: usize, total: usize) -> f64 {
    (2.0 * lower.min(upper) as f64 / total as f64).min(1.0)
}

fn design(summaries: &[ClusterSummary]) -> Result<(usize, usize), EstimationError> {
    let j = summaries.len();
    let m = summaries.iter().filter(|s| s.treated).count();
    if m == 0 || m == j {
        return Err(EstimationError::DegenerateArm { size: 0 });
    }
    Ok((j, m))
}

fn observed_set(summaries: &[ClusterSummary]) -> Vec<usize> {
    summaries.iter().enumerate().filter(|(_, s)| s.treated).map(|(i, _)| i).collect()
}

/// Treated sums of each column of `values` for every assignment, in
/// deterministic order. The observed assignment comes last in Monte Carlo mode.
fn treated_sums<const K: usize>(
    values: &[[f64; K]],
    m: usize,
    observed: &[usize],
    opts: &PermutationOptions,
) -> Result<(Vec<[f64; K]>, bool), EstimationError> {
    let j = values.len();
    let sum = |idx: &[usize]| {
        let mut acc = [0.0; K];
        for &i in idx {
            for (a, v) in acc.iter_mut().zip(values[i]) {
                *a += v;
            }
        }
        acc
    };
    match opts.mode {
        PermutationMode::Exhaustive => {
            let count = binomial(j, m).filter(|&c| c <= opts.cap).ok_or(EstimationError::CapExceeded {
                clusters: j,
                treated: m,
                count: binomial(j, m).unwrap_or(u128::MAX),
                cap: opts.cap,
            })?;
            let chunks = count.div_ceil(CHUNK);
            let parts: Vec<Vec<[f64; K]>> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let start = c * CHUNK;
                    let len = CHUNK.min(count - start) as usize;
                    let mut idx = unrank(j, m, start);
                    let mut out = Vec::with_capacity(len);
                    for step in 0..len {
                        out.push(sum(&idx));
                        if step + 1 < len {
                            next_combination(&mut idx, j);
                        }
                    }
                    out
                })
                .collect();
            Ok((parts.concat(), true))
        }
        PermutationMode::MonteCarlo { draws, seed } => {
            let per = CHUNK as usize;
            let chunks = draws.div_ceil(per);
            let parts: Vec<Vec<[f64; K]>> = (0..chunks)
                .into_par_iter()
                .map(|c| {
                    let mut rng = seeds::stream(seed, &[c as u64]);
                    let len = per.min(draws - c * per);
                    let (mut scratch, mut idx) = (Vec::with_capacity(j), Vec::with_capacity(m));
                    (0..len)
                        .map(|_| {
                            random_combination(&mut rng, j, m, &mut scratch, &mut idx);
                            sum(&idx)
                        })
                        .collect()
                })
                .collect();
            let mut all = parts.concat();
            all.push(sum(observed));
            Ok((all, false))
        }
    }
}

/// `(1/m) S - (1/(J-m)) (total - S)` for a treated sum `S`.
fn statistic_from_sum(s: f64, total: f64, m: usize, j: usize) -> f64 {
    s / m as f64 - (total - s) / (j - m) as f64
}

/// Permutation distribution of `T(tau0)` with the adjusted responses held fixed.
pub fn permutation_null(
    summaries: &[ClusterSummary],
    tau0: f64,
    opts: &PermutationOptions,
) -> Result<PermutationNull, EstimationError> {
    let (j, m) = design(summaries)?;
    let a: Vec<[f64; 1]> = adjusted_responses(summaries, tau0).into_iter().map(|v| [v]).collect();
    let total: f64 = a.iter().map(|v| v[0]).sum();
    let obs_idx = observed_set(summaries);
    let obs_sum = obs_idx.iter().fold(0.0, |acc, &i| acc + a[i][0]);
    let (sums, exhaustive) = treated_sums(&a, m, &obs_idx, opts)?;
    let mut statistics: Vec<f64> = sums.iter().map(|s| statistic_from_sum(s[0], total, m, j)).collect();
    statistics.sort_by(f64::total_cmp);
    let (draws, seed) = match opts.mode {
        PermutationMode::Exhaustive => (None, None),
        PermutationMode::MonteCarlo { draws, seed } => (Some(draws), Some(seed)),
    };
    Ok(PermutationNull {
        tau0,
        statistics,
        observed: statistic_from_sum(obs_sum, total, m, j),
        exhaustive,
        draws,
        seed,
    })
}

/// Per-assignment lines `Δy - t Δd` of treated-sum differences from the
/// observed assignment.
#[derive(Debug, Clone)]
pub struct AssignmentLines {
    deltas: Vec<(f64, f64)>,
    y_tol: f64,
    d_tol: f64,
    pub exhaustive: bool,
}

impl AssignmentLines {
    pub fn build(summaries: &[ClusterSummary], opts: &PermutationOptions) -> Result<Self, EstimationError> {
        let (_, m) = design(summaries)?;
        let values: Vec<[f64; 2]> = summaries.iter().map(|s| [s.y_sum, s.d_sum]).collect();
        let obs_idx = observed_set(summaries);
        let (sums, exhaustive) = treated_sums(&values, m, &obs_idx, opts)?;
        let obs = obs_idx.iter().fold([0.0, 0.0], |acc, &i| [acc[0] + values[i][0], acc[1] + values[i][1]]);
        let y_scale: f64 = values.iter().map(|v| v[0].abs()).sum();
        let d_scale: f64 = values.iter().map(|v| v[1].abs()).sum();
        Ok(Self {
            deltas: sums.iter().map(|s| (s[0] - obs[0], s[1] - obs[1])).collect(),
            y_tol: TIE_TOL * y_scale,
            d_tol: TIE_TOL * d_scale.max(1.0),
            exhaustive,
        })
    }

    pub fn len(&self) -> usize {
        self.deltas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.deltas.is_empty()
    }

    /// Lower and upper tail counts of the observed statistic at `t`.
    pub fn tails_at(&self, t: f64) -> (usize, usize) {
        let (mut lower, mut upper) = (0, 0);
        for &(dy, dd) in &self.deltas {
            let diff = if dd.abs() <= self.d_tol { dy } else { dy - t * dd };
            let tol = if dd.abs() <= self.d_tol { self.y_tol } else { self.y_tol + TIE_TOL * t.abs() * dd.abs() };
            if diff <= tol {
                lower += 1;
            }
            if diff >= -tol {
                upper += 1;
            }
        }
        (lower, upper)
    }

    pub fn p_value_at(&self, t: f64) -> f64 {
        let (l, u) = self.tails_at(t);
        two_sided(l, u, self.len())
    }

    /// The accepted set as a sorted list of pieces: single points and open
    /// gaps between consecutive crossing points (with infinite ends).
    pub fn acceptance_pieces(&self, alpha: f64) -> Vec<Piece> {
        let total = self.len();
        let accept = |l: usize, u: usize| two_sided(l, u, total) >= alpha * (1.0 - 1e-12);
        let (mut lower, mut upper) = (0usize, 0usize);
        let mut crossings: Vec<(f64, bool)> = Vec::new();
        for &(dy, dd) in &self.deltas {
            if dd.abs() <= self.d_tol {
                if dy <= self.y_tol {
                    lower += 1;
                }
                if dy >= -self.y_tol {
                    upper += 1;
                }
            } else {
                // increasing-in-t side: `dd > 0` starts above the observed value
                if dd > 0.0 {
                    upper += 1;
                } else {
                    lower += 1;
                }
                crossings.push((dy / dd, dd > 0.0));
            }
        }
        crossings.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut pieces = Vec::new();
        let mut left = f64::NEG_INFINITY;
        let mut i = 0;
        while i < crossings.len() {
            let t = crossings[i].0;
            let mut k = i;
            let (mut pos, mut neg) = (0, 0);
            while k < crossings.len() && crossings[k].0 == t {
                if crossings[k].1 {
                    pos += 1;
                } else {
                    neg += 1;
                }
                k += 1;
            }
            pieces.push(Piece {
                lo: left,
                hi: t,
                point: false,
                accepted: accept(lower, upper),
            });
            let (l_at, u_at) = (lower + pos, upper + neg);
            pieces.push(Piece {
                lo: t,
                hi: t,
                point: true,
                accepted: accept(l_at, u_at),
            });
            lower = l_at - neg;
            upper = u_at - pos;
            left = t;
            i = k;
        }
        pieces.push(Piece {
            lo: left,
            hi: f64::INFINITY,
            point: false,
            accepted: accept(lower, upper),
        });
        pieces
    }

    /// Smallest closed interval containing every accepted `t`.
    pub fn hull(&self, alpha: f64) -> Region {
        let pieces = self.acceptance_pieces(alpha);
        let accepted: Vec<&Piece> = pieces.iter().filter(|p| p.accepted).collect();
        let (Some(first), Some(last)) = (accepted.first(), accepted.last()) else {
            return Region::Empty;
        };
        match (first.lo.is_finite(), last.hi.is_finite()) {
            (true, true) => Region::Finite { lo: first.lo, hi: last.hi },
            (false, true) => Region::Below { hi: last.hi },
            (true, false) => Region::Above { lo: first.lo },
            (false, false) => Region::WholeLine,
        }
    }
}

/// A piece of the real line on which the permutation test decision is constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    /// `lo == hi` and the piece is that single crossing point.
    pub point: bool,
    pub accepted: bool,
}

/// Exact permutation confidence region: the hull of all `t` whose two-sided
/// permutation p-value is at least `alpha`.
pub fn permutation_region(
    summaries: &[ClusterSummary],
    alpha: f64,
    opts: &PermutationOptions,
) -> Result<ConfidenceRegion, EstimationError> {
    let lines = AssignmentLines::build(summaries, opts)?;
    let region = lines.hull(alpha);
    if region == Region::Empty {
        log::warn!("permutation confidence set is empty at alpha = {alpha}");
    }
    Ok(ConfidenceRegion::new(region, alpha))
}

/// Draws one uniformly random assignment of `m` treated clusters out of `j`.
pub fn random_assignment<R: Rng + ?Sized>(rng: &mut R, j: usize, m: usize) -> Vec<bool> {
    let (mut scratch, mut idx) = (Vec::new(), Vec::new());
    random_combination(rng, j, m, &mut scratch, &mut idx);
    let mut z = vec![false; j];
    for i in idx {
        z[i] = true;
    }
    z
}
