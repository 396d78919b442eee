//! Confidence regions that can be bounded, unbounded or empty.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Shape of a confidence set on the real line.
///
/// Inverting a ratio test yields a set of the form `{t : a t² + 2 b t + c ≤ 0}`,
/// which is a bounded interval, the complement of an interval, the whole
/// line, or empty. The two half-line variants cover the boundary case
/// `a = 0` and the one-sided hulls of permutation acceptance sets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// `[lo, hi]`
    Finite { lo: f64, hi: f64 },
    /// `(-inf, lo] ∪ [hi, inf)`
    ComplementOf { lo: f64, hi: f64 },
    /// `(-inf, hi]`
    Below { hi: f64 },
    /// `[lo, inf)`
    Above { lo: f64 },
    WholeLine,
    Empty,
}

impl Region {
    pub fn contains(&self, t: f64) -> bool {
        match *self {
            Region::Finite { lo, hi } => lo <= t && t <= hi,
            Region::ComplementOf { lo, hi } => t <= lo || t >= hi,
            Region::Below { hi } => t <= hi,
            Region::Above { lo } => t >= lo,
            Region::WholeLine => true,
            Region::Empty => false,
        }
    }

    /// True for every unbounded region. Signals a weak instrument.
    pub fn is_infinite(&self) -> bool {
        !matches!(self, Region::Finite { .. } | Region::Empty)
    }

    /// Length of a bounded region, `None` otherwise.
    pub fn length(&self) -> Option<f64> {
        match *self {
            Region::Finite { lo, hi } => Some(hi - lo),
            Region::Empty => Some(0.0),
            _ => None,
        }
    }

    /// Whether `self` is a superset of `other`.
    pub fn contains_region(&self, other: &Region) -> bool {
        use Region::*;
        match (*self, *other) {
            (_, Empty) | (WholeLine, _) => true,
            (Empty, _) => false,
            (_, WholeLine) => false,
            (_, Finite { lo, hi }) => self.contains(lo) && self.contains(hi) && self.covers_gap_free(lo, hi),
            (Below { hi: a }, Below { hi: b }) => b <= a,
            (Above { lo: a }, Above { lo: b }) => b >= a,
            (ComplementOf { lo: a, hi: b }, ComplementOf { lo: c, hi: d }) => c <= a && d >= b,
            (ComplementOf { lo, .. }, Below { hi: b }) => b <= lo,
            (ComplementOf { hi, .. }, Above { lo: b }) => b >= hi,
            _ => false,
        }
    }

    fn covers_gap_free(&self, lo: f64, hi: f64) -> bool {
        match *self {
            Region::ComplementOf { lo: a, hi: b } => hi <= a || lo >= b,
            _ => true,
        }
    }

    /// Human-readable kind label.
    pub fn kind_label(&self) -> &'static str {
        match self {
            Region::Finite { .. } => "finite",
            Region::ComplementOf { .. } => "two rays",
            Region::Below { .. } | Region::Above { .. } => "ray",
            Region::WholeLine => "whole line",
            Region::Empty => "empty",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Region::Finite { lo, hi } => write!(f, "[{lo}, {hi}]"),
            Region::ComplementOf { lo, hi } => write!(f, "(-inf, {lo}] ∪ [{hi}, inf)"),
            Region::Below { hi } => write!(f, "(-inf, {hi}]"),
            Region::Above { lo } => write!(f, "[{lo}, inf)"),
            Region::WholeLine => write!(f, "(-inf, inf)"),
            Region::Empty => write!(f, "empty"),
        }
    }
}

/// A confidence region at nominal level `1 - alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceRegion {
    pub region: Region,
    pub alpha: f64,
}

impl ConfidenceRegion {
    pub fn new(region: Region, alpha: f64) -> Self {
        Self { region, alpha }
    }

    /// Symmetric interval `center ± half_width`.
    pub fn symmetric(center: f64, half_width: f64, alpha: f64) -> Self {
        Self::new(
            Region::Finite {
                lo: center - half_width,
                hi: center + half_width,
            },
            alpha,
        )
    }

    pub fn contains(&self, t: f64) -> bool {
        self.region.contains(t)
    }

    pub fn is_infinite(&self) -> bool {
        self.region.is_infinite()
    }
}

impl fmt::Display for ConfidenceRegion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.region, self.region.kind_label())
    }
}
