//! Observed trial data: unit records, cluster aggregation and the
//! intent-to-treat estimators.
//!
//! Assignment is uniform within a cluster, so a [`ClusterTrial`] stores one
//! assignment per cluster and the per-unit receipt/outcome pairs.

use std::collections::HashMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::DataError;

/// One row of a unit-level input file.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitRecord {
    pub cluster_id: String,
    pub z: bool,
    pub d: bool,
    pub y: f64,
}

/// A single unit inside a cluster.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Unit {
    pub d: bool,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub id: String,
    pub treated: bool,
    pub units: Vec<Unit>,
}

/// Validated observed dataset of a cluster-randomized trial.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusterTrial {
    clusters: Vec<Cluster>,
    treated: usize,
    units: usize,
}

impl ClusterTrial {
    /// Builds a trial, checking that every cluster is non-empty, outcomes
    /// are finite and both arms contain at least one cluster.
    pub fn new(clusters: Vec<Cluster>) -> Result<Self, DataError> {
        if clusters.is_empty() {
            return Err(DataError::Empty);
        }
        let mut units = 0;
        for c in &clusters {
            if c.units.is_empty() {
                return Err(DataError::Malformed {
                    line: 0,
                    message: format!("cluster `{}` has no units", c.id),
                });
            }
            if let Some(u) = c.units.iter().find(|u| !u.y.is_finite()) {
                return Err(DataError::Malformed {
                    line: 0,
                    message: format!("cluster `{}` has non-finite outcome {}", c.id, u.y),
                });
            }
            units += c.units.len();
        }
        let treated = clusters.iter().filter(|c| c.treated).count();
        if treated == 0 || treated == clusters.len() {
            return Err(DataError::EmptyArm {
                treated,
                total: clusters.len(),
            });
        }
        Ok(Self {
            clusters,
            treated,
            units,
        })
    }

    /// Groups unit records by cluster id, in order of first appearance.
    pub fn from_records(records: impl IntoIterator<Item = UnitRecord>) -> Result<Self, DataError> {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut clusters: Vec<Cluster> = Vec::new();
        for (row, rec) in records.into_iter().enumerate() {
            let line = row as u64 + 2;
            let unit = Unit { d: rec.d, y: rec.y };
            match index.get(&rec.cluster_id) {
                Some(&k) => {
                    if clusters[k].treated != rec.z {
                        return Err(DataError::NonUniformAssignment {
                            cluster: rec.cluster_id,
                            line,
                        });
                    }
                    clusters[k].units.push(unit);
                }
                None => {
                    index.insert(rec.cluster_id.clone(), clusters.len());
                    clusters.push(Cluster {
                        id: rec.cluster_id,
                        treated: rec.z,
                        units: vec![unit],
                    });
                }
            }
        }
        Self::new(clusters)
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    /// Total cluster count `J`.
    pub fn num_clusters(&self) -> usize {
        self.clusters.len()
    }

    /// Treated cluster count `m`.
    pub fn num_treated(&self) -> usize {
        self.treated
    }

    /// Total unit count `n`.
    pub fn num_units(&self) -> usize {
        self.units
    }

    pub fn summarize(&self) -> Vec<ClusterSummary> {
        summarize(self)
    }

    /// Writes the trial back out in the canonical `cluster_id,z,d,y` layout.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), DataError> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["cluster_id", "z", "d", "y"])?;
        for c in &self.clusters {
            let z = if c.treated { "1" } else { "0" };
            for u in &c.units {
                let d = if u.d { "1" } else { "0" };
                w.write_record([c.id.as_str(), z, d, &u.y.to_string()])?;
            }
        }
        w.flush().map_err(|e| DataError::Csv(e.into()))?;
        Ok(())
    }
}

/// Parse options for unit-level CSV input.
#[derive(Debug, Clone, Copy)]
pub struct ParseOptions {
    pub delimiter: u8,
}

impl Default for ParseOptions {
    fn default() -> Self {
        Self { delimiter: b',' }
    }
}

const REQUIRED: [&str; 4] = ["cluster_id", "z", "d", "y"];

/// Reads a unit-level CSV file with header `cluster_id,z,d,y` (any order).
pub fn ingest_csv(path: impl AsRef<Path>, options: ParseOptions) -> Result<ClusterTrial, DataError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| DataError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_trial(file, options)
}

pub fn read_trial<R: Read>(reader: R, options: ParseOptions) -> Result<ClusterTrial, DataError> {
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let mut cols = [0usize; 4];
    for (slot, name) in cols.iter_mut().zip(REQUIRED) {
        *slot = headers
            .iter()
            .position(|h| h == name)
            .ok_or(DataError::MissingColumn(name))?;
    }
    let extra: Vec<&str> = headers.iter().filter(|h| !REQUIRED.contains(h)).collect();
    if !extra.is_empty() {
        log::warn!("ignoring extra columns: {}", extra.join(", "));
    }

    let mut records = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |k: usize, name: &str| -> Result<&str, DataError> {
            match row.get(cols[k]) {
                Some(v) if !v.is_empty() => Ok(v),
                _ => Err(DataError::Malformed {
                    line,
                    message: format!("missing value for `{name}`"),
                }),
            }
        };
        let binary = |v: &str, name: &str| -> Result<bool, DataError> {
            match v {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(DataError::Malformed {
                    line,
                    message: format!("`{name}` must be 0 or 1, got `{other}`"),
                }),
            }
        };
        let cluster_id = field(0, "cluster_id")?.to_string();
        let z = binary(field(1, "z")?, "z")?;
        let d = binary(field(2, "d")?, "d")?;
        let y_raw = field(3, "y")?;
        let y: f64 = y_raw.parse().map_err(|_| DataError::Malformed {
            line,
            message: format!("`y` is not a number: `{y_raw}`"),
        })?;
        if !y.is_finite() {
            return Err(DataError::Malformed {
                line,
                message: format!("`y` must be finite, got `{y_raw}`"),
            });
        }
        records.push((line, UnitRecord { cluster_id, z, d, y }));
    }
    if records.is_empty() {
        return Err(DataError::Empty);
    }

    // Re-check assignment uniformity here so the error carries the file line.
    let mut seen: HashMap<&str, bool> = HashMap::new();
    for (line, r) in &records {
        if let Some(&z) = seen.get(r.cluster_id.as_str()) {
            if z != r.z {
                return Err(DataError::NonUniformAssignment {
                    cluster: r.cluster_id.clone(),
                    line: *line,
                });
            }
        } else {
            seen.insert(&r.cluster_id, r.z);
        }
    }
    ClusterTrial::from_records(records.into_iter().map(|(_, r)| r))
}

/// Per-cluster sufficient statistics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterSummary {
    pub treated: bool,
    /// Cluster size `n_j`.
    pub n: usize,
    /// `Y_j`, the sum of outcomes.
    pub y_sum: f64,
    /// `D_j`, the number of units that took treatment.
    pub d_sum: f64,
    pub y_bar: f64,
    pub d_bar: f64,
}

impl ClusterSummary {
    pub fn from_sums(treated: bool, n: usize, y_sum: f64, d_sum: f64) -> Self {
        assert!(n > 0, "cluster size must be positive");
        Self {
            treated,
            n,
            y_sum,
            d_sum,
            y_bar: y_sum / n as f64,
            d_bar: d_sum / n as f64,
        }
    }

    /// `z_j` as a number.
    pub fn z(&self) -> f64 {
        if self.treated {
            1.0
        } else {
            0.0
        }
    }
}

/// Aggregates each cluster to its sums and means.
pub fn summarize(trial: &ClusterTrial) -> Vec<ClusterSummary> {
    trial
        .clusters
        .iter()
        .map(|c| {
            let (y_sum, d_sum) = c
                .units
                .iter()
                .fold((0.0, 0.0), |(y, d), u| (y + u.y, d + if u.d { 1.0 } else { 0.0 }));
            ClusterSummary::from_sums(c.treated, c.units.len(), y_sum, d_sum)
        })
        .collect()
}

/// Cluster and unit counts of a design, derived from its summaries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DesignCounts {
    /// `J`
    pub clusters: usize,
    /// `m`
    pub treated: usize,
    /// `n`
    pub units: usize,
}

impl DesignCounts {
    pub fn of(summaries: &[ClusterSummary]) -> Self {
        Self {
            clusters: summaries.len(),
            treated: summaries.iter().filter(|s| s.treated).count(),
            units: summaries.iter().map(|s| s.n).sum(),
        }
    }

    pub fn control(&self) -> usize {
        self.clusters - self.treated
    }
}

/// Unbiased difference-in-means estimators of the ITT effect and the
/// compliance rate, both on the per-unit scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IttEstimates {
    pub mu_y: f64,
    pub mu_d: f64,
}

pub fn itt_estimates(summaries: &[ClusterSummary]) -> IttEstimates {
    let k = DesignCounts::of(summaries);
    let j = k.clusters as f64;
    let m = k.treated as f64;
    let n = k.units as f64;
    let (mut yt, mut yc, mut dt, mut dc) = (0.0, 0.0, 0.0, 0.0);
    for s in summaries {
        if s.treated {
            yt += s.y_sum;
            dt += s.d_sum;
        } else {
            yc += s.y_sum;
            dc += s.d_sum;
        }
    }
    IttEstimates {
        mu_y: (j / m * yt - j / (j - m) * yc) / n,
        mu_d: (j / m * dt - j / (j - m) * dc) / n,
    }
}
