//! Text, CSV and JSON rendering of command reports.

use std::fmt::Write as _;

use crtiv::estimators::EstimateReport;
use crtiv::identification::{Rational, WeightTable};
use crtiv::{Method, Region};
use serde::Serialize;

use crate::manifest::RunManifest;

pub fn method_name(m: Method) -> &'static str {
    match m {
        Method::ClusterLevel => "cluster-level Wald",
        Method::Tsls => "two-stage least squares",
        Method::EffectRatio => "effect ratio",
    }
}

fn region_bounds(r: &Region) -> (String, String) {
    match *r {
        Region::Finite { lo, hi } | Region::ComplementOf { lo, hi } => (lo.to_string(), hi.to_string()),
        Region::Below { hi } => ("-inf".into(), hi.to_string()),
        Region::Above { lo } => (lo.to_string(), "inf".into()),
        Region::WholeLine => ("-inf".into(), "inf".into()),
        Region::Empty => (String::new(), String::new()),
    }
}

/// Context printed next to an estimate.
pub struct EstimateContext<'a> {
    pub ci: &'a str,
    pub clusters: usize,
    pub treated: usize,
    pub units: usize,
}

#[derive(Serialize)]
struct EstimateJson<'a> {
    report: &'a EstimateReport,
    ci: &'a str,
    clusters: usize,
    treated: usize,
    units: usize,
    manifest: &'a RunManifest,
}

pub fn estimate_text(r: &EstimateReport, ctx: &EstimateContext, manifest: &RunManifest) -> String {
    let mut s = String::new();
    let level = 100.0 * (1.0 - r.alpha);
    let _ = writeln!(s, "method       {} ({})", method_name(r.method), r.method.tag());
    let _ = writeln!(s, "interval     {}", ctx.ci);
    let _ = writeln!(s, "clusters     {} ({} treated, {} control), {} units", ctx.clusters, ctx.treated, ctx.clusters - ctx.treated, ctx.units);
    let _ = writeln!(s, "estimate     {:.6}", r.point);
    match r.variance {
        Some(v) => {
            let _ = writeln!(s, "variance     {v:.6} (se {:.6})", v.sqrt());
        }
        None => {
            let _ = writeln!(s, "variance     not defined for this method");
        }
    }
    let _ = writeln!(s, "region       {} ({}, {level}% level)", r.region.region, r.region.region.kind_label());
    if !r.diagnostics.is_empty() {
        let _ = writeln!(s, "diagnostics");
        for (k, v) in &r.diagnostics {
            let _ = writeln!(s, "  {k:<20} {}", number(*v));
        }
    }
    if !r.warnings.is_empty() {
        let _ = writeln!(s, "warnings");
        for w in &r.warnings {
            let _ = writeln!(s, "  - {w}");
        }
    }
    let _ = writeln!(s, "manifest");
    for (k, v) in manifest.lines() {
        let _ = writeln!(s, "  {k:<20} {v}");
    }
    s
}

fn number(v: f64) -> String {
    if v != 0.0 && v.abs() < 1e-4 {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn csv_field(v: &str) -> String {
    if v.contains([',', '"', '\n']) {
        format!("\"{}\"", v.replace('"', "\"\""))
    } else {
        v.to_string()
    }
}

pub fn estimate_csv(r: &EstimateReport, ctx: &EstimateContext, manifest: &RunManifest) -> String {
    let (lo, hi) = region_bounds(&r.region.region);
    let mut rows: Vec<(String, String)> = vec![
        ("method".into(), r.method.tag().into()),
        ("ci".into(), ctx.ci.into()),
        ("clusters".into(), ctx.clusters.to_string()),
        ("treated".into(), ctx.treated.to_string()),
        ("units".into(), ctx.units.to_string()),
        ("point".into(), r.point.to_string()),
        ("variance".into(), r.variance.map(|v| v.to_string()).unwrap_or_default()),
        ("alpha".into(), r.alpha.to_string()),
        ("region_kind".into(), r.region.region.kind_label().into()),
        ("region_lo".into(), lo),
        ("region_hi".into(), hi),
    ];
    rows.extend(r.diagnostics.iter().map(|(k, v)| (format!("diagnostic.{k}"), v.to_string())));
    rows.extend(r.warnings.iter().enumerate().map(|(i, w)| (format!("warning.{i}"), w.clone())));
    rows.extend(manifest.lines().into_iter().map(|(k, v)| (format!("manifest.{k}"), v)));
    let mut s = String::from("field,value\n");
    for (k, v) in rows {
        let _ = writeln!(s, "{},{}", csv_field(&k), csv_field(&v));
    }
    s
}

pub fn estimate_json(r: &EstimateReport, ctx: &EstimateContext, manifest: &RunManifest) -> serde_json::Result<String> {
    serde_json::to_string_pretty(&EstimateJson {
        report: r,
        ci: ctx.ci,
        clusters: ctx.clusters,
        treated: ctx.treated,
        units: ctx.units,
        manifest,
    })
}

/// Per-cluster weights and identified values, as floats or exact fractions.
pub enum Weights {
    Float(WeightTable),
    Exact {
        true_cace: Rational,
        weights: Vec<(Method, Vec<Rational>)>,
        identified: Vec<(Method, Rational)>,
    },
}

#[derive(Serialize)]
struct WeightsJson<'a> {
    true_cace: String,
    identified: Vec<(&'static str, String)>,
    gaps: Vec<(&'static str, String)>,
    weights: Vec<(&'static str, Vec<String>)>,
    manifest: &'a RunManifest,
}

/// Per method: formatted weights, identified value and gap.
type Column = (Method, Vec<String>, String, String);

impl Weights {
    fn columns(&self) -> (String, Vec<Column>) {
        match self {
            Weights::Float(t) => (
                t.true_cace.to_string(),
                Method::ALL
                    .iter()
                    .map(|&m| {
                        (
                            m,
                            t.weights[&m].iter().map(|w| format!("{w:.6}")).collect(),
                            format!("{:.6}", t.identified[&m]),
                            format!("{:+.6}", t.gap(m)),
                        )
                    })
                    .collect(),
            ),
            Weights::Exact {
                true_cace,
                weights,
                identified,
            } => (
                true_cace.to_string(),
                weights
                    .iter()
                    .zip(identified)
                    .map(|((m, w), (_, v))| (*m, w.iter().map(|x| x.to_string()).collect(), v.to_string(), (v - true_cace).to_string()))
                    .collect(),
            ),
        }
    }

    pub fn text(&self, n: &[usize], n_co: &[usize], tau: &[f64], manifest: &RunManifest) -> String {
        let (truth, cols) = self.columns();
        let mut s = String::new();
        let _ = writeln!(s, "true complier average effect: {truth}");
        let _ = writeln!(s);
        let _ = write!(s, "{:>8} {:>8} {:>8} {:>10}", "cluster", "n", "n_co", "tau");
        for (m, ..) in &cols {
            let _ = write!(s, " {:>14}", format!("w_{}", m.tag()));
        }
        let _ = writeln!(s);
        for j in 0..n.len() {
            let _ = write!(s, "{:>8} {:>8} {:>8} {:>10}", j + 1, n[j], n_co[j], tau[j]);
            for (_, w, ..) in &cols {
                let _ = write!(s, " {:>14}", w[j]);
            }
            let _ = writeln!(s);
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<32} {:>16} {:>16}", "method", "identified", "gap");
        for (m, _, v, g) in &cols {
            let _ = writeln!(s, "{:<32} {:>16} {:>16}", format!("{} ({})", method_name(*m), m.tag()), v, g);
        }
        let _ = writeln!(s);
        let _ = writeln!(s, "manifest");
        for (k, v) in manifest.lines() {
            let _ = writeln!(s, "  {k:<20} {v}");
        }
        s
    }

    pub fn json(&self, manifest: &RunManifest) -> serde_json::Result<String> {
        let (truth, cols) = self.columns();
        serde_json::to_string_pretty(&WeightsJson {
            true_cace: truth,
            identified: cols.iter().map(|(m, _, v, _)| (m.tag(), v.clone())).collect(),
            gaps: cols.iter().map(|(m, _, _, g)| (m.tag(), g.clone())).collect(),
            weights: cols.iter().map(|(m, w, ..)| (m.tag(), w.clone())).collect(),
            manifest,
        })
    }
}
