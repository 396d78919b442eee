//! `crtiv`: estimate complier effects in cluster-randomized trials, compare
//! what each estimator identifies, and run Monte Carlo studies.
//!
//! Exit codes: 0 on success, 1 for I/O and usage problems, 2 when the data
//! cannot identify the effect (zero compliance difference, no compliers).

mod manifest;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use crtiv::ci::{permutation_null, PermutationMode, PermutationOptions, DEFAULT_CAP};
use crtiv::estimators::{estimate_cluster_level, estimate_effect_ratio, estimate_tsls};
use crtiv::identification::{identified_value_exact, method_weights_exact, read_specs, WeightTable};
use crtiv::simulation::{PiSource, SimScenario};
use crtiv::{
    read_trial, summarize, EstimationError, IdentificationError, Method, ParseOptions, RegionMethod,
};

use manifest::{read_input, RunManifest};
use render::{EstimateContext, Weights};

const DEFAULT_SEED: u64 = 20_181_123;

#[derive(Parser, Debug)]
#[command(name = "crtiv", version, about = "Complier effects in cluster-randomized trials with noncompliance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Estimate the complier average effect from unit-level data.
    Estimate(EstimateArgs),
    /// Show the weights and identified value of each estimator on a population.
    Weights(WeightsArgs),
    /// Run a Monte Carlo scenario and write report files.
    Simulate(SimulateArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodArg {
    Cl,
    Tsls,
    Er,
}

impl MethodArg {
    fn method(self) -> Method {
        match self {
            MethodArg::Cl => Method::ClusterLevel,
            MethodArg::Tsls => Method::Tsls,
            MethodArg::Er => Method::EffectRatio,
        }
    }

    fn default_ci(self) -> CiArg {
        match self {
            MethodArg::Cl => CiArg::Delta,
            MethodArg::Tsls => CiArg::Sandwich,
            MethodArg::Er => CiArg::Quadratic,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum CiArg {
    Delta,
    Sandwich,
    Quadratic,
    Permutation,
}

impl CiArg {
    fn name(self) -> &'static str {
        match self {
            CiArg::Delta => "delta",
            CiArg::Sandwich => "sandwich",
            CiArg::Quadratic => "quadratic",
            CiArg::Permutation => "permutation",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(clap::Args, Debug)]
struct EstimateArgs {
    /// Unit-level CSV with columns cluster_id,z,d,y.
    #[arg(long)]
    data: PathBuf,
    #[arg(long, value_enum)]
    method: MethodArg,
    /// Interval construction; defaults to the one paired with the method.
    #[arg(long, value_enum)]
    ci: Option<CiArg>,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
    /// Largest number of assignments enumerated by the exact permutation region.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    perm_cap: u128,
    /// Sample this many random assignments instead of enumerating all of them.
    #[arg(long)]
    perm_draws: Option<usize>,
    #[arg(long, env = "CRTIV_SEED")]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Field delimiter of the data file.
    #[arg(long, default_value_t = ',')]
    delimiter: char,
}

#[derive(clap::Args, Debug)]
struct WeightsArgs {
    /// CSV with columns n,n_co,tau, one row per cluster.
    #[arg(long)]
    spec: PathBuf,
    /// Use exact rational arithmetic and print fractions.
    #[arg(long)]
    exact: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(clap::Args, Debug)]
struct SimulateArgs {
    /// JSON scenario file.
    #[arg(long)]
    scenario: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Master seed; overrides the scenario's seed.
    #[arg(long, env = "CRTIV_SEED")]
    seed: Option<u64>,
    /// Replicates per cell; overrides the scenario.
    #[arg(long)]
    replicates: Option<usize>,
}

fn usage_error(kind: ErrorKind, message: impl std::fmt::Display) -> ExitCode {
    let _ = Cli::command().error(kind, message).print();
    ExitCode::from(1)
}

/// Maps an error chain to the documented exit code.
fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<EstimationError>() {
            return match e {
                EstimationError::CapExceeded { .. } | EstimationError::InvalidArgument(_) => 1,
                _ => 2,
            };
        }
        if let Some(e) = cause.downcast_ref::<IdentificationError>() {
            return match e {
                IdentificationError::NoCompliers => 2,
                IdentificationError::InvalidSpec(_) => 1,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if let Command::Estimate(args) = &cli.command {
        let ci = args.ci.unwrap_or(args.method.default_ci());
        if ci != args.method.default_ci() && !(args.method == MethodArg::Er && ci == CiArg::Permutation) {
            return usage_error(
                ErrorKind::ArgumentConflict,
                format!(
                    "--method {} does not support --ci {}; use --ci {}",
                    args.method.method().tag(),
                    ci.name(),
                    args.method.default_ci().name()
                ),
            );
        }
        if args.perm_draws.is_some() && ci != CiArg::Permutation {
            return usage_error(ErrorKind::ArgumentConflict, "--perm-draws requires --ci permutation");
        }
    }
    let result = match cli.command {
        Command::Estimate(args) => cmd_estimate(args),
        Command::Weights(args) => cmd_weights(args),
        Command::Simulate(args) => cmd_simulate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn cmd_estimate(args: EstimateArgs) -> Result<()> {
    let start = Instant::now();
    let ci = args.ci.unwrap_or(args.method.default_ci());
    let mut manifest = RunManifest::new("estimate");
    let bytes = read_input(&mut manifest, &args.data)?;
    if !args.delimiter.is_ascii() {
        bail!("--delimiter must be a single ASCII character");
    }
    let trial = read_trial(bytes.as_slice(), ParseOptions { delimiter: args.delimiter as u8 })
        .with_context(|| format!("invalid data in {}", args.data.display()))?;
    let s = summarize(&trial);
    manifest.option("method", args.method.method().tag());
    manifest.option("ci", ci.name());
    manifest.option("alpha", args.alpha);

    let mut report = match ci {
        CiArg::Delta => estimate_cluster_level(&s, args.alpha)?,
        CiArg::Sandwich => estimate_tsls(&s, args.alpha)?,
        CiArg::Quadratic => estimate_effect_ratio(&s, args.alpha, RegionMethod::Quadratic)?,
        CiArg::Permutation => {
            let seed = args.seed.unwrap_or(DEFAULT_SEED);
            let mode = match args.perm_draws {
                Some(draws) => {
                    manifest.seeds.push(seed);
                    manifest.option("perm_draws", draws);
                    PermutationMode::MonteCarlo { draws, seed }
                }
                None => PermutationMode::Exhaustive,
            };
            manifest.option("perm_cap", args.perm_cap.to_string());
            let opts = PermutationOptions { mode, cap: args.perm_cap };
            let mut r = estimate_effect_ratio(&s, args.alpha, RegionMethod::Permutation(opts))?;
            let at_point = permutation_null(&s, r.point, &opts)?;
            let at_zero = permutation_null(&s, 0.0, &opts)?;
            r.diagnostics.insert("assignments".into(), at_point.len() as f64);
            r.diagnostics.insert("exhaustive".into(), if at_point.exhaustive { 1.0 } else { 0.0 });
            r.diagnostics.insert("p_value_at_estimate".into(), at_point.p_value());
            r.diagnostics.insert("p_value_no_effect".into(), at_zero.p_value());
            r
        }
    };
    if args.method == MethodArg::Er && report.region.region.is_infinite() {
        log::warn!("unbounded confidence region: the instrument is weak");
    }
    report.warnings.dedup();
    manifest.finish(start.elapsed());
    let ctx = EstimateContext {
        ci: ci.name(),
        clusters: trial.num_clusters(),
        treated: trial.num_treated(),
        units: trial.num_units(),
    };
    let out = match args.format {
        Format::Text => render::estimate_text(&report, &ctx, &manifest),
        Format::Csv => render::estimate_csv(&report, &ctx, &manifest),
        Format::Json => render::estimate_json(&report, &ctx, &manifest)? + "\n",
    };
    print!("{out}");
    Ok(())
}

fn cmd_weights(args: WeightsArgs) -> Result<()> {
    let start = Instant::now();
    let mut manifest = RunManifest::new("weights");
    let bytes = read_input(&mut manifest, &args.spec)?;
    let specs = read_specs(bytes.as_slice()).with_context(|| format!("invalid spec in {}", args.spec.display()))?;
    manifest.option("exact", args.exact);
    let weights = if args.exact {
        let mut w = Vec::new();
        let mut v = Vec::new();
        for m in Method::ALL {
            w.push((m, method_weights_exact(&specs, m)?));
            v.push((m, identified_value_exact(&specs, m)?));
        }
        Weights::Exact {
            true_cace: identified_value_exact(&specs, Method::EffectRatio)?,
            weights: w,
            identified: v,
        }
    } else {
        Weights::Float(WeightTable::compute(&specs)?)
    };
    manifest.finish(start.elapsed());
    let n: Vec<usize> = specs.iter().map(|s| s.n).collect();
    let n_co: Vec<usize> = specs.iter().map(|s| s.n_co).collect();
    let tau: Vec<f64> = specs.iter().map(|s| s.tau).collect();
    match args.format {
        Format::Json => println!("{}", weights.json(&manifest)?),
        Format::Text | Format::Csv => print!("{}", weights.text(&n, &n_co, &tau, &manifest)),
    }
    Ok(())
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("failed to write {}", path.display()))
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let start = Instant::now();
    let mut manifest = RunManifest::new("simulate");
    let bytes = read_input(&mut manifest, &args.scenario)?;
    let text = String::from_utf8(bytes).context("scenario file is not UTF-8")?;
    let mut scenario = SimScenario::from_json(&text)
        .with_context(|| format!("invalid scenario {}", args.scenario.display()))?;
    if let Some(seed) = args.seed {
        scenario.dgp.seed = seed;
    }
    if let Some(r) = args.replicates {
        scenario.replicates = r;
    }
    scenario.validate().context("invalid scenario after overrides")?;
    if let PiSource::File(path) = &scenario.dgp.pi_source {
        read_input(&mut manifest, path)?;
    }
    let workers = args
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    manifest.seeds.push(scenario.dgp.seed);
    manifest.option("workers", workers);
    manifest.option("replicates", scenario.replicates);
    manifest.option("scenario", &scenario);

    let report = crtiv::simulation::run_scenario(&scenario, workers)?;
    fs::create_dir_all(&args.out).with_context(|| format!("failed to create {}", args.out.display()))?;
    write_file(&args.out, "report.csv", &report.to_csv())?;
    write_file(&args.out, "skips.csv", &report.skips_csv())?;
    let mut tables = format!(
        "# crtiv {} simulate, seed {}, scenario {} (fnv1a64 {})\n\n",
        manifest.version, scenario.dgp.seed, args.scenario.display(), manifest.inputs[0].fnv1a64
    );
    tables.push_str(&report.text_tables());
    write_file(&args.out, "tables.txt", &tables)?;
    manifest.finish(start.elapsed());
    write_file(&args.out, "manifest.json", &(serde_json::to_string_pretty(&manifest)? + "\n"))?;
    eprintln!(
        "wrote {} cells ({} skipped replicates) to {} in {:.1}s",
        report.cells.len(),
        report.skips.len(),
        args.out.display(),
        manifest.duration_secs
    );
    Ok(())
}
