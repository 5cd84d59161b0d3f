//! The batch command-line surface. Every command returns its JSON report so
//! that it can be driven from code as well as from the `monge-align` binary.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::align::{self, Boundary, Method, TransformOptions, DEFAULT_EPS, DEFAULT_MAX_GAIN};
use crate::error::{Error, Result};
use crate::experiments::{self, BiasVarParams, BlurParams};
use crate::io;
use crate::monge::BarycenterConfig;
use crate::spectral::{Signal, WindowKind, WindowSpec};
use crate::synth::{self, Recipe, Seed};

#[derive(Debug, Parser)]
#[command(name = "monge-align", version, about = "Monge alignment of multivariate stationary signals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a barycenter model on source domains (one signal file per domain).
    Fit(FitArgs),
    /// Align one signal with a fitted model.
    Transform(TransformArgs),
    /// Distances to the barycenter before and after alignment.
    Eval(EvalArgs),
    /// Welch bias-variance sweep over filter sizes (CSV on stdout).
    Biasvar(BiasVarArgs),
    /// Directional-blur image alignment demo.
    Blur2d(Blur2dArgs),
    /// Write a synthetic stationary signal.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub method: Method,
    #[arg(long = "filter-size", default_value_t = 256)]
    pub filter_size: usize,
    /// Window hop; defaults to half the filter size.
    #[arg(long)]
    pub hop: Option<usize>,
    #[arg(long, default_value = "hann")]
    pub window: WindowKind,
    #[arg(long, default_value_t = DEFAULT_EPS)]
    pub eps: f64,
    #[arg(long = "bary-iters", default_value_t = 1)]
    pub bary_iters: usize,
    #[arg(long, num_args = 1.., required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Scale every channel to unit variance before estimation.
    #[arg(long)]
    pub zscore: bool,
    /// Report the fit time (estimation and barycenter, excluding file I/O).
    #[arg(long)]
    pub bench: bool,
}

#[derive(Debug, Clone, Args)]
pub struct TransformArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long)]
    pub zscore: bool,
    #[arg(long, default_value = "circular")]
    pub boundary: Boundary,
    #[arg(long = "max-gain", default_value_t = DEFAULT_MAX_GAIN)]
    pub max_gain: f64,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long, num_args = 1.., required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long)]
    pub zscore: bool,
}

#[derive(Debug, Clone, Args)]
pub struct BiasVarArgs {
    #[arg(long, default_value_t = 0.9)]
    pub rho: f64,
    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,
    #[arg(long = "n-ell", default_value_t = 3000)]
    pub n_ell: usize,
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 10, 20, 40, 100, 200, 500, 1000])]
    pub filters: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    pub runs: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the CSV here.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct Blur2dArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 15.0, 30.0, 45.0])]
    pub angles: Vec<f64>,
    #[arg(long = "angles-target", value_delimiter = ',', allow_hyphen_values = true,
          default_values_t = [0.0, 15.0, 30.0, 45.0, 60.0, 75.0, 90.0, 105.0, 120.0, 135.0, 150.0, 165.0])]
    pub angles_target: Vec<f64>,
    #[arg(long = "kernel-len", default_value_t = 7)]
    pub kernel_len: usize,
    #[arg(long = "n-images", default_value_t = 100)]
    pub n_images: usize,
    #[arg(long, default_value_t = 32)]
    pub size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for correlation images (PGM) and the JSON report.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, default_value = "mixture")]
    pub recipe: Recipe,
    #[arg(long = "n-channels", default_value_t = 2)]
    pub n_channels: usize,
    #[arg(long = "n-samples", default_value_t = 4096)]
    pub n_samples: usize,
    /// Domain index; each index gives a different population spectrum.
    #[arg(long, default_value_t = 0)]
    pub domain: usize,
    /// Override the correlation decay (expcorr recipe only).
    #[arg(long)]
    pub rho: Option<f64>,
    /// Override the variance scale (expcorr recipe only).
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long = "sample-rate")]
    pub sample_rate: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

fn prepare(sig: Signal, zscore: bool) -> Signal {
    if zscore {
        sig.zscored()
    } else {
        sig
    }
}

pub fn fit(args: &FitArgs) -> Result<Value> {
    let hop = args.hop.unwrap_or((args.filter_size / 2).max(1));
    let win = WindowSpec::new(args.window, args.filter_size, hop)?;
    if !(0.0..1.0).contains(&args.eps) {
        return Err(Error::InvalidParameter(format!("eps must lie in [0, 1), got {}", args.eps)));
    }
    let signals = args
        .inputs
        .iter()
        .map(|p| Ok(prepare(io::read_signal(p)?, args.zscore)))
        .collect::<Result<Vec<_>>>()?;
    let cfg = BarycenterConfig::iterations(args.bary_iters);

    let start = Instant::now();
    let stats = align::fit_statistics(args.method, &signals, &win, args.eps)?;
    let bary = align::barycenter(&stats, &cfg)?;
    let fit_seconds = start.elapsed().as_secs_f64();

    let distances = stats
        .iter()
        .map(|s| align::statistics_distance(s, &bary))
        .collect::<Result<Vec<_>>>()?;
    let model = align::AlignmentModel::new(win, args.eps, bary)?;
    io::save_model(&args.out, &model)?;

    let mut report = json!({
        "command": "fit",
        "model": args.out,
        "method": model.method,
        "f": model.f,
        "n_channels": model.n_channels,
        "window": model.window,
        "domains": args.inputs.iter().zip(&signals).zip(&distances).map(|((p, s), d)| json!({
            "input": p,
            "n_samples": s.n_samples(),
            "distance_to_barycenter": d,
        })).collect::<Vec<_>>(),
    });
    if args.bench {
        report["fit_seconds"] = json!(fit_seconds);
    }
    Ok(report)
}

pub fn transform(args: &TransformArgs) -> Result<Value> {
    let model = io::load_model(&args.model)?;
    let sig = prepare(io::read_signal(&args.input)?, args.zscore);
    let opts = TransformOptions {
        max_gain: args.max_gain,
        boundary: args.boundary,
    };
    let out = align::transform_with(&model, &sig, &opts)?;
    io::write_signal(&args.output, &out)?;
    Ok(json!({
        "command": "transform",
        "output": args.output,
        "method": model.method,
        "n_channels": out.n_channels(),
        "n_samples": out.n_samples(),
    }))
}

/// Distance of a signal's statistics to the barycenter before and after alignment.
pub fn eval_signal(model: &align::AlignmentModel, sig: &Signal) -> Result<(f64, f64)> {
    let before_stats = align::estimate(model.method, &sig.centered(), &model.window, model.eps)?;
    let before = align::statistics_distance(&before_stats, &model.barycenter)?;
    let aligned = align::transform(model, sig)?;
    let after_stats = align::estimate(model.method, &aligned.centered(), &model.window, model.eps)?;
    let after = align::statistics_distance(&after_stats, &model.barycenter)?;
    Ok((before, after))
}

pub fn eval(args: &EvalArgs) -> Result<Value> {
    let model = io::load_model(&args.model)?;
    let mut rows = Vec::new();
    let mut all = true;
    for p in &args.inputs {
        let sig = prepare(io::read_signal(p)?, args.zscore);
        let (before, after) = eval_signal(&model, &sig)?;
        all &= after <= before;
        rows.push(json!({
            "input": p,
            "before": before,
            "after": after,
            "after_le_before": after <= before,
        }));
    }
    Ok(json!({
        "command": "eval",
        "method": model.method,
        "inputs": rows,
        "all_after_le_before": all,
    }))
}

/// Returns the CSV text; the JSON report only summarizes it.
pub fn biasvar(args: &BiasVarArgs) -> Result<(String, Value)> {
    let rows = experiments::biasvar(&BiasVarParams {
        gamma: args.gamma,
        rho: args.rho,
        n_samples: args.n_ell,
        filter_sizes: args.filters.clone(),
        runs: args.runs,
        seed: Seed(args.seed),
    })?;
    let csv = experiments::biasvar_csv(&rows);
    if let Some(path) = &args.out {
        fs::write(path, &csv).map_err(|e| Error::io(path, e))?;
    }
    let best = rows
        .iter()
        .min_by(|a, b| a.sup_bin_rmse.total_cmp(&b.sup_bin_rmse))
        .map(|r| r.f);
    Ok((
        csv,
        json!({
            "command": "biasvar",
            "rows": rows,
            "argmin_rmse_f": best,
        }),
    ))
}

pub fn blur2d(args: &Blur2dArgs) -> Result<Value> {
    let outcome = experiments::blur2d(&BlurParams {
        source_angles: args.angles.clone(),
        target_angles: args.angles_target.clone(),
        kernel_len: args.kernel_len,
        n_images: args.n_images,
        size: args.size,
        seed: Seed(args.seed),
    })?;
    let report = json!({
        "command": "blur2d",
        "kernel_len": args.kernel_len,
        "n_images": args.n_images,
        "size": args.size,
        "domains": outcome.domains.iter().map(|d| json!({
            "angle_deg": d.angle_deg,
            "role": if d.source { "source" } else { "target" },
            "gap_before": d.gap_before,
            "gap_after": d.gap_after,
            "ratio": if d.gap_before > 0.0 { d.gap_after / d.gap_before } else { 0.0 },
            "heldout_gap_before": d.heldout.map(|h| h.0),
            "heldout_gap_after": d.heldout.map(|h| h.1),
        })).collect::<Vec<_>>(),
    });
    if let Some(dir) = &args.out_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        experiments::write_pgm(dir.join("barycenter_corr.pgm"), &outcome.barycenter_corr)?;
        for (k, d) in outcome.domains.iter().enumerate() {
            let tag = format!("{}_{:03}", if d.source { "source" } else { "target" }, d.angle_deg.round() as i64);
            experiments::write_pgm(dir.join(format!("{tag}_before.pgm")), &outcome.corr_before[k])?;
            experiments::write_pgm(dir.join(format!("{tag}_after.pgm")), &outcome.corr_after[k])?;
        }
        let path = dir.join("report.json");
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
    }
    Ok(report)
}

pub fn synth(args: &SynthArgs) -> Result<Value> {
    let spec = match (args.recipe, args.rho, args.gamma) {
        (Recipe::Expcorr, rho, gamma) if rho.is_some() || gamma.is_some() => {
            synth::expcorr_spec(gamma.unwrap_or(1.0), rho.unwrap_or(0.9), args.n_channels, args.n_samples)?
        }
        (_, None, None) => synth::fixture_spectrum(args.recipe, args.n_channels, args.n_samples, args.domain)?,
        _ => return Err(Error::InvalidParameter("--rho and --gamma apply to the expcorr recipe only".into())),
    };
    let sig = synth::gen_stationary(&spec, Seed(args.seed))?.with_sample_rate(args.sample_rate)?;
    io::write_signal(&args.out, &sig)?;
    Ok(json!({
        "command": "synth",
        "output": args.out,
        "recipe": args.recipe,
        "domain": args.domain,
        "n_channels": sig.n_channels(),
        "n_samples": sig.n_samples(),
        "seed": args.seed,
    }))
}

/// Runs a parsed command. The string is what goes to stdout.
pub fn run(cli: &Cli) -> Result<String> {
    let pretty = |v: Value| serde_json::to_string_pretty(&v).expect("report serializes");
    Ok(match &cli.command {
        Command::Fit(a) => pretty(fit(a)?),
        Command::Transform(a) => pretty(transform(a)?),
        Command::Eval(a) => pretty(eval(a)?),
        Command::Biasvar(a) => biasvar(a)?.0,
        Command::Blur2d(a) => pretty(blur2d(a)?),
        Command::Synth(a) => pretty(synth(a)?),
    })
}

/// Machine-readable error report for stderr.
pub fn error_json(err: &Error) -> String {
    json!({ "error": err.kind(), "message": err.to_string() }).to_string()
}
