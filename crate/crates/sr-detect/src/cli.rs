//! The `sr-detect` command line: signal generation, recovery, grid search,
//! level sweeps, wavelet transforms, and Fisher-surface export.
//!
//! Exit codes: 0 success, 1 usage/config error, 2 runtime or numeric error.
//! Experiment commands honor `SR_DETECT_THREADS` as a worker cap unless
//! `--threads` overrides it. Commands that write into an output directory
//! also write `resolved_config.json` there; file-output commands echo their
//! resolved parameters as JSON on stdout.

use crate::detector::Thresholds;
use crate::fisher::{self, GridSpec, SurfaceMode, SurfaceParams};
use crate::harness::{
    self, Detector, ExperimentConfig, ExperimentSignal, GridInput, SignalSpec, SinCosTag,
};
use crate::noise::NoiseModel;
use crate::pipeline::{self, Domain, RecoveryConfig, WaveletSpec};
use crate::signals::{self, SignalKind};
use crate::wavelet::{self, FilterKind, WaveletFilter};
use clap::{Args, Parser, Subcommand};
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Recover weak signals from tri-state threshold-exceedance data.
#[derive(Debug, Parser)]
#[command(name = "sr-detect", version, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a test signal as CSV (`t,value` for 1D, a matrix for 2D).
    Gen(GenArgs),
    /// Run a single recovery and dump the recovered signal.
    Recover(RecoverArgs),
    /// Monte-Carlo AMSE search over a (sigma, bandwidth) grid.
    GridSearch(GridSearchArgs),
    /// Grid search repeated across wavelet decomposition levels.
    LevelSweep(LevelSweepArgs),
    /// Export a Fisher-information surface as CSV.
    Fisher(FisherArgs),
    /// Forward wavelet transform of a signal or image, as CSV.
    Dwt(DwtArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    /// Signal kind: sine, wave, doppler, timeshiftedsine, angles, blip,
    /// parabolas, or sincos (2D).
    #[arg(long)]
    kind: String,
    /// 1D length (power of two).
    #[arg(long)]
    n: Option<usize>,
    /// 2D side length for sincos (power of two).
    #[arg(long)]
    size: Option<usize>,
    /// Output CSV file.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SignalArgs {
    /// Generated signal kind (1D kinds or sincos).
    #[arg(long)]
    kind: Option<String>,
    /// 1D length (power of two).
    #[arg(long)]
    n: Option<usize>,
    /// 2D side length for sincos.
    #[arg(long)]
    size: Option<usize>,
    /// Image file (binary PGM P5 or CSV matrix) instead of a generator.
    #[arg(long, conflicts_with_all = ["kind", "n", "size"])]
    image: Option<PathBuf>,
    /// Rescale a loaded image onto [lo, hi], e.g. `--rescale -1,1`.
    #[arg(long, value_parser = parse_pair, requires = "image")]
    rescale: Option<(f64, f64)>,
}

#[derive(Debug, Args)]
struct RecoverArgs {
    #[command(flatten)]
    signal: SignalArgs,
    /// Noise level to inject.
    #[arg(long)]
    sigma: f64,
    /// Nadaraya-Watson bandwidth (1D only).
    #[arg(long)]
    bandwidth: Option<f64>,
    #[arg(long, value_parser = parse_detector, default_value = "double")]
    detector: Detector,
    #[arg(long, value_parser = parse_domain, default_value = "data")]
    domain: Domain,
    /// Wavelet filter: haar, daub4, symmlet8.
    #[arg(long)]
    filter: Option<String>,
    /// Wavelet decomposition levels.
    #[arg(long)]
    levels: Option<usize>,
    /// Explicit thresholds `a,b`; default is twice the signal range.
    #[arg(long, value_parser = parse_pair)]
    thresholds: Option<(f64, f64)>,
    /// Draws per pixel (2D parametric recovery).
    #[arg(long, default_value_t = 100)]
    replicates_per_point: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output directory (recovered.csv + resolved_config.json).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    /// JSON experiment config; flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    signal: SignalArgs,
    #[arg(long, value_parser = parse_detector)]
    detector: Option<Detector>,
    #[arg(long, value_parser = parse_domain)]
    domain: Option<Domain>,
    #[arg(long)]
    sigma_min: Option<f64>,
    #[arg(long)]
    sigma_max: Option<f64>,
    #[arg(long)]
    sigma_step: Option<f64>,
    /// Comma-separated bandwidth grid, e.g. `0.01,0.02,0.05`.
    #[arg(long, value_parser = parse_list)]
    bandwidth_grid: Option<std::vec::Vec<f64>>,
    /// Wavelet filter for the multiscale domain.
    #[arg(long)]
    filter: Option<String>,
    /// Wavelet decomposition levels.
    #[arg(long)]
    levels: Option<usize>,
    #[arg(long)]
    replicates: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker thread cap (default: SR_DETECT_THREADS or all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct GridSearchArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
}

#[derive(Debug, Args)]
struct LevelSweepArgs {
    #[command(flatten)]
    experiment: ExperimentArgs,
    /// Decomposition levels to sweep, e.g. `1,2,3,4,5,6`.
    #[arg(long, value_parser = parse_usize_list, default_value = "1,2,3,4,5,6")]
    sweep_levels: std::vec::Vec<usize>,
}

#[derive(Debug, Args)]
struct FisherArgs {
    /// threshold-plane (a x b at fixed theta, sigma) or theta-sigma
    /// (theta x sigma at fixed a, b).
    #[arg(long)]
    mode: String,
    #[arg(long)]
    theta: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    /// First-axis range `min,max` (a, or theta).
    #[arg(long, value_parser = parse_pair)]
    axis1: Option<(f64, f64)>,
    /// Second-axis range `min,max` (b, or sigma).
    #[arg(long, value_parser = parse_pair)]
    axis2: Option<(f64, f64)>,
    #[arg(long, default_value_t = 0.005)]
    step: f64,
    /// Output CSV (`axis1,axis2,value`).
    #[arg(long)]
    out: PathBuf,
    /// Optional ridge-trace CSV (`axis1,argmax_axis2,value`).
    #[arg(long)]
    ridge_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DwtArgs {
    #[command(flatten)]
    signal: SignalArgs,
    #[arg(long, default_value = "symmlet8")]
    filter: String,
    #[arg(long, default_value_t = 3)]
    levels: usize,
    /// Output CSV (`index,value` for 1D; a matrix for 2D).
    #[arg(long)]
    out: PathBuf,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(format!("expected `lo,hi`, got `{s}`"));
    }
    let lo = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let hi = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok((lo, hi))
}

fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|p| p.trim().parse().map_err(|e| format!("{e}")))
        .collect()
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, String> {
    s.split(',')
        .map(|p| p.trim().parse().map_err(|e| format!("{e}")))
        .collect()
}

fn parse_detector(s: &str) -> Result<Detector, String> {
    match s {
        "sub" => Ok(Detector::Sub),
        "sup" => Ok(Detector::Sup),
        "double" => Ok(Detector::Double),
        "double-optimal" => Ok(Detector::DoubleOptimal),
        other => Err(format!(
            "unknown detector `{other}` (expected sub|sup|double|double-optimal)"
        )),
    }
}

fn parse_domain(s: &str) -> Result<Domain, String> {
    match s {
        "data" => Ok(Domain::Data),
        "multiscale" => Ok(Domain::Multiscale),
        other => Err(format!("unknown domain `{other}` (expected data|multiscale)")),
    }
}

/// A CLI failure with its exit classification.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Usage(e.to_string())
}

fn runtime<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Parse, validate, and resolve a JSON experiment config. Unknown keys and
/// invalid values are usage errors naming the offending field.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut cfg: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?;
    cfg.resolve()
        .map_err(|e| usage(format!("invalid config {}: {e}", path.display())))?;
    Ok(cfg)
}

fn env_threads() -> Option<usize> {
    std::env::var("SR_DETECT_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
}

/// Run the CLI on explicit arguments; returns the process exit code.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            // clap usage errors exit 1 under the 0/1/2 taxonomy
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gen(args) => cmd_gen(args),
        Command::Recover(args) => cmd_recover(args),
        Command::GridSearch(args) => cmd_grid_search(args.experiment, None),
        Command::LevelSweep(args) => {
            cmd_grid_search(args.experiment, Some(args.sweep_levels))
        }
        Command::Fisher(args) => cmd_fisher(args),
        Command::Dwt(args) => cmd_dwt(args),
    }
}

fn write_text(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| runtime(format!("cannot create {}: {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| runtime(format!("cannot write {}: {e}", path.display())))
}

fn signal_spec_from_args(args: &SignalArgs) -> Result<SignalSpec, CliError> {
    if let Some(image) = &args.image {
        return Ok(SignalSpec::Image {
            path: image.clone(),
            rescale: args.rescale,
        });
    }
    let kind = args
        .kind
        .as_deref()
        .ok_or_else(|| usage("either --kind or --image is required"))?;
    if kind == "sincos" {
        let size = args
            .size
            .ok_or_else(|| usage("--size is required for --kind sincos"))?;
        return Ok(SignalSpec::Generated2D {
            kind: SinCosTag::Sincos,
            size,
        });
    }
    let kind: SignalKind = kind.parse().map_err(usage)?;
    let n = args
        .n
        .ok_or_else(|| usage(format!("--n is required for --kind {}", kind.name())))?;
    Ok(SignalSpec::Generated { kind, n })
}

fn cmd_gen(args: GenArgs) -> Result<(), CliError> {
    if args.kind == "sincos" {
        let size = args
            .size
            .ok_or_else(|| usage("--size is required for --kind sincos"))?;
        let img = signals::gen_2d_sincos(size).map_err(usage)?;
        let mut out = String::new();
        for r in 0..img.rows() {
            let row: Vec<String> = (0..img.cols()).map(|c| img.get(r, c).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        write_text(&args.out, &out)?;
        println!(
            "{}",
            serde_json::json!({"kind": "sincos", "size": size, "out": args.out})
        );
        return Ok(());
    }
    let kind: SignalKind = args.kind.parse().map_err(usage)?;
    let n = args.n.ok_or_else(|| usage("--n is required"))?;
    let signal = signals::gen_1d(kind, n).map_err(usage)?;
    let mut out = String::from("t,value\n");
    for (t, v) in signal.times().iter().zip(signal.values()) {
        let _ = writeln!(out, "{t},{v}");
    }
    write_text(&args.out, &out)?;
    println!(
        "{}",
        serde_json::json!({"kind": kind.name(), "n": n, "out": args.out})
    );
    Ok(())
}

fn cmd_recover(args: RecoverArgs) -> Result<(), CliError> {
    let spec = signal_spec_from_args(&args.signal)?;
    let signal = spec.load().map_err(usage)?;
    let model = NoiseModel::gaussian(args.sigma).map_err(usage)?;

    let thresholds = match args.thresholds {
        Some((a, b)) => Thresholds::new(a, b).map_err(usage)?,
        None => {
            let values = match &signal {
                ExperimentSignal::OneD(s) => s.values(),
                ExperimentSignal::TwoD(s) => s.values(),
            };
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            Thresholds::new(2.0 * min, 2.0 * max).map_err(usage)?
        }
    };

    let mut rc = RecoveryConfig::new(thresholds, model, args.seed);
    rc.bandwidth = args.bandwidth;
    rc.replicates_per_point = args.replicates_per_point;
    if args.domain == Domain::Multiscale {
        let filter: FilterKind = args
            .filter
            .as_deref()
            .unwrap_or("symmlet8")
            .parse()
            .map_err(usage)?;
        rc.wavelet = Some(WaveletSpec {
            filter,
            levels: args.levels.unwrap_or(3),
        });
    }
    rc.optimal_weights = args.detector == Detector::DoubleOptimal;

    let mut csv = String::from("t,truth,theta_hat,theta_a,theta_b\n");
    let dump = |csv: &mut String, t: f64, truth: f64, h: f64, a: f64, b: f64| {
        let _ = writeln!(csv, "{t},{truth},{h},{a},{b}");
    };
    match (&signal, args.domain) {
        (ExperimentSignal::OneD(s), Domain::Data) => {
            let res = pipeline::recover_1d_data(s, &rc).map_err(runtime)?;
            for i in 0..s.len() {
                dump(
                    &mut csv,
                    s.times()[i],
                    s.values()[i],
                    res.theta_hat.values()[i],
                    res.theta_a_hat.values()[i],
                    res.theta_b_hat.values()[i],
                );
            }
        }
        (ExperimentSignal::OneD(s), Domain::Multiscale) => {
            let res = pipeline::recover_1d_multiscale(s, &rc).map_err(runtime)?;
            for i in 0..s.len() {
                dump(
                    &mut csv,
                    s.times()[i],
                    s.values()[i],
                    res.theta_hat.values()[i],
                    res.theta_a_hat.values()[i],
                    res.theta_b_hat.values()[i],
                );
            }
        }
        (ExperimentSignal::TwoD(img), domain) => {
            let res = match domain {
                Domain::Data => pipeline::recover_2d_data(img, &rc).map_err(runtime)?,
                Domain::Multiscale => {
                    pipeline::recover_2d_multiscale(img, &rc).map_err(runtime)?
                }
            };
            // 2D dumps use the flat row-major pixel index as t
            for i in 0..img.values().len() {
                dump(
                    &mut csv,
                    i as f64,
                    img.values()[i],
                    res.theta_hat.values()[i],
                    res.theta_a_hat.values()[i],
                    res.theta_b_hat.values()[i],
                );
            }
        }
    }

    std::fs::create_dir_all(&args.out)
        .map_err(|e| runtime(format!("cannot create {}: {e}", args.out.display())))?;
    write_text(&args.out.join("recovered.csv"), &csv)?;
    let echo = serde_json::json!({
        "signal": spec,
        "detector": args.detector,
        "domain": args.domain,
        "recovery": rc,
    });
    write_text(
        &args.out.join("resolved_config.json"),
        &serde_json::to_string_pretty(&echo).expect("serializable"),
    )?;
    Ok(())
}

fn apply_overrides(cfg: &mut ExperimentConfig, args: &ExperimentArgs) -> Result<(), CliError> {
    if args.signal.kind.is_some() || args.signal.image.is_some() {
        cfg.signal = signal_spec_from_args(&args.signal)?;
    }
    if let Some(d) = args.detector {
        cfg.detector = d;
    }
    if let Some(d) = args.domain {
        cfg.domain = d;
    }
    if args.sigma_min.is_some() || args.sigma_max.is_some() || args.sigma_step.is_some() {
        let (min, max, step) = (
            args.sigma_min
                .ok_or_else(|| usage("--sigma-min is required with --sigma-max/--sigma-step"))?,
            args.sigma_max.ok_or_else(|| usage("--sigma-max is required"))?,
            args.sigma_step.unwrap_or(0.05),
        );
        cfg.sigma_grid = Some(GridInput::Range { min, max, step });
    }
    if let Some(ws) = &args.bandwidth_grid {
        cfg.bandwidth_grid = Some(GridInput::Explicit(ws.clone()));
    }
    if args.filter.is_some() || args.levels.is_some() {
        let filter: FilterKind = args
            .filter
            .as_deref()
            .unwrap_or("symmlet8")
            .parse()
            .map_err(usage)?;
        let levels = args
            .levels
            .or(cfg.wavelet.map(|w| w.levels))
            .unwrap_or(3);
        cfg.wavelet = Some(WaveletSpec { filter, levels });
    }
    if let Some(r) = args.replicates {
        cfg.replicates = r;
    }
    if let Some(s) = args.seed {
        cfg.base_seed = s;
    }
    cfg.threads = args.threads.or(env_threads()).or(cfg.threads);
    Ok(())
}

fn cmd_grid_search(args: ExperimentArgs, sweep: Option<Vec<usize>>) -> Result<(), CliError> {
    let mut cfg = match &args.config {
        Some(path) => parse_config(path)?,
        None => {
            let spec = signal_spec_from_args(&args.signal)?;
            let detector = args
                .detector
                .ok_or_else(|| usage("--detector is required without --config"))?;
            let domain = args
                .domain
                .ok_or_else(|| usage("--domain is required without --config"))?;
            ExperimentConfig::new(spec, detector, domain)
        }
    };
    apply_overrides(&mut cfg, &args)?;
    cfg.resolve().map_err(usage)?;
    if sweep.is_some() && cfg.domain != Domain::Multiscale {
        return Err(usage("level-sweep requires --domain multiscale"));
    }
    let artifacts = harness::run_experiment(&cfg, sweep.as_deref(), &args.out).map_err(runtime)?;
    println!(
        "{}",
        serde_json::json!({
            "report_json": artifacts.report_json,
            "report_csv": artifacts.report_csv,
            "resolved_config": artifacts.config_echo,
        })
    );
    Ok(())
}

fn cmd_fisher(args: FisherArgs) -> Result<(), CliError> {
    let (mode, params, g1, g2) = match args.mode.as_str() {
        "threshold-plane" => {
            let theta = args.theta.ok_or_else(|| usage("--theta is required"))?;
            let sigma = args.sigma.ok_or_else(|| usage("--sigma is required"))?;
            let (a_lo, a_hi) = args.axis1.unwrap_or((theta - 2.0, theta));
            let (b_lo, b_hi) = args.axis2.unwrap_or((theta, theta + 2.0));
            (
                SurfaceMode::ThresholdPlane,
                SurfaceParams::ThresholdPlane { theta, sigma },
                GridSpec::new(a_lo, a_hi, args.step).map_err(usage)?,
                GridSpec::new(b_lo, b_hi, args.step).map_err(usage)?,
            )
        }
        "theta-sigma" => {
            let a = args.a.ok_or_else(|| usage("--a is required"))?;
            let b = args.b.ok_or_else(|| usage("--b is required"))?;
            let (t_lo, t_hi) = args.axis1.unwrap_or((a, b));
            let (s_lo, s_hi) = args.axis2.unwrap_or((0.25, 2.0));
            (
                SurfaceMode::ThetaSigmaPlane,
                SurfaceParams::ThetaSigmaPlane { a, b },
                GridSpec::new(t_lo, t_hi, args.step).map_err(usage)?,
                GridSpec::new(s_lo, s_hi, args.step).map_err(usage)?,
            )
        }
        other => {
            return Err(usage(format!(
                "unknown mode `{other}` (expected threshold-plane|theta-sigma)"
            )))
        }
    };
    let surface = fisher::fi_surface(mode, params, g1, g2).map_err(runtime)?;
    let mut buf = Vec::new();
    surface.write_csv(&mut buf).map_err(runtime)?;
    write_text(&args.out, &String::from_utf8(buf).expect("utf8 csv"))?;
    if let Some(ridge_path) = &args.ridge_out {
        let mut buf = Vec::new();
        surface.write_ridge_csv(&mut buf).map_err(runtime)?;
        write_text(ridge_path, &String::from_utf8(buf).expect("utf8 csv"))?;
    }
    let (m1, m2, mv) = surface.global_max();
    println!(
        "{}",
        serde_json::json!({"out": args.out, "max": {"axis1": m1, "axis2": m2, "value": mv}})
    );
    Ok(())
}

fn cmd_dwt(args: DwtArgs) -> Result<(), CliError> {
    let filter_kind: FilterKind = args.filter.parse().map_err(usage)?;
    let filter = WaveletFilter::new(filter_kind);
    let spec = signal_spec_from_args(&args.signal)?;
    match spec.load().map_err(usage)? {
        ExperimentSignal::OneD(s) => {
            let coeffs = wavelet::dwt_1d(s.values(), &filter, args.levels).map_err(usage)?;
            let mut out = String::from("index,value\n");
            for (i, v) in coeffs.data().iter().enumerate() {
                let _ = writeln!(out, "{i},{v}");
            }
            write_text(&args.out, &out)?;
        }
        ExperimentSignal::TwoD(img) => {
            let coeffs = wavelet::dwt_2d(&img, &filter, args.levels).map_err(usage)?;
            let side = coeffs.side();
            let mut out = String::new();
            for r in 0..side {
                let row: Vec<String> = (0..side)
                    .map(|c| coeffs.data()[r * side + c].to_string())
                    .collect();
                let _ = writeln!(out, "{}", row.join(","));
            }
            write_text(&args.out, &out)?;
        }
    }
    println!(
        "{}",
        serde_json::json!({"filter": filter_kind.name(), "levels": args.levels, "out": args.out})
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_and_list_parsers() {
        assert_eq!(parse_pair("-1,1").unwrap(), (-1.0, 1.0));
        assert!(parse_pair("1").is_err());
        assert_eq!(parse_list("0.1, 0.2").unwrap(), vec![0.1, 0.2]);
        assert_eq!(parse_usize_list("1,2,3").unwrap(), vec![1, 2, 3]);
        assert!(parse_usize_list("1,x").is_err());
    }

    #[test]
    fn detector_and_domain_names() {
        assert_eq!(parse_detector("double-optimal").unwrap(), Detector::DoubleOptimal);
        assert!(parse_detector("triple").is_err());
        assert_eq!(parse_domain("multiscale").unwrap(), Domain::Multiscale);
        assert!(parse_domain("fourier").is_err());
    }

    #[test]
    fn minimal_config_parses_with_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("exp.json");
        std::fs::write(
            &path,
            r#"{"signal": {"kind": "sine", "n": 1024}, "detector": "double", "domain": "data"}"#,
        )
        .unwrap();
        let cfg = parse_config(&path).unwrap();
        assert_eq!(cfg.replicates, 100);
        assert_eq!(cfg.base_seed, 42);
        assert!(cfg.sigma_grid.is_some());
        assert!(cfg.bandwidth_grid.is_some());
    }

    #[test]
    fn config_errors_name_the_problem() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        std::fs::write(
            &path,
            r#"{"signal": {"kind": "sine", "n": 64}, "detector": "double",
                "domain": "data", "replicates": 1}"#,
        )
        .unwrap();
        let err = parse_config(&path).unwrap_err();
        assert!(matches!(err, CliError::Usage(_)));
        assert!(err.to_string().contains("replicates must be >= 2"), "{err}");

        std::fs::write(&path, r#"{"signal": {"kind": "sine", "n": 64}}"#).unwrap();
        assert!(parse_config(&path).is_err());
    }
}
