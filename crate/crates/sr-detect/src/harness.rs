//! Monte-Carlo evaluation: AMSE scoring, (sigma, bandwidth) grid search,
//! decomposition-level sweeps, and report files.
//!
//! The recovery quality criterion is the AMSE in the replicate-protocol
//! sense: recoveries are repeated (100 times by default) at each parameter
//! cell, and the score is the average squared difference between the truth
//! and the *pointwise mean* of the recovered signals. A second metric,
//! `mse_mean` (mean over replicates of the per-replicate MSE), is reported
//! alongside since the bias-only definition rewards high-variance unbiased
//! recoveries; selection uses `amse`.
//!
//! Seeding: cell and replicate substreams derive from
//! `(base_seed, cell index, replicate index)` via [`crate::seed`], so serial
//! and parallel runs produce byte-identical reports.

use crate::detector::Thresholds;
use crate::noise::NoiseModel;
use crate::pipeline::{self, CoeffNoise, Domain, MultiscalePlan, RecoveryConfig, WaveletSpec};
use crate::seed::derive_stream;
use crate::signals::{self, Signal1D, Signal2D, SignalKind};
use crate::wavelet::FilterKind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("at least 2 recoveries are required, got {0}")]
    TooFewRecoveries(usize),
    #[error("recovery {index} has {got} points, truth has {expected}")]
    ShapeMismatch {
        index: usize,
        got: usize,
        expected: usize,
    },
    #[error("replicates must be >= 2, got {0}")]
    TooFewReplicates(usize),
    #[error("sigma_grid must be non-empty, positive, and finite")]
    BadSigmaGrid,
    #[error("bandwidth_grid must be non-empty, positive, and finite")]
    BadBandwidthGrid,
    #[error("bandwidth_grid is not used by 2D parametric recovery; remove it")]
    BandwidthGridUnused,
    #[error("level sweep requires the multiscale domain")]
    NotMultiscale,
    #[error("all {0} grid cells failed")]
    AllCellsFailed(usize),
    #[error("signal `{path}` could not be loaded: {source}")]
    SignalLoad {
        path: String,
        #[source]
        source: signals::SignalError,
    },
    #[error(transparent)]
    Signal(#[from] signals::SignalError),
    #[error(transparent)]
    Pipeline(#[from] pipeline::PipelineError),
    #[error(transparent)]
    Detector(#[from] crate::detector::DetectorError),
    #[error("failed to write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

/// Detector variant scored by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Detector {
    /// Lower threshold only (`theta_a`).
    Sub,
    /// Upper threshold only (`theta_b`).
    Sup,
    /// Variance-weighted combination.
    Double,
    /// Covariance-optimal combination.
    DoubleOptimal,
}

/// What signal an experiment runs on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SignalSpec {
    /// The generated 2D sin*cos image: `{"kind": "sincos", "size": 512}`.
    Generated2D { kind: SinCosTag, size: usize },
    /// A generated 1D test signal: `{"kind": "sine", "n": 1024}`.
    Generated { kind: SignalKind, n: usize },
    /// An image file (PGM or CSV matrix), optionally rescaled.
    Image {
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rescale: Option<(f64, f64)>,
    },
}

/// Marker for the 2D generator in configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SinCosTag {
    Sincos,
}

/// Loaded experiment input.
pub enum ExperimentSignal {
    OneD(Signal1D),
    TwoD(Signal2D),
}

impl SignalSpec {
    pub fn load(&self) -> Result<ExperimentSignal, HarnessError> {
        match self {
            SignalSpec::Generated { kind, n } => {
                Ok(ExperimentSignal::OneD(signals::gen_1d(*kind, *n)?))
            }
            SignalSpec::Generated2D { kind: _, size } => {
                Ok(ExperimentSignal::TwoD(signals::gen_2d_sincos(*size)?))
            }
            SignalSpec::Image { path, rescale } => {
                let img = signals::load_image(path).map_err(|source| HarnessError::SignalLoad {
                    path: path.display().to_string(),
                    source,
                })?;
                let img = match rescale {
                    Some((lo, hi)) => img.rescaled(*lo, *hi)?,
                    None => img,
                };
                Ok(ExperimentSignal::TwoD(img))
            }
        }
    }
}

/// A full experiment description; serializable as the JSON config format.
///
/// Optional fields resolve to defaults in [`ExperimentConfig::resolve`]:
/// thresholds follow the `a = 2 min, b = 2 max` rule of the simulation
/// protocol, sigma grids depend on domain and dimensionality, the bandwidth
/// grid is log-spaced over [0.001, 0.5], and multiscale defaults to
/// Symmlet-8 with 3 levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub signal: SignalSpec,
    pub detector: Detector,
    pub domain: Domain,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thresholds: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_grid: Option<GridInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bandwidth_grid: Option<GridInput>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wavelet: Option<WaveletSpec>,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default = "default_replicates")]
    pub replicates_per_point: usize,
    #[serde(default = "default_seed")]
    pub base_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub nw_global_n: bool,
    #[serde(default, skip_serializing_if = "is_default_coeff_noise")]
    pub coeff_noise: CoeffNoise,
}

fn default_replicates() -> usize {
    100
}

fn default_seed() -> u64 {
    42
}

fn is_default_coeff_noise(c: &CoeffNoise) -> bool {
    *c == CoeffNoise::All
}

/// A grid, given either explicitly or as `{min, max, step}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridInput {
    Range { min: f64, max: f64, step: f64 },
    Explicit(Vec<f64>),
}

impl GridInput {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridInput::Explicit(v) => v.clone(),
            GridInput::Range { min, max, step } => {
                let count = ((max - min) / step).round() as usize + 1;
                (0..count)
                    .map(|i| (min + i as f64 * step).min(*max))
                    .collect()
            }
        }
    }
}

/// Log-spaced default bandwidth grid over [0.001, 0.5].
pub fn default_bandwidth_grid() -> Vec<f64> {
    let (lo, hi, count) = (0.001_f64, 0.5_f64, 10);
    (0..count)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Default sigma grid by domain and dimensionality (step 0.05).
pub fn default_sigma_grid(domain: Domain, two_d: bool) -> GridInput {
    let (min, max) = if two_d {
        (0.25, 2.0)
    } else {
        match domain {
            Domain::Data => (1.0, 5.0),
            Domain::Multiscale => (1.0, 4.0),
        }
    };
    GridInput::Range {
        min,
        max,
        step: 0.05,
    }
}

impl ExperimentConfig {
    pub fn new(signal: SignalSpec, detector: Detector, domain: Domain) -> Self {
        Self {
            signal,
            detector,
            domain,
            thresholds: None,
            sigma_grid: None,
            bandwidth_grid: None,
            wavelet: None,
            replicates: default_replicates(),
            replicates_per_point: default_replicates(),
            base_seed: default_seed(),
            threads: None,
            nw_global_n: false,
            coeff_noise: CoeffNoise::All,
        }
    }

    /// Fill every optional knob with its default and validate. The resolved
    /// config serializes to a fully explicit file that parses back to itself.
    pub fn resolve(&mut self) -> Result<(), HarnessError> {
        if self.replicates < 2 {
            return Err(HarnessError::TooFewReplicates(self.replicates));
        }
        let signal = self.signal.load()?;
        let two_d = matches!(signal, ExperimentSignal::TwoD(_));

        if self.thresholds.is_none() {
            let values = match &signal {
                ExperimentSignal::OneD(s) => s.values(),
                ExperimentSignal::TwoD(s) => s.values(),
            };
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            self.thresholds = Some((2.0 * min, 2.0 * max));
        }
        let (a, b) = self.thresholds.unwrap();
        Thresholds::new(a, b)?;

        if self.sigma_grid.is_none() {
            self.sigma_grid = Some(default_sigma_grid(self.domain, two_d));
        }
        let sigmas = self.sigma_grid.as_ref().unwrap().values();
        if sigmas.is_empty() || sigmas.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return Err(HarnessError::BadSigmaGrid);
        }
        self.sigma_grid = Some(GridInput::Explicit(sigmas));

        if two_d {
            if self.bandwidth_grid.is_some() {
                return Err(HarnessError::BandwidthGridUnused);
            }
        } else {
            if self.bandwidth_grid.is_none() {
                self.bandwidth_grid = Some(GridInput::Explicit(default_bandwidth_grid()));
            }
            let ws = self.bandwidth_grid.as_ref().unwrap().values();
            if ws.is_empty() || ws.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
                return Err(HarnessError::BadBandwidthGrid);
            }
            self.bandwidth_grid = Some(GridInput::Explicit(ws));
        }

        if self.domain == Domain::Multiscale && self.wavelet.is_none() {
            self.wavelet = Some(WaveletSpec {
                filter: FilterKind::Symmlet8,
                levels: 3,
            });
        }
        Ok(())
    }

    fn thresholds_checked(&self) -> Thresholds {
        let (a, b) = self.thresholds.expect("resolved");
        Thresholds::new(a, b).expect("validated")
    }
}

/// AMSE in the replicate-protocol sense: the average squared difference
/// between the truth and the pointwise mean of the recoveries (the squared
/// bias of the mean recovery, not a mean of per-replicate errors).
pub fn amse(truth: &[f64], recoveries: &[Vec<f64>]) -> Result<f64, HarnessError> {
    if recoveries.len() < 2 {
        return Err(HarnessError::TooFewRecoveries(recoveries.len()));
    }
    for (index, r) in recoveries.iter().enumerate() {
        if r.len() != truth.len() {
            return Err(HarnessError::ShapeMismatch {
                index,
                got: r.len(),
                expected: truth.len(),
            });
        }
    }
    let n = truth.len() as f64;
    let m = recoveries.len() as f64;
    let mut acc = 0.0;
    for (i, t) in truth.iter().enumerate() {
        let mean: f64 = recoveries.iter().map(|r| r[i]).sum::<f64>() / m;
        acc += (t - mean) * (t - mean);
    }
    Ok(acc / n)
}

/// Mean over replicates of the per-replicate mean squared error.
pub fn mse_mean(truth: &[f64], recoveries: &[Vec<f64>]) -> Result<f64, HarnessError> {
    if recoveries.len() < 2 {
        return Err(HarnessError::TooFewRecoveries(recoveries.len()));
    }
    let n = truth.len() as f64;
    let mut acc = 0.0;
    for (index, r) in recoveries.iter().enumerate() {
        if r.len() != truth.len() {
            return Err(HarnessError::ShapeMismatch {
                index,
                got: r.len(),
                expected: truth.len(),
            });
        }
        acc += truth
            .iter()
            .zip(r)
            .map(|(t, v)| (t - v) * (t - v))
            .sum::<f64>()
            / n;
    }
    Ok(acc / recoveries.len() as f64)
}

/// One evaluated grid cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<f64>,
    /// `None` marks a failed cell (excluded from the argmin).
    pub amse: Option<f64>,
    pub mse_mean: Option<f64>,
    pub seed: u64,
}

/// The winning cell of a search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestCell {
    pub sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth: Option<f64>,
    pub amse: f64,
    pub mse_mean: f64,
}

/// Full grid-search output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchReport {
    pub config: ExperimentConfig,
    pub cells: Vec<CellResult>,
    pub best: BestCell,
    pub timestamp: String,
}

/// Evaluate the AMSE over every `(sigma, bandwidth)` cell and select the
/// minimum; ties break toward smaller sigma, then smaller bandwidth.
pub fn grid_search(cfg: &ExperimentConfig) -> Result<GridSearchReport, HarnessError> {
    let mut cfg = cfg.clone();
    cfg.resolve()?;
    let signal = cfg.signal.load()?;
    run_in_pool(cfg.threads, || grid_search_resolved(&cfg, &signal))
}

fn run_in_pool<T>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T
where
    T: Send,
{
    match threads {
        None => f(),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .expect("thread pool");
            pool.install(f)
        }
    }
}

/// Score one `(sigma, bandwidth)` cell: run the configured number of
/// replicate recoveries with derived substream seeds and compute both
/// metrics for the configured detector.
fn run_cell(
    cfg: &ExperimentConfig,
    signal: &ExperimentSignal,
    sigma: f64,
    bandwidth: Option<f64>,
    cell_seed: u64,
) -> Result<(f64, f64), HarnessError> {
    let model = NoiseModel::gaussian(sigma).expect("validated grid");
    let mut rc = RecoveryConfig::new(cfg.thresholds_checked(), model, cell_seed);
    rc.bandwidth = bandwidth;
    rc.wavelet = if cfg.domain == Domain::Multiscale {
        cfg.wavelet
    } else {
        None
    };
    rc.replicates_per_point = cfg.replicates_per_point;
    rc.nw_global_n = cfg.nw_global_n;
    rc.coeff_noise = cfg.coeff_noise;
    rc.optimal_weights = cfg.detector == Detector::DoubleOptimal;

    let pick = |res: &pipeline::RecoveryResult<Signal1D>| -> Vec<f64> {
        match cfg.detector {
            Detector::Sub => res.theta_a_hat.values().to_vec(),
            Detector::Sup => res.theta_b_hat.values().to_vec(),
            Detector::Double | Detector::DoubleOptimal => res.theta_hat.values().to_vec(),
        }
    };
    let pick2 = |res: &pipeline::RecoveryResult<Signal2D>| -> Vec<f64> {
        match cfg.detector {
            Detector::Sub => res.theta_a_hat.values().to_vec(),
            Detector::Sup => res.theta_b_hat.values().to_vec(),
            Detector::Double | Detector::DoubleOptimal => res.theta_hat.values().to_vec(),
        }
    };

    let (truth, recoveries): (Vec<f64>, Vec<Vec<f64>>) = match (signal, cfg.domain) {
        (ExperimentSignal::OneD(s), Domain::Data) => {
            let w = bandwidth.expect("1D grid carries bandwidth");
            let smoother = crate::detector::NwSmoother::new(s.times(), w)?;
            let recs = (0..cfg.replicates)
                .map(|r| {
                    let rc = rc.with_seed(derive_stream(cell_seed, r as u64));
                    Ok(pick(&pipeline::recover_1d_data_with(&smoother, s, &rc)?))
                })
                .collect::<Result<Vec<_>, HarnessError>>()?;
            (s.values().to_vec(), recs)
        }
        (ExperimentSignal::OneD(s), Domain::Multiscale) => {
            let plan = MultiscalePlan::new(s, &rc)?;
            let recs = (0..cfg.replicates)
                .map(|r| {
                    let rc = rc.with_seed(derive_stream(cell_seed, r as u64));
                    Ok(pick(&pipeline::recover_1d_multiscale_with(&plan, s, &rc)?))
                })
                .collect::<Result<Vec<_>, HarnessError>>()?;
            (s.values().to_vec(), recs)
        }
        (ExperimentSignal::TwoD(img), domain) => {
            let recs = (0..cfg.replicates)
                .map(|r| {
                    let rc = rc.with_seed(derive_stream(cell_seed, r as u64));
                    let res = match domain {
                        Domain::Data => pipeline::recover_2d_data(img, &rc)?,
                        Domain::Multiscale => pipeline::recover_2d_multiscale(img, &rc)?,
                    };
                    Ok(pick2(&res))
                })
                .collect::<Result<Vec<_>, HarnessError>>()?;
            (img.values().to_vec(), recs)
        }
    };
    Ok((amse(&truth, &recoveries)?, mse_mean(&truth, &recoveries)?))
}

fn grid_search_resolved(
    cfg: &ExperimentConfig,
    signal: &ExperimentSignal,
) -> Result<GridSearchReport, HarnessError> {
    let sigmas = cfg.sigma_grid.as_ref().expect("resolved").values();
    let bandwidths: Vec<Option<f64>> = match &cfg.bandwidth_grid {
        Some(g) => g.values().into_iter().map(Some).collect(),
        None => vec![None],
    };

    // cell index = sigma index * |bandwidths| + bandwidth index
    let mut cells_spec: Vec<(usize, f64, Option<f64>)> =
        Vec::with_capacity(sigmas.len() * bandwidths.len());
    for (i, &s) in sigmas.iter().enumerate() {
        for (j, &w) in bandwidths.iter().enumerate() {
            cells_spec.push((i * bandwidths.len() + j, s, w));
        }
    }

    let cells: Vec<CellResult> = cells_spec
        .par_iter()
        .map(|&(idx, sigma, bandwidth)| {
            let seed = derive_stream(cfg.base_seed, idx as u64);
            match run_cell(cfg, signal, sigma, bandwidth, seed) {
                Ok((amse, mse)) => CellResult {
                    sigma,
                    bandwidth,
                    amse: Some(amse),
                    mse_mean: Some(mse),
                    seed,
                },
                Err(err) => {
                    log::warn!("cell (sigma={sigma}, w={bandwidth:?}) failed: {err}");
                    CellResult {
                        sigma,
                        bandwidth,
                        amse: None,
                        mse_mean: None,
                        seed,
                    }
                }
            }
        })
        .collect();

    let best = cells
        .iter()
        .filter_map(|c| {
            c.amse.map(|a| {
                (
                    a,
                    c.sigma,
                    c.bandwidth.unwrap_or(0.0),
                    c.bandwidth,
                    c.mse_mean.unwrap_or(f64::NAN),
                )
            })
        })
        .min_by(|x, y| {
            x.0.total_cmp(&y.0)
                .then(x.1.total_cmp(&y.1))
                .then(x.2.total_cmp(&y.2))
        })
        .map(|(amse, sigma, _, bandwidth, mse)| BestCell {
            sigma,
            bandwidth,
            amse,
            mse_mean: mse,
        })
        .ok_or_else(|| HarnessError::AllCellsFailed(cells.len()))?;

    Ok(GridSearchReport {
        config: cfg.clone(),
        cells,
        best,
        timestamp: chrono::Utc::now().to_rfc3339(),
    })
}

/// Per-level result of a decomposition sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelEntry {
    pub level: usize,
    pub best: BestCell,
    pub cells: Vec<CellResult>,
}

/// Sweep output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSweepReport {
    pub config: ExperimentConfig,
    pub levels: Vec<LevelEntry>,
    pub timestamp: String,
}

/// Rerun the grid search at each decomposition level.
pub fn level_sweep(
    cfg: &ExperimentConfig,
    levels: &[usize],
) -> Result<LevelSweepReport, HarnessError> {
    if cfg.domain != Domain::Multiscale {
        return Err(HarnessError::NotMultiscale);
    }
    let mut resolved = cfg.clone();
    resolved.resolve()?;
    let entries = levels
        .iter()
        .map(|&level| {
            let mut per_level = resolved.clone();
            per_level.wavelet = per_level
                .wavelet
                .map(|w| WaveletSpec { levels: level, ..w });
            let report = grid_search(&per_level)?;
            Ok(LevelEntry {
                level,
                best: report.best,
                cells: report.cells,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    Ok(LevelSweepReport {
        config: resolved,
        levels: entries,
        timestamp: chrono::Utc::now().to_rfc3339(),
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), HarnessError> {
    std::fs::write(path, contents).map_err(|source| HarnessError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Grid cells as CSV (`sigma,bandwidth,amse,mse_mean`); failed cells keep
/// their coordinates with empty metric fields. Fields never need RFC-4180
/// quoting (numeric or empty), so rows are plain comma joins.
pub fn cells_to_csv(cells: &[CellResult]) -> String {
    let mut out = String::from("sigma,bandwidth,amse,mse_mean\n");
    for c in cells {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            c.sigma,
            fmt_opt(c.bandwidth),
            fmt_opt(c.amse),
            fmt_opt(c.mse_mean)
        );
    }
    out
}

/// Artifacts written by [`run_experiment`].
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub report_json: PathBuf,
    pub report_csv: PathBuf,
    pub config_echo: PathBuf,
}

/// Execute a grid search (or a level sweep when `levels` is given) and write
/// `report.json`, `report.csv`, and `resolved_config.json` under `out_dir`.
///
/// Reruns with the same config are byte-identical except the timestamp field.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    levels: Option<&[usize]>,
    out_dir: &Path,
) -> Result<RunArtifacts, HarnessError> {
    std::fs::create_dir_all(out_dir).map_err(|source| HarnessError::Io {
        path: out_dir.display().to_string(),
        source,
    })?;
    let report_json = out_dir.join("report.json");
    let report_csv = out_dir.join("report.csv");
    let config_echo = out_dir.join("resolved_config.json");

    match levels {
        None => {
            let report = grid_search(cfg)?;
            write_file(
                &report_json,
                &serde_json::to_string_pretty(&report).expect("serializable report"),
            )?;
            write_file(&report_csv, &cells_to_csv(&report.cells))?;
            write_file(
                &config_echo,
                &serde_json::to_string_pretty(&report.config).expect("serializable config"),
            )?;
        }
        Some(levels) => {
            let report = level_sweep(cfg, levels)?;
            write_file(
                &report_json,
                &serde_json::to_string_pretty(&report).expect("serializable report"),
            )?;
            let mut csv = String::from("level,sigma,bandwidth,amse,mse_mean\n");
            for entry in &report.levels {
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    entry.level,
                    entry.best.sigma,
                    fmt_opt(entry.best.bandwidth),
                    entry.best.amse,
                    entry.best.mse_mean
                );
            }
            write_file(&report_csv, &csv)?;
            write_file(
                &config_echo,
                &serde_json::to_string_pretty(&report.config).expect("serializable config"),
            )?;
        }
    }
    Ok(RunArtifacts {
        report_json,
        report_csv,
        config_echo,
    })
}
