//! End-to-end signal recovery from threshold-exceedance data.
//!
//! Two domains:
//!
//! - **Data domain**: noise is added to the signal itself. 1D time-varying
//!   signals use Nadaraya-Watson exceedance smoothing across time; 2D signals
//!   use the parametric per-pixel route with repeated draws.
//! - **Multiscale domain**: the signal is wavelet-transformed first, noise is
//!   added to the coefficient vector, recovery runs per coefficient, and an
//!   inverse transform returns to the signal domain. The transform amplifies
//!   smooth-signal energy toward the thresholds, so less noise is needed.
//!
//! One call = one noise realization ("replicate"). The Monte-Carlo layer
//! that repeats recoveries and scores them lives in [`crate::harness`].

use crate::detector::{
    self, encode, theta_double, theta_double_optimal, theta_single, variance_hat, DetectorError,
    ExceedanceEstimate, NwSmoother, Side, Thresholds,
};
use crate::noise::{NoiseError, NoiseModel};
use crate::seed::derive_stream;
use crate::signals::{Signal1D, Signal2D, SignalError};
use crate::wavelet::{
    dwt_1d, dwt_2d, idwt_1d, idwt_2d, FilterKind, WaveletCoeffs, WaveletCoeffs2D, WaveletError,
    WaveletFilter,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("bandwidth is required for Nadaraya-Watson recovery")]
    MissingBandwidth,
    #[error("wavelet filter/levels are required for multiscale recovery")]
    MissingWavelet,
    #[error("replicates_per_point must be >= 2, got {0}")]
    TooFewReplicates(usize),
    #[error("effective sample size {0:.1} exceeds 200; exact covariance weights unavailable")]
    NeffTooLarge(f64),
    #[error(transparent)]
    Detector(#[from] DetectorError),
    #[error(transparent)]
    Noise(#[from] NoiseError),
    #[error(transparent)]
    Wavelet(#[from] WaveletError),
    #[error(transparent)]
    Signal(#[from] SignalError),
}

/// Recovery domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Data,
    Multiscale,
}

/// Wavelet transform choice for multiscale recovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveletSpec {
    pub filter: FilterKind,
    pub levels: usize,
}

/// Which coefficients receive noise and recovery in multiscale mode.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoeffNoise {
    /// The whole coefficient vector, smooth and detail blocks alike.
    #[default]
    All,
    /// Scaling coefficients only; detail blocks pass through unchanged.
    SmoothOnly,
}

/// Knobs for a single recovery.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RecoveryConfig {
    pub thresholds: Thresholds,
    pub model: NoiseModel,
    /// Nadaraya-Watson bandwidth; required for 1D recovery.
    pub bandwidth: Option<f64>,
    /// Transform for multiscale recovery; required in that domain.
    pub wavelet: Option<WaveletSpec>,
    /// Draws per pixel for 2D parametric recovery.
    pub replicates_per_point: usize,
    pub seed: u64,
    /// Use the global point count in variance formulas instead of the local
    /// effective kernel sample size.
    pub nw_global_n: bool,
    /// Multiscale noise scope.
    pub coeff_noise: CoeffNoise,
    /// Combine sides with exact-covariance optimal weights rather than the
    /// plain variance weights.
    pub optimal_weights: bool,
}

impl RecoveryConfig {
    pub fn new(thresholds: Thresholds, model: NoiseModel, seed: u64) -> Self {
        Self {
            thresholds,
            model,
            bandwidth: None,
            wavelet: None,
            replicates_per_point: 100,
            seed,
            nw_global_n: false,
            coeff_noise: CoeffNoise::All,
            optimal_weights: false,
        }
    }

    pub fn with_bandwidth(mut self, w: f64) -> Self {
        self.bandwidth = Some(w);
        self
    }

    pub fn with_wavelet(mut self, filter: FilterKind, levels: usize) -> Self {
        self.wavelet = Some(WaveletSpec { filter, levels });
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// Output of one recovery: the combined estimate plus both one-sided
/// estimates (same shape as the input signal), their pointwise variance
/// weights, and the exceedance estimate that produced them.
#[derive(Debug, Clone)]
pub struct RecoveryResult<S> {
    pub theta_hat: S,
    pub theta_a_hat: S,
    pub theta_b_hat: S,
    /// Clipped per-point variances of the a-side estimator.
    pub v_a: Vec<f64>,
    /// Clipped per-point variances of the b-side estimator.
    pub v_b: Vec<f64>,
    /// The (clipped) exceedance probabilities behind the estimates.
    pub exceedance: ExceedanceEstimate,
    pub config: RecoveryConfig,
}

fn warn_if_not_subthreshold(values: &[f64], thresholds: Thresholds) {
    let outside = values
        .iter()
        .filter(|&&v| v <= thresholds.lower() || v >= thresholds.upper())
        .count();
    if outside > 0 {
        log::warn!(
            "signal is not strictly sub-threshold: {outside} of {} points outside ({}, {})",
            values.len(),
            thresholds.lower(),
            thresholds.upper()
        );
    }
}

struct Estimates {
    theta_a: Vec<f64>,
    theta_b: Vec<f64>,
    combined: Vec<f64>,
    v_a: Vec<f64>,
    v_b: Vec<f64>,
}

/// Core of the 1D estimators: clipped exceedance probabilities in, both
/// one-sided estimates, variances, and the combined estimate out.
fn estimate_from_exceedance(
    est: &ExceedanceEstimate,
    cfg: &RecoveryConfig,
) -> Result<Estimates, PipelineError> {
    let thresholds = cfg.thresholds;
    let model = cfg.model;
    let theta_a = theta_single(est.p_a(), Side::Lower, thresholds, model)?;
    let theta_b = theta_single(est.p_b(), Side::Upper, thresholds, model)?;
    let v_a = variance_hat(est.p_a(), est.n_eff(), model)?;
    let v_b = variance_hat(est.p_b(), est.n_eff(), model)?;
    let combined = if cfg.optimal_weights {
        let n = theta_a.len();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let n_eff = if est.n_eff().len() == 1 {
                est.n_eff()[0]
            } else {
                est.n_eff()[i]
            };
            if n_eff.round() > 200.0 {
                return Err(PipelineError::NeffTooLarge(n_eff));
            }
            let n_int = (n_eff.round() as usize).max(1);
            let c =
                detector::covariance_multinomial(est.p_a()[i], est.p_b()[i], n_int, model)?;
            out.push(
                theta_double_optimal(
                    &theta_a[i..=i],
                    &theta_b[i..=i],
                    &v_a[i..=i],
                    &v_b[i..=i],
                    c,
                )?[0],
            );
        }
        out
    } else {
        theta_double(&theta_a, &theta_b, &v_a, &v_b)?
    };
    Ok(Estimates {
        theta_a,
        theta_b,
        combined,
        v_a,
        v_b,
    })
}

/// Data-domain 1D recovery with a prebuilt smoother (the kernel matrix only
/// depends on the time grid and bandwidth, so replicate loops reuse it).
pub fn recover_1d_data_with(
    smoother: &NwSmoother,
    signal: &Signal1D,
    cfg: &RecoveryConfig,
) -> Result<RecoveryResult<Signal1D>, PipelineError> {
    warn_if_not_subthreshold(signal.values(), cfg.thresholds);
    let n = signal.len();
    let noise = cfg.model.sample(n, cfg.seed)?;
    let x: Vec<f64> = signal
        .values()
        .iter()
        .zip(&noise)
        .map(|(t, e)| t + e)
        .collect();
    let series = encode(&x, cfg.thresholds)?;
    let mut est = smoother.estimate(&series)?;
    if cfg.nw_global_n {
        est = est.with_global_n(n);
    }
    let est = est.clipped();
    let parts = estimate_from_exceedance(&est, cfg)?;
    Ok(RecoveryResult {
        theta_hat: signal.with_values(parts.combined)?,
        theta_a_hat: signal.with_values(parts.theta_a)?,
        theta_b_hat: signal.with_values(parts.theta_b)?,
        v_a: parts.v_a,
        v_b: parts.v_b,
        exceedance: est,
        config: *cfg,
    })
}

/// Data-domain 1D recovery: one noise draw per time point, tri-state
/// encoding, NW exceedance smoothing, and the weighted double estimate.
pub fn recover_1d_data(
    signal: &Signal1D,
    cfg: &RecoveryConfig,
) -> Result<RecoveryResult<Signal1D>, PipelineError> {
    let w = cfg.bandwidth.ok_or(PipelineError::MissingBandwidth)?;
    let smoother = NwSmoother::new(signal.times(), w)?;
    recover_1d_data_with(&smoother, signal, cfg)
}

/// Precomputed, replicate-invariant pieces of 1D multiscale recovery:
/// the transformed truth and the coefficient-index smoother.
pub struct MultiscalePlan {
    coeffs: WaveletCoeffs,
    smoother: NwSmoother,
    /// Number of leading coefficients that receive noise and recovery.
    active: usize,
}

impl MultiscalePlan {
    pub fn new(signal: &Signal1D, cfg: &RecoveryConfig) -> Result<Self, PipelineError> {
        let spec = cfg.wavelet.ok_or(PipelineError::MissingWavelet)?;
        let w = cfg.bandwidth.ok_or(PipelineError::MissingBandwidth)?;
        let filter = WaveletFilter::new(spec.filter);
        let coeffs = dwt_1d(signal.values(), &filter, spec.levels)?;
        let n = coeffs.n();
        let active = match cfg.coeff_noise {
            CoeffNoise::All => n,
            CoeffNoise::SmoothOnly => coeffs.approx().len(),
        };
        // coefficient index mapped onto [0, 1], like a time grid
        let times: Vec<f64> = (0..active)
            .map(|i| i as f64 / (active - 1).max(1) as f64)
            .collect();
        let smoother = NwSmoother::new(&times, w)?;
        Ok(Self {
            coeffs,
            smoother,
            active,
        })
    }

    pub fn coeffs(&self) -> &WaveletCoeffs {
        &self.coeffs
    }
}

/// Multiscale 1D recovery with a prebuilt [`MultiscalePlan`].
pub fn recover_1d_multiscale_with(
    plan: &MultiscalePlan,
    signal: &Signal1D,
    cfg: &RecoveryConfig,
) -> Result<RecoveryResult<Signal1D>, PipelineError> {
    let d = plan.coeffs.data();
    let m = plan.active;
    let noise = cfg.model.sample(m, cfg.seed)?;
    let d_e: Vec<f64> = d[..m].iter().zip(&noise).map(|(c, e)| c + e).collect();
    let series = encode(&d_e, cfg.thresholds)?;
    let mut est = plan.smoother.estimate(&series)?;
    if cfg.nw_global_n {
        est = est.with_global_n(m);
    }
    let est = est.clipped();
    let parts = estimate_from_exceedance(&est, cfg)?;

    // re-assemble full coefficient vectors (pass-through for any inactive tail)
    let assemble = |head: Vec<f64>| -> Vec<f64> {
        let mut full = d.to_vec();
        full[..m].copy_from_slice(&head);
        full
    };
    let back =
        |data: Vec<f64>| -> Vec<f64> { idwt_1d(&WaveletCoeffs::from_data(&plan.coeffs, data)) };
    let theta_hat = back(assemble(parts.combined));
    let theta_a_hat = back(assemble(parts.theta_a));
    let theta_b_hat = back(assemble(parts.theta_b));
    Ok(RecoveryResult {
        theta_hat: signal.with_values(theta_hat)?,
        theta_a_hat: signal.with_values(theta_a_hat)?,
        theta_b_hat: signal.with_values(theta_b_hat)?,
        v_a: parts.v_a,
        v_b: parts.v_b,
        exceedance: est,
        config: *cfg,
    })
}

/// Multiscale 1D recovery: transform, contaminate the coefficients, estimate
/// them from exceedances, invert the transform.
pub fn recover_1d_multiscale(
    signal: &Signal1D,
    cfg: &RecoveryConfig,
) -> Result<RecoveryResult<Signal1D>, PipelineError> {
    let plan = MultiscalePlan::new(signal, cfg)?;
    recover_1d_multiscale_with(&plan, signal, cfg)
}

/// Per-point parametric recovery shared by the 2D paths.
///
/// For each value, `replicates_per_point` draws from the substream
/// `derive_stream(seed, index)` are thresholded and counted (the
/// maximum-likelihood exceedance frequencies), then the plug-in estimators
/// and variance weights are applied with `n_eff = replicates_per_point`.
/// Per-point substreams make the result independent of pixel scheduling.
fn recover_pointwise(
    truth: &[f64],
    cfg: &RecoveryConfig,
) -> Result<(Estimates, ExceedanceEstimate), PipelineError> {
    let r = cfg.replicates_per_point;
    if r < 2 {
        return Err(PipelineError::TooFewReplicates(r));
    }
    let model = cfg.model;
    let thresholds = cfg.thresholds;
    let normal = Normal::new(0.0, model.sigma()).expect("validated sigma");
    let rf = r as f64;

    // memoized exact covariance per (count_a, count_b); counts are discrete
    let cov_cache: Mutex<HashMap<(u32, u32), f64>> = Mutex::new(HashMap::new());
    let covariance = |na: u32, nb: u32| -> Result<f64, PipelineError> {
        if let Some(c) = cov_cache.lock().unwrap().get(&(na, nb)) {
            return Ok(*c);
        }
        if r > 200 {
            return Err(PipelineError::NeffTooLarge(rf));
        }
        let c = detector::covariance_multinomial(na as f64 / rf, nb as f64 / rf, r, model)?;
        cov_cache.lock().unwrap().insert((na, nb), c);
        Ok(c)
    };

    let per_point = |(i, &theta): (usize, &f64)| -> Result<[f64; 7], PipelineError> {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_stream(cfg.seed, i as u64));
        let mut below = 0u32;
        let mut above = 0u32;
        for _ in 0..r {
            let x = theta + normal.sample(&mut rng);
            if x > thresholds.upper() {
                above += 1;
            } else if x < thresholds.lower() {
                below += 1;
            }
        }
        let p_a = detector::clip_probability(below as f64 / rf, rf);
        let p_b = detector::clip_probability(above as f64 / rf, rf);
        let ta = theta_single(&[p_a], Side::Lower, thresholds, model)?[0];
        let tb = theta_single(&[p_b], Side::Upper, thresholds, model)?[0];
        let va = variance_hat(&[p_a], &[rf], model)?[0];
        let vb = variance_hat(&[p_b], &[rf], model)?[0];
        let combined = if cfg.optimal_weights {
            let c = covariance(below, above)?;
            theta_double_optimal(&[ta], &[tb], &[va], &[vb], c)?[0]
        } else {
            theta_double(&[ta], &[tb], &[va], &[vb])?[0]
        };
        Ok([ta, tb, combined, va, vb, p_a, p_b])
    };

    let rows: Vec<[f64; 7]> = truth
        .par_iter()
        .enumerate()
        .map(per_point)
        .collect::<Result<_, _>>()?;

    let col = |k: usize| -> Vec<f64> { rows.iter().map(|row| row[k]).collect() };
    let est = ExceedanceEstimate::new(col(5), col(6), vec![rf], None)?;
    Ok((
        Estimates {
            theta_a: col(0),
            theta_b: col(1),
            combined: col(2),
            v_a: col(3),
            v_b: col(4),
        },
        est,
    ))
}

/// Data-domain 2D recovery: per-pixel repeated draws and the parametric
/// (constant-signal) estimators, pixel by pixel.
pub fn recover_2d_data(
    image: &Signal2D,
    cfg: &RecoveryConfig,
) -> Result<RecoveryResult<Signal2D>, PipelineError> {
    warn_if_not_subthreshold(image.values(), cfg.thresholds);
    let (parts, est) = recover_pointwise(image.values(), cfg)?;
    Ok(RecoveryResult {
        theta_hat: image.with_values(parts.combined)?,
        theta_a_hat: image.with_values(parts.theta_a)?,
        theta_b_hat: image.with_values(parts.theta_b)?,
        v_a: parts.v_a,
        v_b: parts.v_b,
        exceedance: est,
        config: *cfg,
    })
}

/// Multiscale 2D recovery: separable transform, per-coefficient parametric
/// recovery, inverse transform.
pub fn recover_2d_multiscale(
    image: &Signal2D,
    cfg: &RecoveryConfig,
) -> Result<RecoveryResult<Signal2D>, PipelineError> {
    let spec = cfg.wavelet.ok_or(PipelineError::MissingWavelet)?;
    let filter = WaveletFilter::new(spec.filter);
    let coeffs = dwt_2d(image, &filter, spec.levels)?;
    let (parts, est) = recover_pointwise(coeffs.data(), cfg)?;
    let back = |data: Vec<f64>| -> Signal2D { idwt_2d(&WaveletCoeffs2D::from_data(&coeffs, data)) };
    Ok(RecoveryResult {
        theta_hat: back(parts.combined),
        theta_a_hat: back(parts.theta_a),
        theta_b_hat: back(parts.theta_b),
        v_a: parts.v_a,
        v_b: parts.v_b,
        exceedance: est,
        config: *cfg,
    })
}
