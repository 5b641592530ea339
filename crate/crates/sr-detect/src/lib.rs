//! Weak-signal recovery from threshold-exceedance data via stochastic resonance.
//!
//! A detector that only reports whether a noisy observation fell below a lower
//! threshold `a`, above an upper threshold `b`, or in between, still carries
//! enough information to reconstruct a sub-threshold signal — provided the
//! right amount of noise is injected first. This crate implements that
//! recovery pipeline end to end:
//!
//! - [`noise`]: the noise-distribution abstraction (cdf/pdf/quantile/score,
//!   seeded sampling); Gaussian is the shipped family.
//! - [`signals`]: 1D/2D test-signal generators, PGM/CSV image loading,
//!   amplitude rescaling.
//! - [`detector`]: tri-state threshold encoding, exceedance-probability
//!   estimation (global and Nadaraya-Watson), the single- and
//!   double-threshold estimators with variance weights, and the
//!   covariance-optimal combination.
//! - [`wavelet`]: orthogonal DWT/IDWT (Haar, Daubechies-4, Symmlet-8),
//!   1D and separable 2D, periodic boundaries.
//! - [`pipeline`]: end-to-end recovery in the data domain and in the
//!   wavelet (multiscale) domain.
//! - [`fisher`]: Fisher-information retention of single- and
//!   double-threshold detectors, and grid surfaces with ridge traces.
//! - [`harness`]: Monte-Carlo AMSE evaluation, (sigma, bandwidth) grid
//!   search, decomposition-level sweeps, deterministic seeding, reports.
//! - [`cli`]: the `sr-detect` command-line front end.
//!
//! ## Quick start
//!
//! ```
//! use sr_detect::noise::NoiseModel;
//! use sr_detect::detector::{encode, exceedance_mle, theta_single, Side, Thresholds};
//!
//! // A constant signal theta = 0.5 is invisible between thresholds (-2, 2)
//! // until noise pushes some observations across.
//! let model = NoiseModel::gaussian(2.0).unwrap();
//! let theta = 0.5;
//! let x: Vec<f64> = model
//!     .sample(10_000, 7)
//!     .unwrap()
//!     .into_iter()
//!     .map(|e| theta + e)
//!     .collect();
//!
//! let thresholds = Thresholds::new(-2.0, 2.0).unwrap();
//! let series = encode(&x, thresholds).unwrap();
//! let est = exceedance_mle(&series).unwrap().clipped();
//! let theta_b = theta_single(est.p_b(), Side::Upper, thresholds, model).unwrap();
//! assert!((theta_b[0] - theta).abs() < 0.1);
//! ```
//!
//! The `book/` directory of the repository contains a longer guide; its code
//! snippets are compiled and run as doc-tests of this crate.

pub mod cli;
pub mod detector;
pub mod fisher;
pub mod harness;
pub mod noise;
pub mod pipeline;
pub mod seed;
pub mod signals;
pub mod wavelet;

pub use detector::{Side, Thresholds, TriStateSeries};
pub use pipeline::{Domain, RecoveryConfig, RecoveryResult};
pub use noise::NoiseModel;
pub use signals::{Signal1D, Signal2D, SignalKind};
pub use wavelet::{FilterKind, WaveletCoeffs, WaveletCoeffs2D, WaveletFilter};
