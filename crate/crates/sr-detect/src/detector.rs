//! Threshold encoding and the single-/double-threshold signal estimators.
//!
//! Observations are reduced to a tri-state code: `+1` above the upper
//! threshold `b`, `-1` below the lower threshold `a`, `0` in between. From
//! the exceedance probabilities `p_a = P(X < a)` and `p_b = P(X > b)` the
//! signal is identified through the known noise law:
//!
//! ```text
//! theta_a = a - F^{-1}(p_a)        theta_b = b - F^{-1}(1 - p_b)
//! ```
//!
//! The double-threshold estimator combines the two with inverse-variance
//! style weights (each side weighted by the *other* side's variance), and an
//! optional covariance-aware variant uses the exact multinomial covariance
//! between the two plug-in estimators.

use crate::noise::{NoiseError, NoiseModel};
use thiserror::Error;

/// `ln k!` for `k = 0..=n`; counts here stay <= 200 so a table beats Stirling.
fn ln_factorials(n: usize) -> Vec<f64> {
    let mut table = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    table.push(0.0);
    for k in 1..=n {
        acc += (k as f64).ln();
        table.push(acc);
    }
    table
}

#[derive(Debug, Error)]
pub enum DetectorError {
    #[error("thresholds must satisfy a < b, got a = {a}, b = {b}")]
    BadThresholds { a: f64, b: f64 },
    #[error("non-finite observation at index {0}")]
    NonFinite(usize),
    #[error("empty series")]
    EmptySeries,
    #[error("times length {times} does not match series length {series}")]
    TimesMismatch { times: usize, series: usize },
    #[error("bandwidth must be positive and finite, got {0}")]
    BadBandwidth(f64),
    #[error("zero kernel mass at evaluation point {0}")]
    ZeroKernelMass(usize),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("n_eff must have length 1 or the length of p_hat, got {0}")]
    BadNeff(usize),
    #[error("variances must be positive (v_a + v_b = {0})")]
    DegenerateVariance(f64),
    #[error("degenerate covariance: v_a + v_b - 2C = {0} is not positive")]
    DegenerateCovariance(f64),
    #[error("exact covariance restricted to small n (n = {0} > 200)")]
    CovarianceTooLarge(usize),
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("threshold too far for reliable variance (|{arg}| > 8 sigma)")]
    ThresholdTooFar { arg: f64 },
    #[error(transparent)]
    Noise(#[from] NoiseError),
}

/// The fixed detector thresholds, `lower < upper`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Thresholds {
    lower: f64,
    upper: f64,
}

impl Thresholds {
    pub fn new(lower: f64, upper: f64) -> Result<Self, DetectorError> {
        if !(lower.is_finite() && upper.is_finite() && lower < upper) {
            return Err(DetectorError::BadThresholds { a: lower, b: upper });
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }
}

/// Which threshold an estimator works from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// Sub-threshold detector: crossings below `a`.
    Lower,
    /// Sup-threshold detector: crossings above `b`.
    Upper,
}

/// The observed tri-state sequence, `y_i` in `{-1, 0, +1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriStateSeries {
    y: Vec<i8>,
    thresholds: Thresholds,
}

impl TriStateSeries {
    pub fn y(&self) -> &[i8] {
        &self.y
    }

    pub fn thresholds(&self) -> Thresholds {
        self.thresholds
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// `(#(-1), #0, #(+1))`.
    pub fn counts(&self) -> (usize, usize, usize) {
        let mut counts = (0usize, 0usize, 0usize);
        for &v in &self.y {
            match v {
                -1 => counts.0 += 1,
                0 => counts.1 += 1,
                _ => counts.2 += 1,
            }
        }
        counts
    }
}

/// Tri-state encoding with strict inequalities: values equal to a threshold
/// count as in-band.
pub fn encode(x: &[f64], thresholds: Thresholds) -> Result<TriStateSeries, DetectorError> {
    let mut y = Vec::with_capacity(x.len());
    for (i, &v) in x.iter().enumerate() {
        if !v.is_finite() {
            return Err(DetectorError::NonFinite(i));
        }
        y.push(if v > thresholds.upper {
            1
        } else if v < thresholds.lower {
            -1
        } else {
            0
        });
    }
    Ok(TriStateSeries { y, thresholds })
}

/// Exceedance-probability estimates, either global (length-1 vectors) or
/// local Nadaraya-Watson ones (length-n vectors).
///
/// `n_eff` carries the sample size that calibrates clipping and variances:
/// the observation count in global mode, a per-point effective kernel sample
/// size in NW mode (broadcast like the probability vectors).
#[derive(Debug, Clone, PartialEq)]
pub struct ExceedanceEstimate {
    p_a: Vec<f64>,
    p_b: Vec<f64>,
    n_eff: Vec<f64>,
    bandwidth: Option<f64>,
}

impl ExceedanceEstimate {
    pub fn new(
        p_a: Vec<f64>,
        p_b: Vec<f64>,
        n_eff: Vec<f64>,
        bandwidth: Option<f64>,
    ) -> Result<Self, DetectorError> {
        if p_a.len() != p_b.len() {
            return Err(DetectorError::LengthMismatch(format!(
                "p_a has {} entries, p_b has {}",
                p_a.len(),
                p_b.len()
            )));
        }
        if n_eff.len() != 1 && n_eff.len() != p_a.len() {
            return Err(DetectorError::BadNeff(n_eff.len()));
        }
        for p in p_a.iter().chain(p_b.iter()) {
            if !(0.0..=1.0).contains(p) {
                return Err(DetectorError::BadProbability(*p));
            }
        }
        Ok(Self {
            p_a,
            p_b,
            n_eff,
            bandwidth,
        })
    }

    pub fn p_a(&self) -> &[f64] {
        &self.p_a
    }

    pub fn p_b(&self) -> &[f64] {
        &self.p_b
    }

    pub fn n_eff(&self) -> &[f64] {
        &self.n_eff
    }

    pub fn bandwidth(&self) -> Option<f64> {
        self.bandwidth
    }

    #[inline]
    fn n_eff_at(&self, i: usize) -> f64 {
        if self.n_eff.len() == 1 {
            self.n_eff[0]
        } else {
            self.n_eff[i]
        }
    }

    /// Continuity-corrected copy: every probability clamped into
    /// `[1/(2 n_eff), 1 - 1/(2 n_eff)]`, so quantiles stay finite and
    /// variances positive even when a relative frequency hits 0 or 1.
    pub fn clipped(&self) -> ExceedanceEstimate {
        let clip = |p: f64, n: f64| clip_probability(p, n);
        let p_a = self
            .p_a
            .iter()
            .enumerate()
            .map(|(i, &p)| clip(p, self.n_eff_at(i)))
            .collect();
        let p_b = self
            .p_b
            .iter()
            .enumerate()
            .map(|(i, &p)| clip(p, self.n_eff_at(i)))
            .collect();
        ExceedanceEstimate {
            p_a,
            p_b,
            n_eff: self.n_eff.clone(),
            bandwidth: self.bandwidth,
        }
    }

    /// Same estimate with `n_eff` replaced by a single global count.
    pub fn with_global_n(&self, n: usize) -> ExceedanceEstimate {
        ExceedanceEstimate {
            p_a: self.p_a.clone(),
            p_b: self.p_b.clone(),
            n_eff: vec![n as f64],
            bandwidth: self.bandwidth,
        }
    }
}

/// Clamp a relative frequency into `[1/(2n), 1 - 1/(2n)]`.
#[inline]
pub fn clip_probability(p: f64, n_eff: f64) -> f64 {
    let eps = 1.0 / (2.0 * n_eff);
    p.clamp(eps, 1.0 - eps)
}

/// Global maximum-likelihood exceedance estimate:
/// `p_a = #(-1)/n`, `p_b = #(+1)/n`.
pub fn exceedance_mle(series: &TriStateSeries) -> Result<ExceedanceEstimate, DetectorError> {
    if series.is_empty() {
        return Err(DetectorError::EmptySeries);
    }
    let n = series.len() as f64;
    let (below, _, above) = series.counts();
    ExceedanceEstimate::new(
        vec![below as f64 / n],
        vec![above as f64 / n],
        vec![n],
        None,
    )
}

/// Precomputed Nadaraya-Watson smoothing weights for a fixed time grid and
/// bandwidth.
///
/// The kernel matrix depends only on `(times, bandwidth)`, so replicate loops
/// build one smoother and reuse it. The kernel is the Gaussian density
/// (unnormalized; the 1/w factors cancel in the NW ratio), which guarantees
/// positive mass everywhere.
#[derive(Debug, Clone)]
pub struct NwSmoother {
    n: usize,
    bandwidth: f64,
    /// Row-major n x n symmetric kernel matrix K((t_i - t_j)/w).
    weights: Vec<f64>,
    /// Row sums: the NW denominators.
    denom: Vec<f64>,
    /// Effective kernel sample size per point: sum_j K_ij / max_j K_ij.
    n_eff: Vec<f64>,
}

impl NwSmoother {
    pub fn new(times: &[f64], bandwidth: f64) -> Result<Self, DetectorError> {
        if !(bandwidth.is_finite() && bandwidth > 0.0) {
            return Err(DetectorError::BadBandwidth(bandwidth));
        }
        let n = times.len();
        let mut weights = vec![0.0; n * n];
        for i in 0..n {
            // symmetric: fill the upper triangle and mirror
            weights[i * n + i] = 1.0;
            for j in i + 1..n {
                let u = (times[i] - times[j]) / bandwidth;
                let k = (-0.5 * u * u).exp();
                weights[i * n + j] = k;
                weights[j * n + i] = k;
            }
        }
        let mut denom = vec![0.0; n];
        let mut n_eff = vec![0.0; n];
        for i in 0..n {
            let row = &weights[i * n..(i + 1) * n];
            let sum: f64 = row.iter().sum();
            let max = row.iter().cloned().fold(0.0, f64::max);
            if !(sum > 0.0) {
                return Err(DetectorError::ZeroKernelMass(i));
            }
            denom[i] = sum;
            n_eff[i] = sum / max;
        }
        Ok(Self {
            n,
            bandwidth,
            weights,
            denom,
            n_eff,
        })
    }

    #[cfg(test)]
    pub(crate) fn with_uniform_weights(n: usize) -> Self {
        Self {
            n,
            bandwidth: f64::INFINITY,
            weights: vec![1.0; n * n],
            denom: vec![n as f64; n],
            n_eff: vec![n as f64; n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn n_eff(&self) -> &[f64] {
        &self.n_eff
    }

    /// Kernel-weighted exceedance estimate of the series.
    ///
    /// Summation runs over indicator indices in increasing order per output
    /// point, so the result is bitwise independent of any outer parallelism.
    pub fn estimate(&self, series: &TriStateSeries) -> Result<ExceedanceEstimate, DetectorError> {
        if series.len() != self.n {
            return Err(DetectorError::TimesMismatch {
                times: self.n,
                series: series.len(),
            });
        }
        let n = self.n;
        let mut num_a = vec![0.0; n];
        let mut num_b = vec![0.0; n];
        // accumulate whole kernel columns for the crossing indices only;
        // K is symmetric so row j doubles as column j
        for (j, &yj) in series.y().iter().enumerate() {
            if yj == 0 {
                continue;
            }
            let col = &self.weights[j * n..(j + 1) * n];
            let acc = if yj > 0 { &mut num_b } else { &mut num_a };
            for (slot, w) in acc.iter_mut().zip(col) {
                *slot += w;
            }
        }
        let p_a: Vec<f64> = num_a.iter().zip(&self.denom).map(|(s, d)| s / d).collect();
        let p_b: Vec<f64> = num_b.iter().zip(&self.denom).map(|(s, d)| s / d).collect();
        ExceedanceEstimate::new(p_a, p_b, self.n_eff.clone(), Some(self.bandwidth))
    }
}

/// Nadaraya-Watson exceedance estimate at every time point.
///
/// One-shot convenience over [`NwSmoother`]; use the smoother directly when
/// estimating many replicates on the same grid.
pub fn exceedance_nw(
    series: &TriStateSeries,
    times: &[f64],
    bandwidth: f64,
) -> Result<ExceedanceEstimate, DetectorError> {
    if times.len() != series.len() {
        return Err(DetectorError::TimesMismatch {
            times: times.len(),
            series: series.len(),
        });
    }
    NwSmoother::new(times, bandwidth)?.estimate(series)
}

/// Single-threshold plug-in estimator, elementwise over `p_hat`:
/// `theta_a = a - F^{-1}(p_a)` (Lower) or `theta_b = b - F^{-1}(1 - p_b)`
/// (Upper). Probabilities must lie strictly inside (0, 1); clip first.
pub fn theta_single(
    p_hat: &[f64],
    side: Side,
    thresholds: Thresholds,
    model: NoiseModel,
) -> Result<Vec<f64>, DetectorError> {
    p_hat
        .iter()
        .map(|&p| {
            let q = match side {
                Side::Lower => model.quantile(p)?,
                Side::Upper => model.quantile(1.0 - p)?,
            };
            let t = match side {
                Side::Lower => thresholds.lower,
                Side::Upper => thresholds.upper,
            };
            Ok(t - q)
        })
        .collect()
}

/// Delta-method variance estimate, elementwise:
/// `v = p (1 - p) / (n_eff f(F^{-1}(p))^2)`.
///
/// `n_eff` broadcasts: length 1 or the length of `p_hat`. Both sides use the
/// same formula; for symmetric densities it is invariant under `p -> 1 - p`.
pub fn variance_hat(
    p_hat: &[f64],
    n_eff: &[f64],
    model: NoiseModel,
) -> Result<Vec<f64>, DetectorError> {
    if n_eff.len() != 1 && n_eff.len() != p_hat.len() {
        return Err(DetectorError::BadNeff(n_eff.len()));
    }
    p_hat
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let n = if n_eff.len() == 1 { n_eff[0] } else { n_eff[i] };
            let q = model.quantile(p)?;
            let f = model.pdf_raw(q);
            Ok(p * (1.0 - p) / (n * f * f))
        })
        .collect()
}

/// Variance-weighted double-threshold estimator, elementwise:
///
/// ```text
/// theta = v_a/(v_a+v_b) * theta_b + v_b/(v_a+v_b) * theta_a
/// ```
///
/// Each side is weighted by the *other* side's variance, so the
/// smaller-variance estimator dominates.
pub fn theta_double(
    theta_a: &[f64],
    theta_b: &[f64],
    v_a: &[f64],
    v_b: &[f64],
) -> Result<Vec<f64>, DetectorError> {
    let n = theta_a.len();
    if theta_b.len() != n || v_a.len() != n || v_b.len() != n {
        return Err(DetectorError::LengthMismatch(
            "theta/variance vectors differ in length".into(),
        ));
    }
    (0..n)
        .map(|i| {
            let total = v_a[i] + v_b[i];
            if !(total > 0.0) {
                return Err(DetectorError::DegenerateVariance(total));
            }
            Ok((v_a[i] * theta_b[i] + v_b[i] * theta_a[i]) / total)
        })
        .collect()
}

/// Covariance-aware combination with the minimum-variance weights
///
/// ```text
/// w* = (v_b - C) / (v_a + v_b - 2C),    theta = w* theta_a + (1 - w*) theta_b
/// ```
///
/// With `C = 0` this reduces exactly to [`theta_double`].
pub fn theta_double_optimal(
    theta_a: &[f64],
    theta_b: &[f64],
    v_a: &[f64],
    v_b: &[f64],
    c: f64,
) -> Result<Vec<f64>, DetectorError> {
    let n = theta_a.len();
    if theta_b.len() != n || v_a.len() != n || v_b.len() != n {
        return Err(DetectorError::LengthMismatch(
            "theta/variance vectors differ in length".into(),
        ));
    }
    (0..n)
        .map(|i| {
            let denom = v_a[i] + v_b[i] - 2.0 * c;
            if !(denom > 0.0) {
                return Err(DetectorError::DegenerateCovariance(denom));
            }
            let w = (v_b[i] - c) / denom;
            Ok(w * theta_a[i] + (1.0 - w) * theta_b[i])
        })
        .collect()
}

/// Exact covariance of the two plug-in estimators under the multinomial law
/// of the category counts, with plug-in probabilities `p_a_hat`, `p_b_hat`:
///
/// ```text
/// C = E[F^{-1}(pa) F^{-1}(1-pb)] - E[F^{-1}(pa)] E[F^{-1}(1-pb)]
/// ```
///
/// The joint expectation is the double sum over counts `(x_a, x_b)` with
/// `x_a + x_b <= n`; the marginal expectations are binomial sums. Quantile
/// arguments are clipped into `[1/(2n), 1 - 1/(2n)]`. Multinomial weights are
/// evaluated in log space, so `n` up to the supported 200 cannot overflow.
pub fn covariance_multinomial(
    p_a_hat: f64,
    p_b_hat: f64,
    n: usize,
    model: NoiseModel,
) -> Result<f64, DetectorError> {
    if n == 0 {
        return Err(DetectorError::EmptySeries);
    }
    if n > 200 {
        return Err(DetectorError::CovarianceTooLarge(n));
    }
    for p in [p_a_hat, p_b_hat] {
        if !(0.0..=1.0).contains(&p) {
            return Err(DetectorError::BadProbability(p));
        }
    }
    let nf = n as f64;
    let pa = clip_probability(p_a_hat, nf);
    let pb = clip_probability(p_b_hat, nf).min(1.0 - pa);
    let p0 = 1.0 - pa - pb;
    let (ln_pa, ln_pb) = (pa.ln(), pb.ln());
    let ln_p0 = if p0 > 0.0 { p0.ln() } else { f64::NEG_INFINITY };
    let ln_fact = ln_factorials(n);
    let ln_n_fact = ln_fact[n];

    // quantiles of the clipped count fractions, shared by both sums
    let q_a: Vec<f64> = (0..=n)
        .map(|x| model.quantile_raw(clip_probability(x as f64 / nf, nf)))
        .collect();
    // F^{-1}(1 - x_b/n) = F^{-1}((n - x_b)/n)
    let q_b: Vec<f64> = (0..=n)
        .map(|x| model.quantile_raw(clip_probability((n - x) as f64 / nf, nf)))
        .collect();

    let mut joint = 0.0;
    for xa in 0..=n {
        for xb in 0..=(n - xa) {
            let x0 = n - xa - xb;
            if x0 > 0 && p0 == 0.0 {
                continue;
            }
            let mut ln_w = ln_n_fact - ln_fact[xa] - ln_fact[xb] - ln_fact[x0]
                + xa as f64 * ln_pa
                + xb as f64 * ln_pb;
            if x0 > 0 {
                ln_w += x0 as f64 * ln_p0;
            }
            joint += q_a[xa] * q_b[xb] * ln_w.exp();
        }
    }

    let binom_mean = |q: &[f64], p: f64| -> f64 {
        let ln_1mp = (1.0 - p).ln();
        (0..=n)
            .map(|x| {
                let ln_w = ln_n_fact - ln_fact[x] - ln_fact[n - x]
                    + x as f64 * p.ln()
                    + (n - x) as f64 * ln_1mp;
                q[x] * ln_w.exp()
            })
            .sum()
    };
    let mean_a = binom_mean(&q_a, pa);
    let mean_b = binom_mean(&q_b, pb);
    Ok(joint - mean_a * mean_b)
}

/// Delta-method asymptotic variance of a single-threshold estimator at the
/// true signal value `theta`:
/// `F(u)[1 - F(u)] / (n f(u)^2)` with `u = threshold - theta`.
pub fn asymptotic_variance(
    theta: f64,
    threshold: f64,
    side: Side,
    model: NoiseModel,
    n: usize,
) -> Result<f64, DetectorError> {
    let _ = side; // both sides share the formula; kept for call-site clarity
    if n == 0 {
        return Err(DetectorError::EmptySeries);
    }
    let u = threshold - theta;
    if u.abs() > 8.0 * model.sigma() {
        return Err(DetectorError::ThresholdTooFar { arg: u });
    }
    let cdf = model.cdf(u)?;
    let f = model.pdf(u)?;
    Ok(cdf * (1.0 - cdf) / (n as f64 * f * f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn std_model() -> NoiseModel {
        NoiseModel::gaussian(1.0).unwrap()
    }

    fn thr(a: f64, b: f64) -> Thresholds {
        Thresholds::new(a, b).unwrap()
    }

    #[test]
    fn encode_examples() {
        let t = thr(-2.0, 2.0);
        let s = encode(&[0.5, 2.5, -2.5], t).unwrap();
        assert_eq!(s.y(), &[0, 1, -1]);
        // boundary is strict
        let s = encode(&[2.0, -2.0], t).unwrap();
        assert_eq!(s.y(), &[0, 0]);
        let s = encode(&[3.0, 3.0, 3.0, -3.0], t).unwrap();
        assert_eq!(s.y(), &[1, 1, 1, -1]);
        assert!(matches!(
            encode(&[f64::NAN], t),
            Err(DetectorError::NonFinite(0))
        ));
    }

    #[test]
    fn mle_examples() {
        let t = thr(-2.0, 2.0);
        let mk = |y: Vec<i8>| TriStateSeries { y, thresholds: t };
        let est = exceedance_mle(&mk(vec![1, 1, 0, 0, 0, 0, 0, 0, -1, 0])).unwrap();
        assert_eq!(est.p_b(), &[0.2]);
        assert_eq!(est.p_a(), &[0.1]);
        assert_eq!(est.n_eff(), &[10.0]);

        let zeros = exceedance_mle(&mk(vec![0; 5])).unwrap();
        assert_eq!((zeros.p_a()[0], zeros.p_b()[0]), (0.0, 0.0));

        let ones = exceedance_mle(&mk(vec![1; 4])).unwrap();
        assert_eq!((ones.p_a()[0], ones.p_b()[0]), (0.0, 1.0));

        assert!(matches!(
            exceedance_mle(&mk(vec![])),
            Err(DetectorError::EmptySeries)
        ));
    }

    #[test]
    fn nw_uniform_weight_limit_matches_global_fraction() {
        let t = thr(-1.0, 1.0);
        let x = [2.0, -2.0, 0.0, 0.0, 2.0, 0.0, 0.0, 0.0];
        let series = encode(&x, t).unwrap();
        let times: Vec<f64> = (0..8).map(|i| i as f64 / 7.0).collect();
        let est = exceedance_nw(&series, &times, 1e6).unwrap();
        for i in 0..8 {
            assert_abs_diff_eq!(est.p_b()[i], 2.0 / 8.0, epsilon = 1e-6);
            assert_abs_diff_eq!(est.p_a()[i], 1.0 / 8.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn nw_with_exactly_uniform_weights_reproduces_mle() {
        let t = thr(-1.0, 1.0);
        let x = [2.0, -2.0, 0.0, 0.5, 2.0, 0.0, -3.0, 0.0];
        let series = encode(&x, t).unwrap();
        let smoother = NwSmoother::with_uniform_weights(8);
        let nw = smoother.estimate(&series).unwrap();
        let mle = exceedance_mle(&series).unwrap();
        for i in 0..8 {
            assert_eq!(nw.p_a()[i], mle.p_a()[0]);
            assert_eq!(nw.p_b()[i], mle.p_b()[0]);
        }
    }

    #[test]
    fn nw_all_positive_series() {
        let t = thr(-1.0, 1.0);
        let series = encode(&[5.0, 5.0, 5.0], t).unwrap();
        let est = exceedance_nw(&series, &[0.0, 0.5, 1.0], 0.25).unwrap();
        assert_eq!(est.p_b(), &[1.0, 1.0, 1.0]);
        assert_eq!(est.p_a(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn nw_three_point_direct_kernel_sum_oracle() {
        let t = thr(-1.0, 1.0);
        let series = encode(&[2.0, 0.0, 0.0], t).unwrap();
        let times = [0.0, 0.5, 1.0];
        let w = 0.1;
        let est = exceedance_nw(&series, &times, w).unwrap();
        // direct three-term sums at t_0
        let k = |u: f64| (-0.5 * u * u).exp();
        let (k0, k1, k2) = (k(0.0), k(0.5 / w), k(1.0 / w));
        let expected = k0 / (k0 + k1 + k2);
        assert_abs_diff_eq!(est.p_b()[0], expected, epsilon = 1e-12);
        assert_abs_diff_eq!(est.p_a()[0], 0.0, epsilon = 1e-12);
        // n_eff at the middle point: all three kernels over the max
        let mid = (k(0.5 / w) + k(0.0) + k(0.5 / w)) / k(0.0);
        assert_abs_diff_eq!(est.n_eff()[1], mid, epsilon = 1e-12);
    }

    #[test]
    fn theta_single_examples() {
        let t = thr(-2.0, 2.0);
        let up = theta_single(&[0.5], Side::Upper, t, std_model()).unwrap();
        assert_abs_diff_eq!(up[0], 2.0, epsilon = 1e-12);
        let lo = theta_single(&[0.5], Side::Lower, t, std_model()).unwrap();
        assert_abs_diff_eq!(lo[0], -2.0, epsilon = 1e-12);
        // quantile oracle: 2 - 2 Phi^{-1}(0.841345) ~ 0
        let wide = NoiseModel::gaussian(2.0).unwrap();
        let v = theta_single(&[0.158655], Side::Upper, t, wide).unwrap();
        assert_abs_diff_eq!(v[0], 0.0, epsilon = 1e-5);
    }

    #[test]
    fn variance_examples() {
        let m = std_model();
        let v = variance_hat(&[0.5], &[100.0], m).unwrap();
        assert_abs_diff_eq!(v[0], std::f64::consts::PI / 200.0, epsilon = 1e-12);
        let v400 = variance_hat(&[0.5], &[400.0], m).unwrap();
        assert_abs_diff_eq!(v400[0], v[0] / 4.0, epsilon = 1e-15);
        // symmetry of f o F^{-1} for the Gaussian
        for p in [0.05, 0.2, 0.35, 0.45] {
            let a = variance_hat(&[p], &[50.0], m).unwrap()[0];
            let b = variance_hat(&[1.0 - p], &[50.0], m).unwrap()[0];
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn theta_double_examples() {
        let combined = theta_double(&[1.0], &[3.0], &[2.0], &[2.0]).unwrap();
        assert_abs_diff_eq!(combined[0], 2.0, epsilon = 1e-15);
        let combined = theta_double(&[0.0], &[4.0], &[1.0], &[3.0]).unwrap();
        assert_abs_diff_eq!(combined[0], 1.0, epsilon = 1e-15);
        let same = theta_double(&[5.0], &[5.0], &[0.3], &[7.0]).unwrap();
        assert_abs_diff_eq!(same[0], 5.0, epsilon = 1e-12);
        assert!(theta_double(&[0.0], &[1.0], &[0.0], &[0.0]).is_err());
    }

    #[test]
    fn optimal_weights_examples() {
        // C = 0 reduces exactly to the plain double estimator
        let (ta, tb, va, vb) = ([0.3, -1.0], [1.7, 4.0], [0.5, 1.0], [1.5, 3.0]);
        let plain = theta_double(&ta, &tb, &va, &vb).unwrap();
        let opt = theta_double_optimal(&ta, &tb, &va, &vb, 0.0).unwrap();
        assert_eq!(plain, opt);

        // equal variances: w* = 1/2 for any admissible C
        let eq = theta_double_optimal(&[0.0], &[4.0], &[1.0], &[1.0], 0.3).unwrap();
        assert_abs_diff_eq!(eq[0], 2.0, epsilon = 1e-12);

        // v_a = 1, v_b = 2, C = 0.5: w* = 1.5/2 = 0.75
        let v = theta_double_optimal(&[1.0], &[0.0], &[1.0], &[2.0], 0.5).unwrap();
        assert_abs_diff_eq!(v[0], 0.75, epsilon = 1e-12);

        assert!(matches!(
            theta_double_optimal(&[0.0], &[1.0], &[1.0], &[1.0], 1.0),
            Err(DetectorError::DegenerateCovariance(_))
        ));
    }

    #[test]
    fn covariance_matches_high_precision_reference() {
        // frozen from an exact 40-digit evaluation of the same double sum
        let m = std_model();
        let c10 = covariance_multinomial(0.3, 0.3, 10, m).unwrap();
        assert_abs_diff_eq!(c10, 0.085_634_115_133_647_4, epsilon = 1e-9);
        let c5 = covariance_multinomial(0.2, 0.2, 5, m).unwrap();
        assert_abs_diff_eq!(c5, 0.052_956_610_339_311_5, epsilon = 1e-9);
        assert!(matches!(
            covariance_multinomial(0.3, 0.3, 201, m),
            Err(DetectorError::CovarianceTooLarge(201))
        ));
    }

    #[test]
    fn multinomial_weights_sum_to_one() {
        let n = 17usize;
        let (pa, pb) = (0.25, 0.4);
        let p0: f64 = 1.0 - pa - pb;
        let ln_fact = ln_factorials(n);
        let mut total = 0.0;
        for xa in 0..=n {
            for xb in 0..=(n - xa) {
                let x0 = n - xa - xb;
                let ln_w = ln_fact[n] - ln_fact[xa] - ln_fact[xb] - ln_fact[x0]
                    + xa as f64 * pa.ln()
                    + xb as f64 * pb.ln()
                    + x0 as f64 * p0.ln();
                total += ln_w.exp();
            }
        }
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn asymptotic_variance_examples() {
        let m = std_model();
        let v = asymptotic_variance(0.0, 0.0, Side::Upper, m, 100).unwrap();
        assert_abs_diff_eq!(v, std::f64::consts::PI / 200.0, epsilon = 1e-12);
        // symmetric thresholds agree across sides at theta = 0
        let lo = asymptotic_variance(0.0, -1.3, Side::Lower, m, 50).unwrap();
        let up = asymptotic_variance(0.0, 1.3, Side::Upper, m, 50).unwrap();
        assert_abs_diff_eq!(lo, up, epsilon = 1e-14);
        assert!(matches!(
            asymptotic_variance(0.0, 9.0, Side::Upper, m, 10),
            Err(DetectorError::ThresholdTooFar { .. })
        ));
    }

    #[test]
    fn combined_estimator_is_consistent_in_n() {
        // constant theta = 0.5, thresholds (-2, 2), sigma = 2: the absolute
        // error of the double estimator shrinks as n grows (median over seeds)
        let m = NoiseModel::gaussian(2.0).unwrap();
        let t = thr(-2.0, 2.0);
        let theta = 0.5;
        let mut medians = Vec::new();
        for n in [100usize, 1_000, 10_000, 100_000] {
            let mut errs: Vec<f64> = (0..50u64)
                .map(|s| {
                    let x: Vec<f64> = m
                        .sample(n, 1000 + s)
                        .unwrap()
                        .into_iter()
                        .map(|e| theta + e)
                        .collect();
                    let est = exceedance_mle(&encode(&x, t).unwrap()).unwrap().clipped();
                    let ta = theta_single(est.p_a(), Side::Lower, t, m).unwrap();
                    let tb = theta_single(est.p_b(), Side::Upper, t, m).unwrap();
                    let va = variance_hat(est.p_a(), est.n_eff(), m).unwrap();
                    let vb = variance_hat(est.p_b(), est.n_eff(), m).unwrap();
                    (theta_double(&ta, &tb, &va, &vb).unwrap()[0] - theta).abs()
                })
                .collect();
            errs.sort_by(f64::total_cmp);
            medians.push((errs[24] + errs[25]) / 2.0);
        }
        for w in medians.windows(2) {
            assert!(w[1] < w[0], "medians not decreasing: {medians:?}");
        }
    }

    #[test]
    fn clipping_bounds() {
        assert_eq!(clip_probability(0.0, 10.0), 0.05);
        assert_eq!(clip_probability(1.0, 10.0), 0.95);
        assert_eq!(clip_probability(0.5, 10.0), 0.5);
        let est = ExceedanceEstimate::new(vec![0.0], vec![1.0], vec![10.0], None)
            .unwrap()
            .clipped();
        assert_eq!((est.p_a()[0], est.p_b()[0]), (0.05, 0.95));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn encode_is_shift_invariant(
            xs in proptest::collection::vec(-10.0f64..10.0, 1..64),
            shift in -5.0f64..5.0,
        ) {
            let t = thr(-2.0, 2.0);
            let shifted_thr = Thresholds::new(-2.0 + shift, 2.0 + shift).unwrap();
            let shifted: Vec<f64> = xs.iter().map(|x| x + shift).collect();
            // strict float equality of the comparison is not guaranteed under
            // shifting, so compare against the mathematically shifted encode
            let base: Vec<i8> = xs
                .iter()
                .map(|&x| if x > 2.0 { 1 } else if x < -2.0 { -1 } else { 0 })
                .collect();
            prop_assume!(xs.iter().all(|&x| (x - 2.0).abs() > 1e-9 && (x + 2.0).abs() > 1e-9));
            let plain = encode(&xs, t).unwrap();
            let moved = encode(&shifted, shifted_thr).unwrap();
            prop_assert_eq!(plain.y(), &base[..]);
            prop_assert_eq!(moved.y(), &base[..]);
        }

        #[test]
        fn theta_b_increases_with_p_b(p1 in 0.01f64..0.98, dp in 1e-4f64..0.01) {
            let t = thr(-2.0, 2.0);
            let p2 = (p1 + dp).min(0.99);
            let v = theta_single(&[p1, p2], Side::Upper, t, std_model()).unwrap();
            prop_assert!(v[1] > v[0]);
        }

        #[test]
        fn double_is_convex_combination(
            ta in -5.0f64..5.0,
            tb in -5.0f64..5.0,
            va in 1e-6f64..10.0,
            vb in 1e-6f64..10.0,
        ) {
            let c = theta_double(&[ta], &[tb], &[va], &[vb]).unwrap()[0];
            let (lo, hi) = (ta.min(tb), ta.max(tb));
            prop_assert!(c >= lo - 1e-12 && c <= hi + 1e-12);
        }
    }

    #[test]
    fn covariance_agrees_with_monte_carlo_oracle_small() {
        // lighter version of the acceptance check, one configuration
        let m = std_model();
        let (n, pa, pb) = (10usize, 0.3, 0.3);
        let exact = covariance_multinomial(pa, pb, n, m).unwrap();

        let draws = 200_000usize;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let nf = n as f64;
        let mut us = Vec::with_capacity(draws);
        let mut vs = Vec::with_capacity(draws);
        for _ in 0..draws {
            let mut xa = 0usize;
            let mut xb = 0usize;
            for _ in 0..n {
                let r: f64 = rng.random();
                if r < pa {
                    xa += 1;
                } else if r < pa + pb {
                    xb += 1;
                }
            }
            us.push(m.quantile_raw(clip_probability(xa as f64 / nf, nf)));
            vs.push(m.quantile_raw(clip_probability((n - xb) as f64 / nf, nf)));
        }
        let mu = us.iter().sum::<f64>() / draws as f64;
        let mv = vs.iter().sum::<f64>() / draws as f64;
        let cov = us
            .iter()
            .zip(&vs)
            .map(|(u, v)| (u - mu) * (v - mv))
            .sum::<f64>()
            / draws as f64;
        // standard error of the sample covariance from the same draws
        let var_of_prod = us
            .iter()
            .zip(&vs)
            .map(|(u, v)| ((u - mu) * (v - mv) - cov).powi(2))
            .sum::<f64>()
            / draws as f64;
        let se = (var_of_prod / draws as f64).sqrt();
        assert!(
            (cov - exact).abs() <= 3.0 * se,
            "exact {exact} vs MC {cov} (3 se = {})",
            3.0 * se
        );
    }
}
