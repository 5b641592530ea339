//! Fisher-information retention of threshold detectors under Gaussian noise.
//!
//! Direct observation of `X = theta + eps` carries information `I = 1/sigma^2`
//! about `theta`. Thresholding keeps only part of it:
//!
//! - one threshold at standardized distance `u` retains the fraction
//!   `R(u) = phi(u)^2 / (Phi(u)[1 - Phi(u)])`, at most `2/pi` (at `u = 0`);
//! - the tri-state double-threshold detector retains
//!   `sigma^2 Iter(theta, a, b, sigma)` with the three-term multinomial form
//!   implemented by [`fi_double`].
//!
//! Both are non-monotone in the noise level: information rises to a maximum
//! at the resonance point and then drowns. [`fi_surface`] evaluates the
//! double-threshold information over parameter grids and traces the per-row
//! maxima (the ridge curves of the usual surface plots).

use crate::noise::std_normal_cdf;
use serde::Serialize;
use std::io::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FisherError {
    #[error("thresholds must satisfy a < b, got a = {a}, b = {b}")]
    BadThresholds { a: f64, b: f64 },
    #[error("sigma must be positive and finite, got {0}")]
    BadSigma(f64),
    #[error("degenerate band: Phi(u_b) <= Phi(u_a) beyond rounding (gap {0})")]
    DegenerateBand(f64),
    #[error("grid must have at least 2 points per axis and finite bounds")]
    BadGrid,
    #[error("csv write failed: {0}")]
    Io(#[from] std::io::Error),
}

const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

#[inline]
fn std_cdf(x: f64) -> f64 {
    std_normal_cdf(x)
}

#[inline]
fn std_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// Information retention of a single threshold at standardized distance `u`:
/// `R(u) = phi(u)^2 / (Phi(u)[1 - Phi(u)])`.
///
/// Numerically zero beyond |u| ~ 8; the complementary-cdf form keeps the
/// ratio stable far into the tails.
pub fn retention_single(u: f64) -> f64 {
    let num = std_pdf(u).powi(2);
    let den = std_cdf(u) * std_cdf(-u);
    if den == 0.0 {
        return 0.0;
    }
    num / den
}

/// Fisher information about `theta` retained by the tri-state detector with
/// thresholds `(a, b)` and Gaussian noise of scale `sigma` (units 1/sigma^2):
///
/// ```text
/// (1/sigma^2) [ phi(ua)^2/Phi(ua)
///             + (phi(ub) - phi(ua))^2 / (Phi(ub) - Phi(ua))
///             + phi(ub)^2 / (1 - Phi(ub)) ]
/// ```
///
/// with `ua = (a - theta)/sigma`, `ub = (b - theta)/sigma`. The middle term
/// is taken as 0 when both its numerator and denominator vanish to rounding
/// (coincident standardized thresholds); tail terms underflow cleanly to 0.
pub fn fi_double(theta: f64, a: f64, b: f64, sigma: f64) -> Result<f64, FisherError> {
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(FisherError::BadThresholds { a, b });
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(FisherError::BadSigma(sigma));
    }
    let ua = (a - theta) / sigma;
    let ub = (b - theta) / sigma;
    let (pa, pb) = (std_pdf(ua), std_pdf(ub));

    let ratio = |num: f64, den: f64| if den == 0.0 { 0.0 } else { num / den };
    let first = ratio(pa * pa, std_cdf(ua));
    let third = ratio(pb * pb, std_cdf(-ub));

    let mid_num = (pb - pa) * (pb - pa);
    let mid_den = std_cdf(ub) - std_cdf(ua);
    let middle = if mid_den < 1e-15 {
        if mid_num < 1e-15 {
            0.0
        } else {
            return Err(FisherError::DegenerateBand(mid_den));
        }
    } else {
        mid_num / mid_den
    };

    Ok((first + middle + third) / (sigma * sigma))
}

/// Which parameter plane a surface spans.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceMode {
    /// axis1 = lower threshold `a`, axis2 = upper threshold `b`;
    /// `theta` and `sigma` fixed.
    ThresholdPlane,
    /// axis1 = signal `theta`, axis2 = noise level `sigma`;
    /// thresholds fixed.
    ThetaSigmaPlane,
}

/// Fixed parameters accompanying a [`SurfaceMode`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SurfaceParams {
    ThresholdPlane { theta: f64, sigma: f64 },
    ThetaSigmaPlane { a: f64, b: f64 },
}

/// A uniform closed grid `min, min + step, ..., max` (last point clamped).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn new(min: f64, max: f64, step: f64) -> Result<Self, FisherError> {
        if !(min.is_finite() && max.is_finite() && step.is_finite() && step > 0.0 && max > min) {
            return Err(FisherError::BadGrid);
        }
        Ok(Self { min, max, step })
    }

    pub fn points(&self) -> Vec<f64> {
        let count = ((self.max - self.min) / self.step).round() as usize + 1;
        (0..count)
            .map(|i| (self.min + i as f64 * self.step).min(self.max))
            .collect()
    }
}

/// One entry of the ridge trace: the per-row maximum of the surface.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RidgePoint {
    pub axis1: f64,
    pub argmax_axis2: f64,
    pub value: f64,
}

/// A Fisher-information surface over two parameter axes.
///
/// `values` is row-major over `axis1 x axis2`. Infeasible cells (`a >= b` in
/// the threshold plane) hold NaN and are excluded from ridge and maxima.
#[derive(Debug, Clone)]
pub struct FisherSurface {
    pub mode: SurfaceMode,
    pub axis1: Vec<f64>,
    pub axis2: Vec<f64>,
    pub values: Vec<f64>,
    pub ridge: Vec<RidgePoint>,
}

impl FisherSurface {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.axis2.len() + j]
    }

    /// Global maximum over feasible cells: `(axis1, axis2, value)`.
    pub fn global_max(&self) -> (f64, f64, f64) {
        let mut best = (f64::NAN, f64::NAN, f64::NEG_INFINITY);
        for (i, &a1) in self.axis1.iter().enumerate() {
            for (j, &a2) in self.axis2.iter().enumerate() {
                let v = self.value(i, j);
                if v.is_finite() && v > best.2 {
                    best = (a1, a2, v);
                }
            }
        }
        best
    }

    /// Plot-ready CSV: header `axis1,axis2,value`, one row per cell.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), FisherError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["axis1", "axis2", "value"])
            .map_err(io_err)?;
        for (i, &a1) in self.axis1.iter().enumerate() {
            for (j, &a2) in self.axis2.iter().enumerate() {
                w.write_record(&[
                    format!("{a1}"),
                    format!("{a2}"),
                    format!("{}", self.value(i, j)),
                ])
                .map_err(io_err)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Ridge trace as CSV: `axis1,argmax_axis2,value`.
    pub fn write_ridge_csv<W: Write>(&self, out: W) -> Result<(), FisherError> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["axis1", "argmax_axis2", "value"])
            .map_err(io_err)?;
        for r in &self.ridge {
            w.write_record(&[
                format!("{}", r.axis1),
                format!("{}", r.argmax_axis2),
                format!("{}", r.value),
            ])
            .map_err(io_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn io_err(e: csv::Error) -> FisherError {
    FisherError::Io(std::io::Error::other(e))
}

/// Evaluate [`fi_double`] over a grid and trace the per-row maxima.
pub fn fi_surface(
    mode: SurfaceMode,
    fixed: SurfaceParams,
    grid1: GridSpec,
    grid2: GridSpec,
) -> Result<FisherSurface, FisherError> {
    let axis1 = grid1.points();
    let axis2 = grid2.points();
    if axis1.len() < 2 || axis2.len() < 2 {
        return Err(FisherError::BadGrid);
    }
    let mut values = vec![f64::NAN; axis1.len() * axis2.len()];
    let mut ridge = Vec::with_capacity(axis1.len());
    for (i, &x1) in axis1.iter().enumerate() {
        let mut row_best: Option<RidgePoint> = None;
        for (j, &x2) in axis2.iter().enumerate() {
            let v = match (mode, fixed) {
                (SurfaceMode::ThresholdPlane, SurfaceParams::ThresholdPlane { theta, sigma }) => {
                    if x1 < x2 {
                        fi_double(theta, x1, x2, sigma)?
                    } else {
                        f64::NAN
                    }
                }
                (SurfaceMode::ThetaSigmaPlane, SurfaceParams::ThetaSigmaPlane { a, b }) => {
                    fi_double(x1, a, b, x2)?
                }
                _ => return Err(FisherError::BadGrid),
            };
            values[i * axis2.len() + j] = v;
            if v.is_finite() && row_best.map_or(true, |b| v > b.value) {
                row_best = Some(RidgePoint {
                    axis1: x1,
                    argmax_axis2: x2,
                    value: v,
                });
            }
        }
        if let Some(b) = row_best {
            ridge.push(b);
        }
    }
    Ok(FisherSurface {
        mode,
        axis1,
        axis2,
        values,
        ridge,
    })
}
