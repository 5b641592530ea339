//! Test-signal generators, grayscale image loading, and amplitude rescaling.
//!
//! The 1D generators cover the sine wave used in the simulation studies plus
//! the six classical wavelet-regression benchmark functions (Wave, Doppler,
//! time-shifted sine, Angles, Blip, Parabolas) in their standard
//! Donoho-Johnstone-style definitions; those six are rescaled to [-1, 1] so
//! the usual "thresholds at twice the amplitude" rule applies uniformly.
//! All generators are deterministic.

use serde::{Deserialize, Serialize};
use std::fs;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SignalError {
    #[error("signal length {0} is not a power of two >= 8")]
    BadLength(usize),
    #[error("image side {0} is not a power of two >= 8")]
    BadSide(usize),
    #[error("times and values differ in length ({times} vs {values})")]
    LengthMismatch { times: usize, values: usize },
    #[error("signal must have at least 2 samples")]
    TooShort,
    #[error("times must be strictly increasing")]
    TimesNotIncreasing,
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("matrix shape {rows}x{cols} does not match {len} values")]
    ShapeMismatch { rows: usize, cols: usize, len: usize },
    #[error("unknown signal kind `{0}`")]
    UnknownKind(String),
    #[error("rescale range requires hi > lo, got [{lo}, {hi}]")]
    BadRange { lo: f64, hi: f64 },
    #[error("cannot rescale a constant signal")]
    ConstantSignal,
    #[error("io error reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed PGM header: {0}")]
    MalformedHeader(String),
    #[error("unsupported PGM bit depth (maxval {0}, only 8-bit supported)")]
    UnsupportedBitDepth(u32),
    #[error("unexpected end of pixel data (expected {expected} bytes, got {got})")]
    TruncatedPixels { expected: usize, got: usize },
    #[error("non-rectangular CSV: row {row} has {got} columns, expected {expected}")]
    NonRectangular {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("CSV value `{value}` at row {row}, column {col} is not a number")]
    BadCsvValue {
        row: usize,
        col: usize,
        value: String,
    },
    #[error("empty image file")]
    EmptyImage,
}

/// A sampled 1D signal on a time grid in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Signal1D {
    values: Vec<f64>,
    times: Vec<f64>,
}

impl Signal1D {
    pub fn new(times: Vec<f64>, values: Vec<f64>) -> Result<Self, SignalError> {
        if times.len() != values.len() {
            return Err(SignalError::LengthMismatch {
                times: times.len(),
                values: values.len(),
            });
        }
        if values.len() < 2 {
            return Err(SignalError::TooShort);
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SignalError::NonFinite(i));
        }
        if times.windows(2).any(|w| !(w[0] < w[1])) || times.iter().any(|t| !t.is_finite()) {
            return Err(SignalError::TimesNotIncreasing);
        }
        Ok(Self { values, times })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Same time grid, new values.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self, SignalError> {
        Self::new(self.times.clone(), values)
    }

    /// Affine map of [min, max] onto [lo, hi].
    pub fn rescaled(&self, lo: f64, hi: f64) -> Result<Self, SignalError> {
        let values = rescale_values(&self.values, lo, hi)?;
        Ok(Self {
            values,
            times: self.times.clone(),
        })
    }
}

/// A row-major 2D signal (image).
#[derive(Debug, Clone, PartialEq)]
pub struct Signal2D {
    values: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl Signal2D {
    pub fn new(values: Vec<f64>, rows: usize, cols: usize) -> Result<Self, SignalError> {
        if rows * cols != values.len() {
            return Err(SignalError::ShapeMismatch {
                rows,
                cols,
                len: values.len(),
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(SignalError::NonFinite(i));
        }
        Ok(Self { values, rows, cols })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.values[r * self.cols + c]
    }

    pub fn with_values(&self, values: Vec<f64>) -> Result<Self, SignalError> {
        Self::new(values, self.rows, self.cols)
    }

    pub fn rescaled(&self, lo: f64, hi: f64) -> Result<Self, SignalError> {
        let values = rescale_values(&self.values, lo, hi)?;
        Ok(Self {
            values,
            rows: self.rows,
            cols: self.cols,
        })
    }
}

fn rescale_values(values: &[f64], lo: f64, hi: f64) -> Result<Vec<f64>, SignalError> {
    if !(hi.is_finite() && lo.is_finite() && hi > lo) {
        return Err(SignalError::BadRange { lo, hi });
    }
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Err(SignalError::ConstantSignal);
    }
    let scale = (hi - lo) / (max - min);
    Ok(values
        .iter()
        // anchor both endpoints so min maps to lo and max to hi exactly
        .map(|&v| {
            if v == max {
                hi
            } else {
                lo + (v - min) * scale
            }
        })
        .collect())
}

/// 1D generator kinds. CLI names are the lowercase variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SignalKind {
    Sine,
    Wave,
    Doppler,
    TimeShiftedSine,
    Angles,
    Blip,
    Parabolas,
}

impl SignalKind {
    pub const ALL: [SignalKind; 7] = [
        SignalKind::Sine,
        SignalKind::Wave,
        SignalKind::Doppler,
        SignalKind::TimeShiftedSine,
        SignalKind::Angles,
        SignalKind::Blip,
        SignalKind::Parabolas,
    ];

    /// The six benchmark functions (everything except the plain sine).
    pub const BENCHMARKS: [SignalKind; 6] = [
        SignalKind::Wave,
        SignalKind::Doppler,
        SignalKind::TimeShiftedSine,
        SignalKind::Angles,
        SignalKind::Blip,
        SignalKind::Parabolas,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SignalKind::Sine => "sine",
            SignalKind::Wave => "wave",
            SignalKind::Doppler => "doppler",
            SignalKind::TimeShiftedSine => "timeshiftedsine",
            SignalKind::Angles => "angles",
            SignalKind::Blip => "blip",
            SignalKind::Parabolas => "parabolas",
        }
    }
}

impl FromStr for SignalKind {
    type Err = SignalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SignalKind::ALL
            .iter()
            .find(|k| k.name() == s)
            .copied()
            .ok_or_else(|| SignalError::UnknownKind(s.to_string()))
    }
}

fn check_dyadic(n: usize) -> Result<(), SignalError> {
    if n < 8 || !n.is_power_of_two() {
        return Err(SignalError::BadLength(n));
    }
    Ok(())
}

/// Generate a length-`n` test signal on the uniform grid `t_i = i/(n-1)`.
///
/// `n` must be a power of two (>= 8) for wavelet compatibility. The sine is
/// `sin(x)` on `x in [0, 8*pi]`, raw; the six benchmark functions are
/// rescaled to [-1, 1].
pub fn gen_1d(kind: SignalKind, n: usize) -> Result<Signal1D, SignalError> {
    check_dyadic(n)?;
    let times: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let raw: Vec<f64> = times.iter().map(|&t| eval_kind(kind, t)).collect();
    let values = match kind {
        SignalKind::Sine => raw,
        _ => rescale_values(&raw, -1.0, 1.0)?,
    };
    Signal1D::new(times, values)
}

/// Pointwise formula for each generator kind, before any rescaling.
///
/// The benchmark formulas are the test functions of the wavelet regression
/// literature (Donoho-Johnstone and the Antoniadis-Bigot-Sapatinas set).
pub(crate) fn eval_kind(kind: SignalKind, t: f64) -> f64 {
    use std::f64::consts::PI;
    match kind {
        SignalKind::Sine => (8.0 * PI * t).sin(),
        SignalKind::Wave => 0.5 + 0.2 * (4.0 * PI * t).cos() + 0.1 * (24.0 * PI * t).cos(),
        SignalKind::Doppler => {
            (t * (1.0 - t)).max(0.0).sqrt() * (2.0 * PI * 1.05 / (t + 0.05)).sin()
        }
        SignalKind::TimeShiftedSine => {
            let g = |x: f64| (1.0 - (PI * x).cos()) / 2.0;
            0.3 * (3.0 * PI * (g(g(g(g(t)))) + t)).sin() + 0.5
        }
        SignalKind::Angles => {
            if t <= 0.15 {
                2.0 * t + 0.5
            } else if t <= 0.2 {
                -12.0 * (t - 0.15) + 0.8
            } else if t <= 0.5 {
                0.2
            } else if t <= 0.6 {
                6.0 * (t - 0.5) + 0.2
            } else if t <= 0.65 {
                -10.0 * (t - 0.6) + 0.8
            } else if t <= 0.85 {
                -0.5 * (t - 0.65) + 0.3
            } else {
                2.0 * (t - 0.85) + 0.2
            }
        }
        SignalKind::Blip => {
            let base = 0.32 + 0.6 * t;
            if t <= 0.8 {
                base + 0.3 * (-100.0 * (t - 0.3).powi(2)).exp()
            } else {
                base - 0.6 + 0.3 * (-100.0 * (t - 1.3).powi(2)).exp()
            }
        }
        SignalKind::Parabolas => {
            const POS: [f64; 10] = [0.1, 0.2, 0.3, 0.35, 0.37, 0.41, 0.43, 0.5, 0.7, 0.9];
            const HGT: [f64; 10] = [
                -30.0, 60.0, -30.0, 500.0, -1000.0, 1000.0, -500.0, 7.5, -15.0, 7.5,
            ];
            let mut v = 0.8;
            for (p, h) in POS.iter().zip(HGT.iter()) {
                if t > *p {
                    v += h * (t - p) * (t - p);
                }
            }
            v
        }
    }
}

/// `sin(l) * cos(m)` on uniform `size x size` grids over `[pi, 8*pi]`.
pub fn gen_2d_sincos(size: usize) -> Result<Signal2D, SignalError> {
    use std::f64::consts::PI;
    if size < 8 || !size.is_power_of_two() {
        return Err(SignalError::BadSide(size));
    }
    let grid: Vec<f64> = (0..size)
        .map(|i| PI + 7.0 * PI * i as f64 / (size - 1) as f64)
        .collect();
    let mut values = Vec::with_capacity(size * size);
    for r in 0..size {
        let s = grid[r].sin();
        for c in 0..size {
            values.push(s * grid[c].cos());
        }
    }
    Signal2D::new(values, size, size)
}

/// Load a grayscale image: binary PGM (P5, 8-bit) or a headerless CSV matrix.
///
/// Pixel values come back as raw reals; rescale afterwards as needed.
pub fn load_image<P: AsRef<Path>>(path: P) -> Result<Signal2D, SignalError> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|source| SignalError::Io {
        path: path.display().to_string(),
        source,
    })?;
    if bytes.starts_with(b"P5") {
        parse_pgm(&bytes)
    } else {
        parse_csv_matrix(&bytes)
    }
}

fn parse_pgm(bytes: &[u8]) -> Result<Signal2D, SignalError> {
    let mut cursor = &bytes[2..];

    fn skip_separators(data: &mut &[u8]) {
        loop {
            if let Some(&c) = data.first() {
                if c.is_ascii_whitespace() {
                    *data = &data[1..];
                    continue;
                }
                if c == b'#' {
                    while let Some(&c) = data.first() {
                        *data = &data[1..];
                        if c == b'\n' {
                            break;
                        }
                    }
                    continue;
                }
            }
            break;
        }
    }

    fn read_number(data: &mut &[u8], what: &str) -> Result<u32, SignalError> {
        skip_separators(data);
        let mut value: u64 = 0;
        let mut digits = 0;
        while let Some(&c) = data.first() {
            if !c.is_ascii_digit() {
                break;
            }
            value = value * 10 + (c - b'0') as u64;
            digits += 1;
            *data = &data[1..];
            if value > u32::MAX as u64 {
                return Err(SignalError::MalformedHeader(format!("{what} too large")));
            }
        }
        if digits == 0 {
            return Err(SignalError::MalformedHeader(format!("missing {what}")));
        }
        Ok(value as u32)
    }

    let width = read_number(&mut cursor, "width")? as usize;
    let height = read_number(&mut cursor, "height")? as usize;
    let maxval = read_number(&mut cursor, "maxval")?;
    if width == 0 || height == 0 {
        return Err(SignalError::MalformedHeader("zero image dimension".into()));
    }
    if maxval == 0 || maxval > 255 {
        return Err(SignalError::UnsupportedBitDepth(maxval));
    }
    // exactly one whitespace byte separates the header from the raster
    match cursor.first() {
        Some(c) if c.is_ascii_whitespace() => cursor = &cursor[1..],
        _ => {
            return Err(SignalError::MalformedHeader(
                "missing separator before pixel data".into(),
            ))
        }
    }
    let expected = width * height;
    let mut pixels = vec![0u8; expected];
    let got = cursor.take(expected as u64).read(&mut pixels).unwrap_or(0);
    if got < expected {
        return Err(SignalError::TruncatedPixels { expected, got });
    }
    let values = pixels.iter().map(|&p| p as f64).collect();
    Signal2D::new(values, height, width)
}

fn parse_csv_matrix(bytes: &[u8]) -> Result<Signal2D, SignalError> {
    let text = String::from_utf8_lossy(bytes);
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (r, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let mut row = Vec::new();
        for (c, field) in line.split(',').enumerate() {
            let v: f64 =
                field
                    .trim()
                    .parse()
                    .map_err(|_| SignalError::BadCsvValue {
                        row: r,
                        col: c,
                        value: field.trim().to_string(),
                    })?;
            row.push(v);
        }
        if let Some(first) = rows.first() {
            if row.len() != first.len() {
                return Err(SignalError::NonRectangular {
                    row: r,
                    got: row.len(),
                    expected: first.len(),
                });
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(SignalError::EmptyImage);
    }
    let (nrows, ncols) = (rows.len(), rows[0].len());
    Signal2D::new(rows.into_iter().flatten().collect(), nrows, ncols)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn sine_grid_and_range() {
        let s = gen_1d(SignalKind::Sine, 1024).unwrap();
        assert_eq!(s.len(), 1024);
        assert_eq!(s.times()[0], 0.0);
        assert_eq!(s.times()[1023], 1.0);
        assert_eq!(s.values()[0], 0.0); // sin(0)
        let min = s.values().iter().cloned().fold(f64::INFINITY, f64::min);
        let max = s.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        assert_abs_diff_eq!(min, -1.0, epsilon = 1e-3);
        assert_abs_diff_eq!(max, 1.0, epsilon = 1e-3);
    }

    #[test]
    fn generators_are_deterministic_and_unit_ranged() {
        for kind in SignalKind::ALL {
            let a = gen_1d(kind, 256).unwrap();
            let b = gen_1d(kind, 256).unwrap();
            assert_eq!(a, b);
            let min = a.values().iter().cloned().fold(f64::INFINITY, f64::min);
            let max = a.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            assert!(min >= -1.0 - 1e-12 && max <= 1.0 + 1e-12, "{kind:?}");
            if kind != SignalKind::Sine {
                // benchmark functions are rescaled exactly onto [-1, 1]
                assert_eq!(min, -1.0);
                assert_eq!(max, 1.0);
            }
        }
    }

    #[test]
    fn doppler_matches_dense_evaluation_oracle() {
        let n = 1024;
        let s = gen_1d(SignalKind::Doppler, n).unwrap();
        // independent evaluation: formula + the same affine [-1,1] map
        let raw: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                (t * (1.0 - t)).sqrt() * (2.0 * std::f64::consts::PI * 1.05 / (t + 0.05)).sin()
            })
            .collect();
        let min = raw.iter().cloned().fold(f64::INFINITY, f64::min);
        let max = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let scale = 2.0 / (max - min);
        for i in 0..n {
            let expected = if raw[i] == max {
                1.0
            } else {
                -1.0 + (raw[i] - min) * scale
            };
            assert_eq!(s.values()[i], expected, "grid point {i}");
        }
    }

    #[test]
    fn rejects_non_dyadic_lengths() {
        assert!(matches!(
            gen_1d(SignalKind::Sine, 1000),
            Err(SignalError::BadLength(1000))
        ));
        assert!(gen_1d(SignalKind::Sine, 4).is_err());
        assert!(gen_2d_sincos(100).is_err());
    }

    #[test]
    fn sincos_examples() {
        let img = gen_2d_sincos(64).unwrap();
        assert_eq!((img.rows(), img.cols()), (64, 64));
        assert!(img.values().iter().all(|v| (-1.0..=1.0).contains(v)));
        // corner l = m = pi: sin(pi) * cos(pi) ~ 0
        assert_abs_diff_eq!(img.get(0, 0), 0.0, epsilon = 1e-12);
        let big = gen_2d_sincos(512).unwrap();
        assert_eq!((big.rows(), big.cols()), (512, 512));
    }

    #[test]
    fn rescale_examples() {
        let s = Signal1D::new(vec![0.0, 0.5, 1.0], vec![0.0, 5.0, 10.0]).unwrap();
        let r = s.rescaled(-1.0, 1.0).unwrap();
        assert_eq!(r.values(), &[-1.0, 0.0, 1.0]);
        // idempotence
        let rr = r.rescaled(-1.0, 1.0).unwrap();
        assert_eq!(r.values(), rr.values());
        // constant signal is an error
        let c = Signal1D::new(vec![0.0, 1.0], vec![3.0, 3.0]).unwrap();
        assert!(matches!(
            c.rescaled(-1.0, 1.0),
            Err(SignalError::ConstantSignal)
        ));
        assert!(s.rescaled(1.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn rescale_hits_endpoints_and_keeps_extrema_locations(
            values in proptest::collection::vec(-1e6f64..1e6, 8..64),
        ) {
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assume!(max > min);
            let out = rescale_values(&values, -1.0, 1.0).unwrap();
            let omin = out.iter().cloned().fold(f64::INFINITY, f64::min);
            let omax = out.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            prop_assert!((omin + 1.0).abs() < 1e-12);
            prop_assert!((omax - 1.0).abs() < 1e-12);
            let argmax_in = values.iter().position(|&v| v == max).unwrap();
            let argmax_out = out.iter().position(|&v| v == omax).unwrap();
            prop_assert_eq!(argmax_in, argmax_out);
            let argmin_in = values.iter().position(|&v| v == min).unwrap();
            let argmin_out = out.iter().position(|&v| v == omin).unwrap();
            prop_assert_eq!(argmin_in, argmin_out);
        }
    }

    #[test]
    fn pgm_round_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tiny.pgm");
        std::fs::write(&path, b"P5\n# comment\n2 2\n255\n\x00\xff\x80\x40").unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!((img.rows(), img.cols()), (2, 2));
        assert_eq!(img.values(), &[0.0, 255.0, 128.0, 64.0]);

        let trunc = dir.path().join("trunc.pgm");
        std::fs::write(&trunc, b"P5\n2 2\n255\n\x00\xff").unwrap();
        let err = load_image(&trunc).unwrap_err();
        assert!(
            err.to_string().contains("unexpected end of pixel data"),
            "{err}"
        );

        let deep = dir.path().join("deep.pgm");
        std::fs::write(&deep, b"P5\n2 2\n65535\n....").unwrap();
        assert!(matches!(
            load_image(&deep),
            Err(SignalError::UnsupportedBitDepth(65535))
        ));

        let bad = dir.path().join("bad.pgm");
        std::fs::write(&bad, b"P5\nxx\n").unwrap();
        assert!(matches!(
            load_image(&bad),
            Err(SignalError::MalformedHeader(_))
        ));
    }

    #[test]
    fn csv_matrix_round_and_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.csv");
        std::fs::write(&path, "1,2\n3,4\n").unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!((img.rows(), img.cols()), (2, 2));
        assert_eq!(img.values(), &[1.0, 2.0, 3.0, 4.0]);

        let ragged = dir.path().join("ragged.csv");
        std::fs::write(&ragged, "1,2\n3\n").unwrap();
        assert!(matches!(
            load_image(&ragged),
            Err(SignalError::NonRectangular { .. })
        ));

        let junk = dir.path().join("junk.csv");
        std::fs::write(&junk, "1,zebra\n").unwrap();
        assert!(matches!(
            load_image(&junk),
            Err(SignalError::BadCsvValue { .. })
        ));
    }

    #[test]
    fn kind_names_parse_roundtrip() {
        for kind in SignalKind::ALL {
            assert_eq!(kind.name().parse::<SignalKind>().unwrap(), kind);
        }
        assert!("gaussian-bump".parse::<SignalKind>().is_err());
    }
}
