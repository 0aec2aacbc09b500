//! Experiment harness: configuration ingestion, reference solutions, error
//! measures, and CSV persistence for the wave-equation studies.
//!
//! Every experiment writes its per-run series as
//! `<outdir>/<experiment>_<p>_<h>.csv` plus a `summary.csv` of reductions,
//! all in a bit-stable format (17 significant digits, comma separator, LF
//! line endings).

mod config;
mod helm;
mod run1d;
mod run2d;

pub use config::{ExperimentConfig, ExperimentId, SigmaPreset};
pub use helm::{run_helmholtz_compare, HelmCompareResult};
pub use run1d::{
    reference_solution_1d, run_convergence_1d, run_reflect_1d, Convergence1dResult,
    Reflect1dResult,
};
pub use run2d::{
    run_evanescent, run_pml_width_2d, run_reflect_2d, run_waveguide, EvanescentResult,
    PmlWidthResult, Reflect2dResult, WaveguideResult,
};

use std::fs::File;
use std::io::{BufWriter, Write as _};
use std::path::Path;

use crate::error::Result;

/// Time series of an error measure with its reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    /// Experiment id this series belongs to.
    pub experiment: String,
    /// Stencil half-width of the run.
    pub p: usize,
    /// Grid spacing of the run (the x spacing when anisotropic).
    pub h: f64,
}

impl ErrorSeries {
    pub fn new(experiment: &str, p: usize, h: f64) -> Self {
        Self { times: Vec::new(), values: Vec::new(), experiment: experiment.into(), p, h }
    }

    pub fn push(&mut self, t: f64, value: f64) {
        debug_assert!(self.times.last().is_none_or(|&last| t > last));
        self.times.push(t);
        self.values.push(value);
    }

    /// Maximum over the whole series.
    pub fn max(&self) -> f64 {
        self.values.iter().fold(0.0, |a, &b| a.max(b))
    }

    /// Maximum over `t0 <= t <= t1`.
    pub fn max_in(&self, t0: f64, t1: f64) -> f64 {
        self.times
            .iter()
            .zip(self.values.iter())
            .filter(|(t, _)| **t >= t0 && **t <= t1)
            .fold(0.0, |a, (_, &v)| a.max(v))
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let rows = self.times.iter().zip(self.values.iter()).map(|(t, v)| vec![*t, *v]);
        write_csv(path, "t,value", rows)
    }
}

/// 17-significant-digit scientific formatting used by all CSV output.
pub fn fmt_g(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Writes numeric rows with a header, LF endings, bit-stable formatting.
pub fn write_csv<I>(path: &Path, header: &str, rows: I) -> Result<()>
where
    I: IntoIterator<Item = Vec<f64>>,
{
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(header.as_bytes())?;
    w.write_all(b"\n")?;
    for row in rows {
        let line =
            row.iter().map(|x| fmt_g(*x)).collect::<Vec<_>>().join(",");
        w.write_all(line.as_bytes())?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

/// Appends labeled reduction rows to `summary.csv` in the output directory.
pub fn append_summary(outdir: &Path, rows: &[SummaryRow]) -> Result<()> {
    std::fs::create_dir_all(outdir)?;
    let path = outdir.join("summary.csv");
    let fresh = !path.exists();
    let mut w = BufWriter::new(File::options().create(true).append(true).open(path)?);
    if fresh {
        w.write_all(b"experiment,label,value,threshold,pass\n")?;
    }
    for row in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            row.experiment,
            row.label,
            fmt_g(row.value),
            fmt_g(row.threshold),
            row.pass
        )?;
    }
    w.flush()?;
    Ok(())
}

/// One reduction line of `summary.csv`.
#[derive(Debug, Clone)]
pub struct SummaryRow {
    pub experiment: String,
    pub label: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl SummaryRow {
    pub fn new(experiment: &str, label: impl Into<String>, value: f64, threshold: f64, pass: bool) -> Self {
        Self { experiment: experiment.into(), label: label.into(), value, threshold, pass }
    }
}

/// Least-squares slope of `ln e` against `ln h`.
pub fn fit_loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|(h, e)| (h.ln(), e.max(1e-300).ln())).collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Truncated Gaussian initial datum of the 1D studies.
pub fn gaussian_1d(x: f64) -> f64 {
    let s = x + 3.0;
    if s.abs() <= 2.0 {
        (-10.0 * s * s).exp()
    } else {
        0.0
    }
}

/// Free-space solution of the 1D wave equation for even initial data.
pub fn dalembert(g0: impl Fn(f64) -> f64, x: f64, t: f64) -> f64 {
    0.5 * (g0(x - t) + g0(x + t))
}

/// Truncated Gaussian bump of the 2D studies, centered at `(-2, -2)`.
pub fn bump_2d(x: f64, y: f64) -> f64 {
    let (dx, dy) = (x + 2.0, y + 2.0);
    let r2 = dx * dx + dy * dy;
    if r2 <= 0.25 {
        (-140.0 * r2).exp()
    } else {
        0.0
    }
}

/// Deterministic splitmix64 stream for reproducible random right-hand
/// sides (bit-stable across platforms and releases).
#[derive(Debug, Clone)]
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `[-0.5, 0.5)`.
    pub fn next_centered(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }
}

/// Smooth switch-on factor of the waveguide traces.
pub fn sigmoid_ramp(t: f64) -> f64 {
    1.0 / (1.0 + (-5.0 * (t - 1.0)).exp())
}

/// Time derivative of [`sigmoid_ramp`].
pub fn sigmoid_ramp_dt(t: f64) -> f64 {
    let s = sigmoid_ramp(t);
    5.0 * s * (1.0 - s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_reductions() {
        let mut s = ErrorSeries::new("demo", 1, 0.1);
        s.push(0.0, 1.0);
        s.push(1.0, 5.0);
        s.push(2.0, 3.0);
        assert_eq!(s.max(), 5.0);
        assert_eq!(s.max_in(1.5, 2.5), 3.0);
        assert_eq!(s.max_in(10.0, 20.0), 0.0);
    }

    #[test]
    fn formatting_round_trips_f64() {
        for &x in &[1.0, -0.1, 3.0e-13, std::f64::consts::PI, 2.0f64.powi(-52)] {
            let s = fmt_g(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn dalembert_splits_even_data() {
        let g = |x: f64| (-x * x).exp();
        let u = dalembert(g, 0.3, 1.7);
        assert!((u - 0.5 * (g(0.3 - 1.7) + g(0.3 + 1.7))).abs() < 1e-16);
    }
}
