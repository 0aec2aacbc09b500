//! Flat key-value experiment configuration with per-experiment defaults.
//!
//! The on-disk format is one `key = value` pair per line; `#` starts a
//! comment. Unknown keys are rejected. `emit` writes every key in a fixed
//! order so that `parse(emit(cfg)) == cfg`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The reproducible studies shipped with the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentId {
    Convergence1d,
    Reflect1d,
    Reflect2d,
    PmlWidth2d,
    Waveguide,
    Evanescent,
    HelmholtzCompare,
}

impl ExperimentId {
    pub const ALL: [ExperimentId; 7] = [
        ExperimentId::Convergence1d,
        ExperimentId::Reflect1d,
        ExperimentId::Reflect2d,
        ExperimentId::PmlWidth2d,
        ExperimentId::Waveguide,
        ExperimentId::Evanescent,
        ExperimentId::HelmholtzCompare,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentId::Convergence1d => "convergence1d",
            ExperimentId::Reflect1d => "reflect1d",
            ExperimentId::Reflect2d => "reflect2d",
            ExperimentId::PmlWidth2d => "pml-width-2d",
            ExperimentId::Waveguide => "waveguide",
            ExperimentId::Evanescent => "evanescent",
            ExperimentId::HelmholtzCompare => "helmholtz-compare",
        }
    }
}

impl FromStr for ExperimentId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentId::ALL
            .iter()
            .find(|id| id.name() == s)
            .copied()
            .ok_or_else(|| Error::Config(format!("unknown experiment '{s}'")))
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Damping-strength presets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaPreset {
    /// `2 / h` (near-optimal for resolved propagating modes).
    TwoOverH,
    /// `2 / sqrt(h)` (used by the 1D convergence study).
    TwoOverSqrtH,
    /// Damped first half of the layer, free second half.
    TwoStage,
    /// Explicit constant value.
    Value(f64),
}

impl SigmaPreset {
    /// Constant damping value for spacing `h`.
    pub fn value(&self, h: f64) -> f64 {
        match self {
            SigmaPreset::TwoOverH | SigmaPreset::TwoStage => 2.0 / h,
            SigmaPreset::TwoOverSqrtH => 2.0 / h.sqrt(),
            SigmaPreset::Value(v) => *v,
        }
    }
}

impl fmt::Display for SigmaPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SigmaPreset::TwoOverH => f.write_str("two-over-h"),
            SigmaPreset::TwoOverSqrtH => f.write_str("two-over-sqrt-h"),
            SigmaPreset::TwoStage => f.write_str("two-stage"),
            SigmaPreset::Value(v) => write!(f, "{}", super::fmt_g(*v)),
        }
    }
}

impl FromStr for SigmaPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-over-h" => Ok(SigmaPreset::TwoOverH),
            "two-over-sqrt-h" => Ok(SigmaPreset::TwoOverSqrtH),
            "two-stage" => Ok(SigmaPreset::TwoStage),
            other => other
                .parse::<f64>()
                .map(SigmaPreset::Value)
                .map_err(|_| Error::Config(format!("bad sigma preset '{other}'"))),
        }
    }
}

/// All knobs of a single experiment invocation.
///
/// Documented keys (all appear in emitted files):
///
/// | key        | meaning                                                |
/// |------------|--------------------------------------------------------|
/// | experiment | one of the experiment names                            |
/// | orders     | comma list of stencil half-widths `p`                  |
/// | h          | grid spacing (x spacing for anisotropic grids)         |
/// | h2         | y spacing (waveguide)                                  |
/// | h_list     | comma list of spacings for convergence studies         |
/// | sigma      | `two-over-h`, `two-over-sqrt-h`, `two-stage`, number   |
/// | t_final    | end of the integration window                          |
/// | omega      | driving frequency (waveguide/evanescent/helmholtz)     |
/// | variant    | `long`/`short`/`both` (reflect1d), `u1`/`u2`/`both`    |
/// | n          | grid node count (helmholtz-compare)                    |
/// | pml_len    | layer length (1D studies)                              |
/// | seed       | RNG seed (helmholtz-compare)                           |
/// | outdir     | output directory for CSV artifacts                     |
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentId,
    pub orders: Vec<usize>,
    pub h: f64,
    pub h2: f64,
    pub h_list: Vec<f64>,
    pub sigma: SigmaPreset,
    pub t_final: f64,
    pub omega: f64,
    pub variant: String,
    pub n: usize,
    pub pml_len: f64,
    pub seed: u64,
    pub outdir: PathBuf,
}

impl ExperimentConfig {
    /// Desk-scale defaults reproducing the reference studies.
    pub fn default_for(id: ExperimentId) -> Self {
        let base = Self {
            experiment: id,
            orders: vec![1, 2, 3, 4],
            h: 0.5f64.powi(6),
            h2: 0.0,
            h_list: vec![],
            sigma: SigmaPreset::TwoOverH,
            t_final: 10.0,
            omega: 5.0,
            variant: "both".into(),
            n: 64,
            pml_len: 4.0,
            seed: 20_240_801,
            outdir: PathBuf::from("out"),
        };
        match id {
            ExperimentId::Convergence1d => Self {
                sigma: SigmaPreset::TwoOverSqrtH,
                h_list: (3..=6).map(|k| 0.5f64.powi(k)).collect(),
                ..base
            },
            ExperimentId::Reflect1d => base,
            ExperimentId::Reflect2d => Self {
                h: 0.5f64.powi(5),
                t_final: 3.0,
                pml_len: 0.2,
                ..base
            },
            ExperimentId::PmlWidth2d => Self {
                h_list: (3..=6).map(|k| 0.5f64.powi(k)).collect(),
                t_final: 3.0,
                pml_len: 0.2,
                ..base
            },
            ExperimentId::Waveguide => Self {
                orders: vec![1, 2],
                h: 0.15,
                h2: 0.2,
                t_final: 63.0,
                pml_len: 5.0,
                ..base
            },
            ExperimentId::Evanescent => Self {
                orders: vec![2],
                h: 0.08,
                t_final: 150.0,
                pml_len: 2.4,
                ..base
            },
            ExperimentId::HelmholtzCompare => Self { orders: vec![1, 2], ..base },
        }
    }

    /// Serializes every key in a fixed order.
    pub fn emit(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| super::fmt_g(*x)).collect::<Vec<_>>().join(",");
        let ords = self.orders.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "experiment = {}\norders = {}\nh = {}\nh2 = {}\nh_list = {}\nsigma = {}\n\
             t_final = {}\nomega = {}\nvariant = {}\nn = {}\npml_len = {}\nseed = {}\noutdir = {}\n",
            self.experiment,
            ords,
            super::fmt_g(self.h),
            super::fmt_g(self.h2),
            list(&self.h_list),
            self.sigma,
            super::fmt_g(self.t_final),
            super::fmt_g(self.omega),
            self.variant,
            self.n,
            super::fmt_g(self.pml_len),
            self.seed,
            self.outdir.display(),
        )
    }

    /// Parses the flat key-value format; unspecified keys keep the defaults
    /// of the named experiment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            pairs.push((key.trim().to_string(), value.trim().to_string()));
        }
        let id_raw = pairs
            .iter()
            .find(|(k, _)| k == "experiment")
            .ok_or_else(|| Error::Config("missing 'experiment' key".into()))?
            .1
            .clone();
        let mut cfg = Self::default_for(id_raw.parse()?);
        for (key, value) in pairs {
            cfg.set(&key, &value)?;
        }
        Ok(cfg)
    }

    /// Applies one `key = value` override.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Config(format!("bad value '{value}' for key '{what}'"));
        match key {
            "experiment" => self.experiment = value.parse()?,
            "orders" => {
                self.orders = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<usize>().map_err(|_| bad("orders")))
                    .collect::<Result<_>>()?;
            }
            "h" => self.h = value.parse().map_err(|_| bad("h"))?,
            "h2" => self.h2 = value.parse().map_err(|_| bad("h2"))?,
            "h_list" => {
                self.h_list = value
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<f64>().map_err(|_| bad("h_list")))
                    .collect::<Result<_>>()?;
            }
            "sigma" => self.sigma = value.parse()?,
            "t_final" => self.t_final = value.parse().map_err(|_| bad("t_final"))?,
            "omega" => self.omega = value.parse().map_err(|_| bad("omega"))?,
            "variant" => self.variant = value.to_string(),
            "n" => self.n = value.parse().map_err(|_| bad("n"))?,
            "pml_len" => self.pml_len = value.parse().map_err(|_| bad("pml_len"))?,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "outdir" => self.outdir = PathBuf::from(value),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_all_defaults() {
        for id in ExperimentId::ALL {
            let cfg = ExperimentConfig::default_for(id);
            let back = ExperimentConfig::parse(&cfg.emit()).unwrap();
            assert_eq!(cfg, back, "{id}");
        }
    }

    #[test]
    fn parse_with_comments_and_overrides() {
        let text = "# demo\nexperiment = reflect1d\nh = 0.25 # coarse\norders = 1,2\n";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.experiment, ExperimentId::Reflect1d);
        assert_eq!(cfg.h, 0.25);
        assert_eq!(cfg.orders, vec![1, 2]);
        // untouched keys keep the experiment defaults
        assert_eq!(cfg.t_final, 10.0);
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(ExperimentConfig::parse("experiment = reflect1d\nbogus = 3\n").is_err());
        assert!(ExperimentConfig::parse("experiment = nope\n").is_err());
        assert!(ExperimentConfig::parse("h = 0.1\n").is_err());
        let mut cfg = ExperimentConfig::default_for(ExperimentId::Reflect1d);
        assert!(cfg.set("orders", "1,x").is_err());
    }

    #[test]
    fn sigma_presets() {
        assert_eq!(SigmaPreset::TwoOverH.value(0.1), 20.0);
        assert!((SigmaPreset::TwoOverSqrtH.value(0.25) - 4.0).abs() < 1e-15);
        assert_eq!(SigmaPreset::Value(7.5).value(0.1), 7.5);
        let s: SigmaPreset = "17.25".parse().unwrap();
        assert_eq!(s, SigmaPreset::Value(17.25));
        let rt: SigmaPreset = s.to_string().parse().unwrap();
        assert_eq!(rt, s);
    }
}
