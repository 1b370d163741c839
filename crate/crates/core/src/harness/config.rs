//! Study configuration: built-in presets overridden by a flat TOML file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

use crate::control::{DEFAULT_MAX_ITERS, DEFAULT_TOL};
use crate::kernels::ExponentSpec;
use crate::special_fn::DEFAULT_NODE_COUNT;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExampleId {
    /// Uncontrolled state, `q = 1`, three exponents, `T = 1/2`.
    Example1,
    /// Control problem with `q = 1`, `u_d = 1 − 4(x − ½)²`, `κ = 7/8`.
    Example2,
    /// Both manufactured cases.
    Example3,
    /// Manufactured case with `φ = sin πx`.
    Example3a,
    /// Manufactured case with `φ = x²(1 − x)²`.
    Example3b,
}

impl ExampleId {
    pub fn name(self) -> &'static str {
        match self {
            ExampleId::Example1 => "example1",
            ExampleId::Example2 => "example2",
            ExampleId::Example3 => "example3",
            ExampleId::Example3a => "example3a",
            ExampleId::Example3b => "example3b",
        }
    }

    pub fn is_manufactured(self) -> bool {
        matches!(self, ExampleId::Example3 | ExampleId::Example3a | ExampleId::Example3b)
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "example1" => Ok(ExampleId::Example1),
            "example2" => Ok(ExampleId::Example2),
            "example3" => Ok(ExampleId::Example3),
            "example3a" => Ok(ExampleId::Example3a),
            "example3b" => Ok(ExampleId::Example3b),
            other => Err(Error::Config(format!("unknown example {other:?}"))),
        }
    }
}

/// A scalar or a list, so `alpha0 = 0.4` and `alpha0 = [0.4, 0.7]` both parse.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    example: Option<String>,
    alpha0: Option<OneOrMany>,
    alpha_slope: Option<f64>,
    #[serde(rename = "T")]
    horizon: Option<f64>,
    #[serde(rename = "N_list")]
    n_list: Option<Vec<usize>>,
    #[serde(rename = "M_list")]
    m_list: Option<Vec<usize>>,
    kappa: Option<f64>,
    tol: Option<f64>,
    max_iters: Option<usize>,
    quad_nodes: Option<usize>,
    out_dir: Option<PathBuf>,
}

/// Fully resolved study parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub example: ExampleId,
    /// One study per entry.
    pub alpha0: Vec<f64>,
    pub alpha_slope: f64,
    pub horizon: f64,
    /// Temporal ladder; single solves use the first entry.
    pub n_list: Vec<usize>,
    /// Spatial ladder; single solves use the first entry.
    pub m_list: Vec<usize>,
    /// Spatial mesh held fixed in temporal studies.
    pub temporal_m: usize,
    /// Time grid held fixed in spatial studies.
    pub spatial_n: usize,
    pub kappa: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub quad_nodes: usize,
    pub out_dir: Option<PathBuf>,
}

impl StudyConfig {
    pub fn preset(example: ExampleId) -> Self {
        let base = StudyConfig {
            example,
            alpha0: vec![0.2],
            alpha_slope: -1.0 / 6.0,
            horizon: 1.0,
            n_list: vec![4, 8, 16, 32],
            m_list: vec![4, 8, 16, 32],
            temporal_m: 32,
            spatial_n: 16,
            kappa: 7.0 / 8.0,
            tol: DEFAULT_TOL,
            max_iters: DEFAULT_MAX_ITERS,
            quad_nodes: DEFAULT_NODE_COUNT,
            out_dir: None,
        };
        match example {
            ExampleId::Example1 => StudyConfig {
                alpha0: vec![0.4, 0.7, 0.95],
                horizon: 0.5,
                n_list: vec![128, 256, 512, 1024],
                m_list: vec![8, 16, 32, 64],
                spatial_n: 64,
                kappa: 1.0,
                ..base
            },
            ExampleId::Example2 => base,
            ExampleId::Example3 | ExampleId::Example3a | ExampleId::Example3b => StudyConfig {
                alpha0: vec![0.8],
                n_list: vec![80],
                m_list: vec![32],
                spatial_n: 80,
                kappa: 1.0,
                ..base
            },
        }
    }

    /// Parses TOML on top of the preset of `requested`, or of the file's own
    /// `example` key when nothing is requested. A file naming a different
    /// example is rejected, except that `example3` accepts either case.
    pub fn from_toml_str(text: &str, requested: Option<ExampleId>) -> Result<Self> {
        Self::build(text, requested, None)
    }

    /// Like [`from_toml_str`](Self::from_toml_str) with nothing requested, but
    /// falls back to `fallback` when the file has no `example` key.
    pub fn from_toml_str_or(text: &str, fallback: ExampleId) -> Result<Self> {
        Self::build(text, None, Some(fallback))
    }

    pub fn read_file(path: &Path) -> Result<String> {
        std::fs::read_to_string(path).map_err(|source| Error::ConfigIo { path: path.to_path_buf(), source })
    }

    fn build(text: &str, requested: Option<ExampleId>, fallback: Option<ExampleId>) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let from_file = raw.example.as_deref().map(ExampleId::from_str).transpose()?;
        let example = match (requested, from_file) {
            (Some(ExampleId::Example3), Some(b)) if b.is_manufactured() => b,
            (Some(a), Some(b)) if a != b => {
                return Err(Error::Config(format!("config is for {b} but {a} was requested")));
            }
            (Some(a), _) => a,
            (None, Some(b)) => b,
            (None, None) => fallback.ok_or_else(|| Error::Config("missing `example` key".into()))?,
        };
        let mut cfg = Self::preset(example);
        if let Some(a) = raw.alpha0 {
            cfg.alpha0 = match a {
                OneOrMany::One(v) => vec![v],
                OneOrMany::Many(v) => v,
            };
        }
        if let Some(v) = raw.alpha_slope {
            cfg.alpha_slope = v;
        }
        if let Some(v) = raw.horizon {
            cfg.horizon = v;
        }
        if let Some(v) = raw.n_list {
            cfg.n_list = v;
        }
        if let Some(v) = raw.m_list {
            cfg.m_list = v;
        }
        if let Some(v) = raw.kappa {
            cfg.kappa = v;
        }
        if let Some(v) = raw.tol {
            cfg.tol = v;
        }
        if let Some(v) = raw.max_iters {
            cfg.max_iters = v;
        }
        if let Some(v) = raw.quad_nodes {
            cfg.quad_nodes = v;
        }
        if raw.out_dir.is_some() {
            cfg.out_dir = raw.out_dir;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.alpha0.is_empty() {
            return Err(Error::Config("alpha0 must not be empty".into()));
        }
        for &a in &self.alpha0 {
            self.spec(a).map_err(|e| Error::Config(e.to_string()))?;
        }
        check_ladder("N_list", &self.n_list, 1)?;
        check_ladder("M_list", &self.m_list, 2)?;
        if self.temporal_m < 2 || self.spatial_n < 1 {
            return Err(Error::Config("fixed meshes must have M ≥ 2 and N ≥ 1".into()));
        }
        if !(self.kappa > 0.0) || !self.kappa.is_finite() {
            return Err(Error::Config(format!("kappa must be positive, got {}", self.kappa)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iters == 0 || self.quad_nodes == 0 {
            return Err(Error::Config("max_iters and quad_nodes must be at least 1".into()));
        }
        Ok(())
    }

    pub fn spec(&self, alpha0: f64) -> Result<ExponentSpec> {
        ExponentSpec::new(alpha0, self.alpha_slope, self.horizon)
    }
}

fn check_ladder(name: &str, ladder: &[usize], min: usize) -> Result<()> {
    match ladder.first() {
        None => Err(Error::Config(format!("{name} must not be empty"))),
        Some(&first) if first < min => Err(Error::Config(format!("{name} entries must be at least {min}"))),
        Some(_) if ladder.windows(2).any(|w| w[1] != 2 * w[0]) => {
            Err(Error::Config(format!("{name} must be a doubling sequence, got {ladder:?}")))
        }
        Some(_) => Ok(()),
    }
}
