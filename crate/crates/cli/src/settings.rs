use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::Deserialize;
use warmstart::ansatz::AlphaChoice;
use warmstart::lattice::{Boundary, Truncation};
use warmstart::resources::{DecompositionPolicy, OverlapMeasure};

use crate::Failure;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Periodic,
    Open,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationArg {
    PerSite,
    Total,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Zero,
    Strong,
    Variational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureArg {
    Probability,
    Amplitude,
}

/// Every run parameter. Flags override values from `--config`, which in turn
/// override the per-command defaults.
#[derive(Clone, Debug, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// JSON file with any of these settings; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,

    /// Hopping amplitude.
    #[arg(long)]
    pub t: Option<f64>,

    /// Phonon frequency.
    #[arg(long)]
    pub omega0: Option<f64>,

    /// Effective couplings, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub lambda: Option<Vec<f64>>,

    /// Lattice sizes (powers of two), comma separated.
    #[arg(long = "N", value_delimiter = ',', num_args = 1..)]
    #[serde(rename = "N")]
    pub sites: Option<Vec<usize>>,

    /// Fixed phonon cutoff; by default it grows with the coupling, never below 12.
    #[arg(long)]
    pub nmax: Option<usize>,

    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryArg>,

    #[arg(long, value_enum)]
    pub truncation: Option<TruncationArg>,

    /// Overlap modes, comma separated.
    #[arg(long = "mode", value_delimiter = ',', num_args = 1..)]
    #[serde(rename = "mode")]
    pub modes: Option<Vec<ModeArg>>,

    /// Displacements for circuit verification, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub alpha: Option<Vec<f64>>,

    /// Qubits per phonon register.
    #[arg(long)]
    pub m: Option<usize>,

    /// Half-width of the position grid in units of sigma.
    #[arg(long = "W")]
    #[serde(rename = "W")]
    pub width: Option<f64>,

    /// Degree of the Gaussian approximant.
    #[arg(long)]
    pub degree: Option<usize>,

    /// JSON decomposition policy.
    #[arg(long)]
    pub policy: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub measure: Option<MeasureArg>,

    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Accepted for compatibility; nothing in the pipeline is random.
    #[arg(long)]
    #[serde(skip)]
    pub seedless: bool,
}

macro_rules! prefer {
    ($a:ident, $b:ident, $($f:ident),*) => {
        Settings { $($f: $a.$f.or($b.$f),)* config: None, seedless: $a.seedless }
    };
}

impl Settings {
    /// Reads the config file, if any, and lays the flags over it.
    pub fn resolve(self) -> Result<Settings, Failure> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let text = read(&path)?;
        let file: Settings = serde_json::from_str(&text)
            .map_err(|e| Failure::Config(format!("config {}: {e}", path.display())))?;
        let flags = self;
        Ok(prefer!(
            flags, file, t, omega0, lambda, sites, nmax, boundary, truncation, modes, alpha, m, width, degree,
            policy, measure, out, format
        ))
    }

    pub fn t(&self) -> Result<f64, Failure> {
        positive("t", self.t.unwrap_or(1.0))
    }

    pub fn omega0(&self) -> Result<f64, Failure> {
        positive("omega0", self.omega0.unwrap_or(1.0))
    }

    pub fn lambdas(&self, default: &[f64]) -> Result<Vec<f64>, Failure> {
        let grid = self.lambda.clone().unwrap_or_else(|| default.to_vec());
        if grid.is_empty() {
            return Err(Failure::Config("the lambda grid is empty".into()));
        }
        if let Some(bad) = grid.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
            return Err(Failure::Config(format!("lambda must be finite and >= 0, got {bad}")));
        }
        Ok(grid)
    }

    pub fn sites(&self, default: &[usize]) -> Result<Vec<usize>, Failure> {
        let sites = self.sites.clone().unwrap_or_else(|| default.to_vec());
        if sites.is_empty() {
            return Err(Failure::Config("the N grid is empty".into()));
        }
        if let Some(bad) = sites.iter().find(|n| !n.is_power_of_two()) {
            return Err(Failure::Config(format!("N must be a power of two, got {bad}")));
        }
        Ok(sites)
    }

    pub fn boundary(&self) -> Boundary {
        match self.boundary {
            Some(BoundaryArg::Open) => Boundary::Open,
            _ => Boundary::Periodic,
        }
    }

    pub fn truncation(&self) -> Truncation {
        match self.truncation {
            Some(TruncationArg::PerSite) => Truncation::PerSite,
            _ => Truncation::TotalPhonons,
        }
    }

    pub fn modes(&self) -> Result<Vec<AlphaChoice>, Failure> {
        let modes = self
            .modes
            .clone()
            .unwrap_or_else(|| vec![ModeArg::Zero, ModeArg::Strong, ModeArg::Variational]);
        if modes.is_empty() {
            return Err(Failure::Config("no overlap modes requested".into()));
        }
        Ok(modes
            .into_iter()
            .map(|m| match m {
                ModeArg::Zero => AlphaChoice::Zero,
                ModeArg::Strong => AlphaChoice::StrongCoupling,
                ModeArg::Variational => AlphaChoice::Variational,
            })
            .collect())
    }

    pub fn alphas(&self) -> Result<Vec<f64>, Failure> {
        let alphas = self.alpha.clone().unwrap_or_else(|| vec![0.0]);
        if alphas.is_empty() || alphas.iter().any(|a| !a.is_finite()) {
            return Err(Failure::Config("alpha values must be finite and non-empty".into()));
        }
        Ok(alphas)
    }

    pub fn m(&self, default: usize) -> Result<usize, Failure> {
        let m = self.m.unwrap_or(default);
        if !(1..=20).contains(&m) {
            return Err(Failure::Config(format!("m must lie in 1..=20, got {m}")));
        }
        Ok(m)
    }

    pub fn width(&self) -> Result<Option<f64>, Failure> {
        match self.width {
            Some(w) if !(w.is_finite() && w > 0.0) => Err(Failure::Config(format!("W must be > 0, got {w}"))),
            w => Ok(w),
        }
    }

    pub fn degree(&self) -> Result<usize, Failure> {
        let d = self.degree.unwrap_or(warmstart::qet::DEFAULT_DEGREE);
        if d < 2 || d % 2 == 1 {
            return Err(Failure::Config(format!("degree must be even and >= 2, got {d}")));
        }
        Ok(d)
    }

    pub fn policy(&self) -> Result<DecompositionPolicy, Failure> {
        match &self.policy {
            None => Ok(DecompositionPolicy::default()),
            Some(path) => DecompositionPolicy::from_json(&read(path)?)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display()))),
        }
    }

    pub fn measure(&self) -> OverlapMeasure {
        match self.measure {
            Some(MeasureArg::Amplitude) => OverlapMeasure::Amplitude,
            _ => OverlapMeasure::Probability,
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }
}

fn positive(name: &str, value: f64) -> Result<f64, Failure> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Failure::Config(format!("{name} must be finite and > 0, got {value}")))
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}
