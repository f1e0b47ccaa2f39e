use std::path::PathBuf;

use qlmass_core::embedding::PointGrid;
use qlmass_core::mass::DEFAULT_AXIS_POINTS;
use qlmass_core::{DEFAULT_TOL, MIN_NODES};
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Embed,
    Mass,
    Check,
}

/// Which κ values to use for the hyperbolic bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaChoice {
    /// Per-command default: none for `embed`, the default grid for `mass`.
    Default,
    Single(f64),
    /// The default log-spaced grid with this many values.
    Grid(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Points {
    /// The axis midpoint only.
    Center,
    /// Evenly spaced interior axis points.
    Grid,
}

impl Points {
    pub fn grid(self) -> PointGrid {
        match self {
            Self::Center => PointGrid::Center,
            Self::Grid => PointGrid::Axis(DEFAULT_AXIS_POINTS),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

/// Everything a subcommand needs; echoed into JSON reports.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub profile: Option<PathBuf>,
    pub domains: Vec<PathBuf>,
    pub presets: Vec<String>,
    /// Node count for generated metrics and domains.
    pub resolution: usize,
    pub kappa: KappaChoice,
    pub points: Option<Points>,
    /// First seed of the fill-in sweep.
    pub seed: u64,
    /// Number of seeds in the fill-in sweep.
    pub seeds: u64,
    pub tol: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            profile: None,
            domains: Vec::new(),
            presets: Vec::new(),
            resolution: match command {
                Command::Check => 32,
                _ => 1024,
            },
            kappa: KappaChoice::Default,
            points: None,
            seed: 0,
            seeds: 1000,
            tol: DEFAULT_TOL,
            out: None,
            format: Format::Json,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolution < MIN_NODES {
            return Err(Error::Config(format!("resolution {} is below the minimum {MIN_NODES}", self.resolution)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tol)));
        }
        match self.kappa {
            KappaChoice::Single(k) if !(k > 0.0 && k.is_finite()) => {
                return Err(Error::Config(format!("kappa must be positive, got {k}")))
            }
            KappaChoice::Grid(0) => return Err(Error::Config("kappa grid needs at least one value".into())),
            _ => {}
        }
        Ok(())
    }
}
