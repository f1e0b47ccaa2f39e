//! Argument parsing. Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | `check`: a property failed |
//! | 2 | invalid input or configuration |
//! | 3 | `embed`: the profile does not embed |
//! | 4 | `mass`: a solve or embedding failed |

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{Command, Format, KappaChoice, Points, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "qlmass", version, about = "Quasi-local mass brackets on axisymmetric and tetrahedral data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Embed a boundary metric in R³ (and H³ with --kappa/--kappa-grid).
    Embed(EmbedArgs),
    /// Bracket the variational mass of a domain or preset.
    Mass(MassArgs),
    /// Run the property suite.
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct KappaArgs {
    /// Single curvature scale κ of the hyperbolic space H³(−κ²).
    #[arg(long, conflicts_with = "kappa_grid")]
    pub kappa: Option<f64>,
    /// Number of values in the default log-spaced κ grid.
    #[arg(long)]
    pub kappa_grid: Option<usize>,
    /// Base points of the hyperbolic bound.
    #[arg(long = "p", value_enum)]
    pub points: Option<Points>,
}

impl KappaArgs {
    fn choice(&self) -> KappaChoice {
        match (self.kappa, self.kappa_grid) {
            (Some(k), _) => KappaChoice::Single(k),
            (None, Some(n)) => KappaChoice::Grid(n),
            (None, None) => KappaChoice::Default,
        }
    }
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Boundary metric, an `s,f` profile.
    #[arg(long)]
    pub profile: PathBuf,
    #[command(flatten)]
    pub kappa: KappaArgs,
    /// Output directory.
    #[arg(long, default_value = "qlmass-out")]
    pub out: PathBuf,
    /// Closure tolerance for the profile.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct MassArgs {
    /// Preset: round:ρ, schwarzschild:m,R, cap:r0 or dumbbell:d. Repeat for
    /// several boundary components.
    #[arg(long)]
    pub preset: Vec<String>,
    /// Radial `r,h` profile or tet mesh. Repeat for several components.
    #[arg(long)]
    pub domain: Vec<PathBuf>,
    /// Boundary metric (`s,f`) for a tet domain.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    /// Node count for presets and round boundary metrics.
    #[arg(long)]
    pub resolution: Option<usize>,
    #[command(flatten)]
    pub kappa: KappaArgs,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    /// Number of seeded fill-ins.
    #[arg(long)]
    pub seeds: Option<u64>,
    /// First seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Coarsest radial resolution of the convergence study (N, 2N, 4N).
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl Cli {
    pub fn into_config(self) -> RunConfig {
        match self.command {
            Sub::Embed(a) => {
                let mut c = RunConfig::new(Command::Embed);
                c.profile = Some(a.profile);
                c.kappa = a.kappa.choice();
                c.points = a.kappa.points;
                c.out = Some(a.out);
                if let Some(t) = a.tol {
                    c.tol = t;
                }
                c
            }
            Sub::Mass(a) => {
                let mut c = RunConfig::new(Command::Mass);
                c.presets = a.preset;
                c.domains = a.domain;
                c.profile = a.profile;
                if let Some(r) = a.resolution {
                    c.resolution = r;
                }
                c.kappa = a.kappa.choice();
                c.points = a.kappa.points;
                c.format = a.format;
                c.out = a.out;
                if let Some(t) = a.tol {
                    c.tol = t;
                }
                c
            }
            Sub::Check(a) => {
                let mut c = RunConfig::new(Command::Check);
                if let Some(s) = a.seeds {
                    c.seeds = s;
                }
                if let Some(s) = a.seed {
                    c.seed = s;
                }
                if let Some(r) = a.resolution {
                    c.resolution = r;
                }
                c.format = a.format;
                c.out = a.out;
                c
            }
        }
    }
}
