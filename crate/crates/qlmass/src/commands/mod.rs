mod check;
mod embed;
mod mass;

use std::io::Write;

use qlmass_core::embedding::{lambda_upper_at_kappa, LambdaUpper, PointGrid};
use qlmass_core::AxisymmetricMetric;
use rayon::prelude::*;

use crate::config::{Command, RunConfig};
use crate::error::Error;

pub use check::{run_check, CheckReport, PropertyResult};
pub use embed::{run_embed, EmbedSummary};
pub use mass::{run_mass, ComponentReport, MassReport};

/// Environment variable capping the worker threads of parallel sweeps.
pub const THREADS_ENV: &str = "QLMASS_THREADS";

/// A subcommand failure: the process exit code and a message for stderr.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        Self { code, message: message.into() }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

fn is_embedding_error(e: &qlmass_core::Error) -> bool {
    use qlmass_core::Error::*;
    matches!(e, NotEmbeddable { .. } | OdeBreakdown { .. } | CurvatureBoundViolated { .. } | PointNotEnclosed)
}

fn is_input_error(e: &qlmass_core::Error) -> bool {
    use qlmass_core::Error::*;
    matches!(
        e,
        TooFewNodes { .. }
            | InvalidGrid(_)
            | PoleClosureViolation { .. }
            | EndpointNotZero { .. }
            | NonPositiveInterior { .. }
            | RoleViolation(_)
            | NonRealizable { .. }
            | InvalidMesh(_)
            | NotInF
            | NotMinimalInner { .. }
            | InvalidRadii { .. }
            | NotAdmissible(_)
            | EmptyComponent { .. }
            | FieldSizeMismatch { .. }
            | InvalidParameter(_)
    )
}

/// Maps an error to the exit code of `command`.
pub fn exit_code(command: Command, e: &Error) -> i32 {
    match e {
        Error::Core(c) if is_input_error(c) => 2,
        Error::Core(c) if command == Command::Embed && is_embedding_error(c) => 3,
        Error::Core(_) if command == Command::Embed => 3,
        Error::Core(_) => 4,
        _ => 2,
    }
}

fn fail(command: Command) -> impl Fn(Error) -> Failure {
    move |e| Failure::new(exit_code(command, &e), e.to_string())
}

/// Runs the configured subcommand, writing its primary output to `out`.
/// Sweeps run on a pool capped by [`THREADS_ENV`] when it is set.
pub fn run(config: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    config.validate().map_err(fail(config.command))?;
    let threads = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0);
    let dispatch = |out: &mut Vec<u8>| match config.command {
        Command::Embed => run_embed(config, out),
        Command::Mass => run_mass(config, out),
        Command::Check => run_check(config, out),
    };
    let mut buffer = Vec::new();
    let result = match threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Failure::new(2, format!("cannot build thread pool: {e}")))?;
            pool.install(|| dispatch(&mut buffer))
        }
        None => dispatch(&mut buffer),
    };
    out.write_all(&buffer).map_err(|e| Failure::new(2, format!("cannot write output: {e}")))?;
    result
}

/// Parallel sweep of the hyperbolic upper bound, combined in grid order.
pub fn upper_sweep(m: &AxisymmetricMetric, kappas: &[f64], grid: PointGrid) -> qlmass_core::Result<LambdaUpper> {
    let results = kappas.par_iter().map(|&k| (k, lambda_upper_at_kappa(m, k, grid))).collect();
    LambdaUpper::from_results(results)
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), Failure> {
    out.write_all(text.as_bytes()).map_err(|e| Failure::new(2, format!("cannot write output: {e}")))
}
