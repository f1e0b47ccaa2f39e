use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use qlmass_core::conformal::{conformal_laws, doubling_construct, solve_conformal, Bc, BoundaryConditions};
use qlmass_core::fillins::{
    flatness_defect, random_radial_fillin, schwarzschild_band, shitam_check, RandomFillinParams,
};
use qlmass_core::{BoundaryTag, InnerRole, RadialDomain, ScalarField};
use rayon::prelude::*;
use serde::Serialize;

use super::{fail, write_out, Failure};
use crate::config::{Command, Format, RunConfig};
use crate::error::Error;
use crate::export;
use crate::report::{to_json, Rows};

/// Slack on `∫ H₀ − ∫ H ≥ 0` for roundoff.
pub const GAP_SLACK: f64 = 1e-9;
/// Flatness required of fill-ins detected as equality cases.
pub const RIGIDITY_TOL: f64 = 1e-4;
/// Required error reduction per mesh halving.
pub const CONVERGENCE_RATIO: f64 = 3.0;
/// Tolerance on the outer boundary flux of the shell harmonic.
pub const FLUX_TOL: f64 = 1e-3;
/// Tolerance on the doubling gluing identities.
pub const GLUING_TOL: f64 = 1e-8;
/// Agreement of the transformation law with the directly deformed curvature.
pub const LAWS_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub name: String,
    pub passed: bool,
    pub metrics: BTreeMap<String, f64>,
    pub message: Option<String>,
}

impl PropertyResult {
    fn new(name: &str, passed: bool, metrics: &[(&str, f64)]) -> Self {
        Self {
            name: name.to_string(),
            passed,
            metrics: metrics.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            message: None,
        }
    }

    fn errored(name: &str, e: qlmass_core::Error) -> Self {
        Self { name: name.to_string(), passed: false, metrics: BTreeMap::new(), message: Some(e.to_string()) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub config: RunConfig,
    pub passed: bool,
    pub properties: Vec<PropertyResult>,
}

impl CheckReport {
    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn rows(&self) -> Rows {
        let mut rows = Rows::default();
        for p in &self.properties {
            rows.push(p.name.clone(), p.passed);
            for (k, v) in &p.metrics {
                rows.push(format!("{}.{k}", p.name), *v);
            }
        }
        rows.push("all", self.passed);
        rows
    }
}

/// `∫ H₀ − ∫ H` over seeded fill-ins, with flatness of the equality cases.
/// The flat unit ball is added as a control that must register as an
/// equality case.
pub fn fillin_sweep(first_seed: u64, count: u64) -> PropertyResult {
    let nodes = RandomFillinParams::default().nodes;
    let gap_and_flatness =
        |d: &RadialDomain| -> qlmass_core::Result<(f64, f64)> { Ok((shitam_check(d)?.gap, flatness_defect(d))) };
    let control = match RadialDomain::flat_ball(1.0, nodes).and_then(|d| gap_and_flatness(&d)) {
        Ok(c) => c,
        Err(e) => return PropertyResult::errored("fillin_sweep", e),
    };
    let results: Vec<qlmass_core::Result<(f64, f64)>> = (first_seed..first_seed.saturating_add(count))
        .into_par_iter()
        .map(|seed| gap_and_flatness(&random_radial_fillin(seed, nodes)?))
        .chain(rayon::iter::once(Ok(control)))
        .collect();
    let mut min_gap = f64::INFINITY;
    let mut equality_cases = 0u32;
    let mut equality_flatness: f64 = 0.0;
    for r in results {
        match r {
            Ok((gap, flat)) => {
                min_gap = min_gap.min(gap);
                if gap < 1e-6 {
                    equality_cases += 1;
                    equality_flatness = equality_flatness.max(flat);
                }
            }
            Err(e) => return PropertyResult::errored("fillin_sweep", e),
        }
    }
    let passed = min_gap >= -GAP_SLACK && equality_flatness < RIGIDITY_TOL && control.0 < 1e-6;
    PropertyResult::new(
        "fillin_sweep",
        passed,
        &[
            ("instances", count as f64),
            ("min_gap", min_gap),
            ("control_gap", control.0),
            ("equality_cases", f64::from(equality_cases)),
            ("max_equality_flatness", equality_flatness),
        ],
    )
}

/// Max-node error against `1.1 − 0.2/ρ` on the flat shell `1 ≤ ρ ≤ 2` and
/// the flux at `ρ = 2`.
pub fn shell_harmonic_error(n: usize) -> qlmass_core::Result<(f64, f64)> {
    let d = RadialDomain::from_fn(n, 1.0, 2.0, InnerRole::Cut, |r| (r, 1.0, 0.0))?;
    let bc = BoundaryConditions::new(Bc::Dirichlet(1.0), Bc::Dirichlet(0.9));
    let s = solve_conformal(&d, &ScalarField::zeros(n), &ScalarField::zeros(n), &bc)?;
    let err = d.r().iter().zip(s.u.values()).map(|(r, u)| (u - (1.1 - 0.2 / r)).abs()).fold(0.0, f64::max);
    Ok((err, s.mean_normal_derivative(BoundaryTag::Outer)))
}

/// Refinement study at `n`, `2n`, `4n`.
pub fn shell_harmonic(n: usize) -> PropertyResult {
    let study: qlmass_core::Result<Vec<(f64, f64)>> =
        [n, 2 * n, 4 * n].par_iter().map(|&k| shell_harmonic_error(k)).collect();
    let study = match study {
        Ok(s) => s,
        Err(e) => return PropertyResult::errored("shell_harmonic", e),
    };
    let ratios = [study[0].0 / study[1].0, study[1].0 / study[2].0];
    let flux = study[2].1;
    let passed = ratios.iter().all(|&r| r >= CONVERGENCE_RATIO) && (flux - 0.05).abs() < FLUX_TOL;
    PropertyResult::new(
        "shell_harmonic",
        passed,
        &[
            ("error_n", study[0].0),
            ("error_2n", study[1].0),
            ("error_4n", study[2].0),
            ("ratio_n_2n", ratios[0]),
            ("ratio_2n_4n", ratios[1]),
            ("outer_flux", flux),
        ],
    )
}

/// Gluing identities, margin and shrinking deficit of the doubling on the
/// Schwarzschild band `m = 1`, `R = 3`.
pub fn doubling(nodes: usize) -> PropertyResult {
    let run = || -> qlmass_core::Result<PropertyResult> {
        let d = schwarzschild_band(1.0, 3.0, nodes)?;
        let reports = [0.2, 0.1, 0.05].map(|e| doubling_construct(&d, e));
        let [a, b, c] = reports;
        let (a, b, c) = (a?, b?, c?);
        let passed = b.metric_mismatch < GLUING_TOL
            && b.curvature_sum < GLUING_TOL
            && b.margin > 0.0
            && a.eta > b.eta
            && b.eta > c.eta;
        Ok(PropertyResult::new(
            "doubling",
            passed,
            &[
                ("metric_mismatch", b.metric_mismatch),
                ("curvature_sum", b.curvature_sum),
                ("margin", b.margin),
                ("eta_0.2", a.eta),
                ("eta_0.1", b.eta),
                ("eta_0.05", c.eta),
            ],
        ))
    };
    run().unwrap_or_else(|e| PropertyResult::errored("doubling", e))
}

/// Scalar curvature from the conformal transformation law against the
/// curvature of the explicitly deformed warped product, on a spherical cap.
pub fn conformal_law_consistency(nodes: usize) -> PropertyResult {
    let run = || -> qlmass_core::Result<PropertyResult> {
        let d = RadialDomain::sphere_cap(1.0, nodes)?;
        let u = ScalarField::from_fn(d.r(), |r| 1.0 + 0.2 * r * r);
        let (r_new, _) = conformal_laws(&d, &u, None)?;
        let direct = d.conformally_deformed(u.values())?.scalar_curvature();
        // the center is a removable singularity of the warped formula
        let err = r_new.values().iter().zip(&direct).skip(1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok(PropertyResult::new("conformal_laws", err < LAWS_TOL, &[("max_deviation", err)]))
    };
    run().unwrap_or_else(|e| PropertyResult::errored("conformal_laws", e))
}

pub fn run_check(config: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let fail = fail(Command::Check);
    let n = config.resolution;
    let properties = vec![
        fillin_sweep(config.seed, config.seeds),
        shell_harmonic(n),
        doubling(16 * n),
        conformal_law_consistency(16 * n),
    ];
    for p in &properties {
        log::info!("{}: {}", p.name, if p.passed { "pass" } else { "fail" });
    }
    let passed = properties.iter().all(|p| p.passed);
    let report = CheckReport { config: config.clone(), passed, properties };
    let text = match config.format {
        Format::Json => to_json(&report).map_err(|source| fail(Error::Json { path: "<report>".into(), source }))?,
        Format::Csv => report.rows().to_csv(),
    };
    if let Some(path) = &config.out {
        export::write(Path::new(path), &text).map_err(&fail)?;
    }
    write_out(out, &text)?;
    if passed {
        Ok(())
    } else {
        let failed: Vec<&str> = report.properties.iter().filter(|p| !p.passed).map(|p| p.name.as_str()).collect();
        Err(Failure::new(1, format!("failed properties: {}", failed.join(", "))))
    }
}
