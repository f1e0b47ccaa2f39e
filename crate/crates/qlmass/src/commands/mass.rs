use std::io::Write;
use std::path::Path;

use qlmass_core::conformal::DomainRef;
use qlmass_core::embedding::{default_kappa_grid, PointGrid};
use qlmass_core::mass::{
    additivity_combine, brown_york_mass, lambda_bracket_with_upper, round_boundary,
    variational_mass_bracket_with_upper, CombinedBracket, LambdaBracket, MassBracket, DEFAULT_KAPPA_COUNT,
};
use qlmass_core::presets::Preset;
use qlmass_core::{AxisymmetricMetric, RadialDomain, Side, TetDomain};
use serde::Serialize;

use super::{fail, upper_sweep, write_out, Failure};
use crate::config::{Command, Format, KappaChoice, Points, RunConfig};
use crate::error::{Error, Result};
use crate::export;
use crate::io::{read_profile, read_tet, Profile};
use crate::report::{to_json, Rows};

#[derive(Debug, Clone, Serialize)]
pub struct ComponentReport {
    pub name: String,
    pub brown_york_mass: Option<f64>,
    /// Present when the component carries a fill-in.
    pub bracket: Option<MassBracket>,
    /// Present when it does not; only Λ can be bracketed then.
    pub lambda: Option<LambdaBracket>,
}

#[derive(Debug, Clone, Serialize)]
pub struct MassReport {
    pub config: RunConfig,
    pub components: Vec<ComponentReport>,
    /// Sum over components, when there is more than one.
    pub combined: Option<CombinedBracket>,
}

enum Fill {
    Radial(RadialDomain),
    Tet(TetDomain),
    None,
}

struct Component {
    name: String,
    fill: Fill,
    target: AxisymmetricMetric,
}

fn load_components(config: &RunConfig) -> Result<Vec<Component>> {
    let n = config.resolution;
    let mut components = Vec::new();
    for p in &config.presets {
        let preset = Preset::parse(p)?;
        let fill = preset.domain(n)?.map_or(Fill::None, Fill::Radial);
        components.push(Component { name: preset.name(), fill, target: preset.boundary_metric(n)? });
    }
    for path in &config.domains {
        let name = path.display().to_string();
        if path.extension().is_some_and(|e| e == "csv") {
            match read_profile(path, config.tol)? {
                Profile::Radial(d) => {
                    let target = round_boundary(&d, n)?;
                    components.push(Component { name, fill: Fill::Radial(d), target });
                }
                Profile::Metric(_) => return Err(Error::Config(format!("{name}: --domain needs an r,h profile"))),
            }
        } else {
            let profile = config.profile.as_deref().ok_or_else(|| {
                Error::Config(format!("{name}: a tet domain needs its boundary metric via --profile"))
            })?;
            let target = match read_profile(profile, config.tol)? {
                Profile::Metric(m) => m,
                Profile::Radial(_) => return Err(Error::Config("--profile must be an s,f boundary metric".into())),
            };
            components.push(Component { name, fill: Fill::Tet(read_tet(path)?), target });
        }
    }
    if components.is_empty() {
        return Err(Error::Config("mass needs at least one --preset or --domain".into()));
    }
    Ok(components)
}

fn kappas(config: &RunConfig, m: &AxisymmetricMetric) -> Vec<f64> {
    match config.kappa {
        KappaChoice::Default => default_kappa_grid(m, DEFAULT_KAPPA_COUNT),
        KappaChoice::Single(k) => vec![k],
        KappaChoice::Grid(n) => default_kappa_grid(m, n),
    }
}

fn component_report(c: &Component, config: &RunConfig, grid: PointGrid) -> qlmass_core::Result<ComponentReport> {
    let upper = upper_sweep(&c.target, &kappas(config, &c.target), grid)?;
    let domain = match &c.fill {
        Fill::Radial(d) => Some(DomainRef::Radial(d)),
        Fill::Tet(d) => Some(DomainRef::Tet(d)),
        Fill::None => None,
    };
    let Some(domain) = domain else {
        let lambda = lambda_bracket_with_upper(&c.target, &[], upper)?;
        return Ok(ComponentReport {
            name: c.name.clone(),
            brown_york_mass: None,
            bracket: None,
            lambda: Some(lambda),
        });
    };
    let bracket = variational_mass_bracket_with_upper(domain, &c.target, upper)?;
    // a radial domain has constant H on its round boundary
    let brown_york_mass = match &c.fill {
        Fill::Radial(d) if c.target.min_gauss_curvature().1 > 0.0 => d
            .boundary_mean_curvature(Side::Outer)
            .and_then(|h| brown_york_mass(&c.target, &vec![h; c.target.nodes()]).ok()),
        _ => None,
    };
    Ok(ComponentReport { name: c.name.clone(), brown_york_mass, bracket: Some(bracket), lambda: None })
}

fn push_rows(rows: &mut Rows, prefix: &str, c: &ComponentReport) {
    if let Some(b) = &c.bracket {
        rows.push(format!("{prefix}lambda_lower"), b.lambda_lower);
        rows.push(format!("{prefix}lambda_upper"), b.lambda_upper);
        rows.push(format!("{prefix}total_H_over_8pi"), b.total_h_over_8pi);
        rows.push(format!("{prefix}mass_lower"), b.mass_lower);
        rows.push(format!("{prefix}mass_upper"), b.mass_upper);
    } else if let Some(l) = &c.lambda {
        rows.push(format!("{prefix}lambda_lower"), l.lower);
        rows.push(format!("{prefix}lambda_upper"), l.upper);
    }
    if let Some(m) = c.brown_york_mass {
        rows.push(format!("{prefix}brown_york_mass"), m);
    }
}

impl MassReport {
    pub fn rows(&self) -> Rows {
        let mut rows = Rows::default();
        match &self.combined {
            Some(c) => {
                rows.push("lambda_lower", c.lambda_lower);
                rows.push("lambda_upper", c.lambda_upper);
                rows.push("total_H_over_8pi", c.total_h_over_8pi);
                rows.push("mass_lower", c.mass_lower);
                rows.push("mass_upper", c.mass_upper);
                for (i, comp) in self.components.iter().enumerate() {
                    push_rows(&mut rows, &format!("component{i}."), comp);
                }
            }
            None => push_rows(&mut rows, "", &self.components[0]),
        }
        rows
    }
}

/// Brackets every component; several components are combined by
/// additivity. Per-κ upper-bound evaluations run in parallel.
pub fn run_mass(config: &RunConfig, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    let fail = fail(Command::Mass);
    let components = load_components(config).map_err(&fail)?;
    let grid = config.points.unwrap_or(Points::Grid).grid();
    let reports = components
        .iter()
        .map(|c| component_report(c, config, grid).map_err(|e| fail(e.into())))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let combined = if reports.len() > 1 {
        let brackets: Vec<MassBracket> = reports
            .iter()
            .enumerate()
            .map(|(index, r)| r.bracket.clone().ok_or(qlmass_core::Error::EmptyComponent { index }))
            .collect::<qlmass_core::Result<_>>()
            .map_err(|e| fail(e.into()))?;
        Some(additivity_combine(&brackets).map_err(|e| fail(e.into()))?)
    } else {
        None
    };
    let report = MassReport { config: config.clone(), components: reports, combined };
    let text = match config.format {
        Format::Json => to_json(&report).map_err(|source| fail(Error::Json { path: "<report>".into(), source }))?,
        Format::Csv => report.rows().to_csv(),
    };
    if let Some(path) = &config.out {
        export::write(Path::new(path), &text).map_err(&fail)?;
    }
    write_out(out, &text)
}
