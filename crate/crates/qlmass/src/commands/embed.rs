use std::fs;
use std::io::Write;
use std::path::Path;

use qlmass_core::embedding::{default_kappa_grid, embed_euclidean, embed_hyperbolic, LambdaUpper, PointGrid};
use qlmass_core::AxisymmetricMetric;
use serde::Serialize;

use super::{fail, upper_sweep, write_out, Failure};
use crate::config::{Command, KappaChoice, Points, RunConfig};
use crate::error::Error;
use crate::export;
use crate::io::{read_profile, Profile};
use crate::report::{to_json, Rows};

#[derive(Debug, Clone, Serialize)]
pub struct EmbedSummary {
    pub config: RunConfig,
    pub nodes: usize,
    pub total_h0_over_8pi: Option<f64>,
    pub isometry_residual: Option<f64>,
    pub euclidean_error: Option<String>,
    pub lambda_upper: Option<LambdaUpper>,
}

fn hyperbolic(m: &AxisymmetricMetric, kappa: KappaChoice, grid: PointGrid) -> qlmass_core::Result<Option<LambdaUpper>> {
    let kappas = match kappa {
        KappaChoice::Default => return Ok(None),
        KappaChoice::Single(k) => vec![k],
        KappaChoice::Grid(n) => default_kappa_grid(m, n),
    };
    upper_sweep(m, &kappas, grid).map(Some)
}

/// Writes `<stem>_r3.csv`, `<stem>_r3.obj`, and with a κ choice
/// `<stem>_h3.csv` (at the minimizing κ) and `<stem>_upper.csv`, plus
/// `<stem>_summary.json`. Prints `key,value` totals.
pub fn run_embed(config: &RunConfig, out: &mut dyn Write) -> Result<(), Failure> {
    let fail = fail(Command::Embed);
    let path = config.profile.as_deref().ok_or_else(|| Failure::new(2, "embed needs --profile"))?;
    let m = match read_profile(path, config.tol).map_err(&fail)? {
        Profile::Metric(m) => m,
        Profile::Radial(_) => {
            return Err(Failure::new(2, format!("{}: embed needs an s,f boundary profile", path.display())))
        }
    };
    let dir = config.out.as_deref().unwrap_or(Path::new("qlmass-out"));
    fs::create_dir_all(dir).map_err(|e| fail(Error::io(dir)(e)))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("profile");
    let file = |suffix: &str| dir.join(format!("{stem}_{suffix}"));

    let mut rows = Rows::default();
    let mut summary = EmbedSummary {
        config: config.clone(),
        nodes: m.nodes(),
        total_h0_over_8pi: None,
        isometry_residual: None,
        euclidean_error: None,
        lambda_upper: None,
    };
    let euclidean = embed_euclidean(&m);
    match &euclidean {
        Ok(surf) => {
            export::write(&file("r3.csv"), &export::surface_r3_csv(surf)).map_err(&fail)?;
            export::write(&file("r3.obj"), &export::surface_r3_obj(surf, export::OBJ_AZIMUTHS)).map_err(&fail)?;
            summary.total_h0_over_8pi = Some(surf.total_mean_curvature_over_8pi());
            summary.isometry_residual = Some(surf.isometry_residual());
            rows.push("total_H0_over_8pi", surf.total_mean_curvature_over_8pi());
        }
        Err(e) => summary.euclidean_error = Some(e.to_string()),
    }

    let grid = config.points.unwrap_or(Points::Center).grid();
    let upper = hyperbolic(&m, config.kappa, grid).map_err(|e| fail(e.into()))?;
    if let Some(u) = &upper {
        let surf = embed_hyperbolic(&m, u.kappa).map_err(|e| fail(e.into()))?;
        export::write(&file("h3.csv"), &export::surface_h3_csv(&surf)).map_err(&fail)?;
        let mut sweep = String::from("kappa,axis_position,lambda_upper\n");
        for e in &u.evaluations {
            sweep.push_str(&format!("{},{},{}\n", e.kappa, e.axis_position, e.value));
        }
        export::write(&file("upper.csv"), &sweep).map_err(&fail)?;
        rows.push("lambda_upper", u.value);
        rows.push("kappa", u.kappa);
    }
    summary.lambda_upper = upper;

    let json = to_json(&summary).map_err(|source| fail(Error::Json { path: file("summary.json"), source }))?;
    export::write(&file("summary.json"), &json).map_err(&fail)?;
    write_out(out, &rows.to_csv())?;
    match euclidean {
        Ok(_) => Ok(()),
        Err(e) => Err(Failure::new(3, e.to_string())),
    }
}
