//! Acceptance criteria 1-8. Each criterion is evaluated in full, reported as
//! one `[PASS]`/`[FAIL]` line on stderr (bypassing the test harness capture so
//! the lines show up in plain `cargo test` output), and asserted at the end.

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use qlmass_core::conformal::{doubling_construct, solve_conformal, Bc, BoundaryConditions, DomainRef};
use qlmass_core::embedding::{
    default_kappa_grid, embed_euclidean, lambda_upper_bound, lambda_upper_grid, HyperbolicPoint, PointGrid,
};
use qlmass_core::fillins::{flatness_defect, random_radial_fillin, schwarzschild_band, shitam_check};
use qlmass_core::geometry::mesh::{shell_mesh, shell_vertex_radii};
use qlmass_core::mass::{
    brown_york_mass, lambda_bracket, round_boundary, total_h_over_8pi, variational_mass_bracket, DEFAULT_AXIS_POINTS,
    DEFAULT_KAPPA_COUNT,
};
use qlmass_core::presets::Preset;
use qlmass_core::{AxisymmetricMetric, BoundaryTag, InnerRole, RadialDomain, ScalarField, Side};

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn report(n: usize, title: &str, o: &Outcome) {
    let tag = if o.passed { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "[{tag}] criterion {n} {title}: {}", o.detail);
}

/// ∫H₀ dσ = 8π for the unit sphere at 1024 nodes, under a second.
fn round_sphere_totals() -> Outcome {
    let start = Instant::now();
    let m = AxisymmetricMetric::round(1.0, 1024).unwrap();
    let total = embed_euclidean(&m).unwrap().total_mean_curvature();
    let elapsed = start.elapsed().as_secs_f64();
    let rel = (total - 8.0 * PI).abs() / (8.0 * PI);
    outcome(rel < 1e-6 && elapsed < 1.0, format!("relative error {rel:.3e} (< 1e-6), {elapsed:.3} s (< 1 s)"))
}

fn brown_york_schwarzschild(r: f64, nodes: usize) -> f64 {
    let band = schwarzschild_band(1.0, r, nodes).unwrap();
    let h = band.boundary_mean_curvature(Side::Outer).unwrap();
    let m = round_boundary(&band, nodes).unwrap();
    brown_york_mass(&m, &vec![h; nodes]).unwrap()
}

/// m_BY = 3(1 − √(1/3)) at R = 3, decreasing toward 1 over R = 10, 100.
fn brown_york() -> Outcome {
    let exact = 3.0 * (1.0 - (1.0f64 / 3.0).sqrt());
    let values: Vec<f64> = [3.0, 10.0, 100.0].iter().map(|&r| brown_york_schwarzschild(r, 2048)).collect();
    let err = (values[0] - exact).abs();
    let decreasing = values.windows(2).all(|w| w[0] > w[1]) && values[2] > 1.0;
    outcome(
        err < 1e-3 && decreasing,
        format!(
            "m_BY(3) = {:.6} vs {exact:.6} (|err| {err:.2e} < 1e-3); m_BY(10) = {:.6}, m_BY(100) = {:.6} decreasing above 1",
            values[0], values[1], values[2]
        ),
    )
}

/// Unit sphere: √2 at κ = 1, about 1 at κ = 1e-3, at least 1 on the default grid.
fn hyperbolic_bound() -> Outcome {
    let m = AxisymmetricMetric::round(1.0, 1024).unwrap();
    let center = |k: f64| {
        let surf = qlmass_core::embedding::embed_hyperbolic(&m, k).unwrap();
        lambda_upper_bound(&m, k, &surf.center()).unwrap()
    };
    let at_one = center(1.0);
    let near_zero = center(1e-3);
    let grid = default_kappa_grid(&m, DEFAULT_KAPPA_COUNT);
    let sweep = lambda_upper_grid(&m, &grid, PointGrid::Axis(DEFAULT_AXIS_POINTS)).unwrap();
    let min = sweep.evaluations.iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
    let complete = sweep.skipped_kappas.is_empty() && sweep.evaluations.len() == grid.len() * DEFAULT_AXIS_POINTS;
    let e1 = (at_one - 2.0f64.sqrt()).abs();
    let e0 = (near_zero - 1.0).abs();
    // off-axis points are never on the grid, so also probe one directly
    let off_axis = {
        let surf = qlmass_core::embedding::embed_hyperbolic(&m, 1.0).unwrap();
        let w = 0.5 * surf.axis_length();
        surf.lambda_upper(&HyperbolicPoint::from_fermi(1.0, w, 0.3, 0.0)).unwrap()
    };
    outcome(
        e1 < 1e-4 && e0 < 1e-3 && min >= 1.0 && complete && off_axis >= 1.0,
        format!(
            "kappa=1: {at_one:.6} (|err| {e1:.2e} < 1e-4); kappa=1e-3: {near_zero:.6} (|err| {e0:.2e} < 1e-3); \
             grid min {min:.6} >= 1 over {} points",
            sweep.evaluations.len()
        ),
    )
}

/// ∫H₀ − ∫H ≥ −1e-9 on 1000 seeded fill-ins; equality cases are flat.
fn fillin_sweep() -> Outcome {
    let start = Instant::now();
    let mut min_gap = f64::INFINITY;
    let mut equality = 0;
    let mut worst_flatness: f64 = 0.0;
    let mut check = |d: &RadialDomain| {
        let gap = shitam_check(d).unwrap().gap;
        min_gap = min_gap.min(gap);
        if gap < 1e-6 {
            equality += 1;
            worst_flatness = worst_flatness.max(flatness_defect(d));
        }
    };
    for seed in 0..1000 {
        check(&random_radial_fillin(seed, 64).unwrap());
    }
    // the flat ball is the equality case and must be detected as one
    check(&RadialDomain::flat_ball(1.0, 64).unwrap());
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        min_gap >= -1e-9 && equality >= 1 && worst_flatness < 1e-4 && elapsed < 30.0,
        format!(
            "min gap {min_gap:.3e} >= -1e-9, {equality} equality case(s) with max|h - r| {worst_flatness:.2e} < 1e-4, \
             {elapsed:.2} s (< 30 s)"
        ),
    )
}

fn radial_shell(n: usize) -> (f64, f64) {
    let d = RadialDomain::from_fn(n, 1.0, 2.0, InnerRole::Cut, |r| (r, 1.0, 0.0)).unwrap();
    let bc = BoundaryConditions::new(Bc::Dirichlet(1.0), Bc::Dirichlet(0.9));
    let s = solve_conformal(&d, &ScalarField::zeros(n), &ScalarField::zeros(n), &bc).unwrap();
    let err = d.r().iter().zip(s.u.values()).map(|(r, u)| (u - (1.1 - 0.2 / r)).abs()).fold(0.0, f64::max);
    (err, s.mean_normal_derivative(BoundaryTag::Outer))
}

fn fem_shell(level: usize) -> (f64, f64) {
    let d = shell_mesh(1.0, 2.0, level).unwrap();
    let n = d.vertex_count();
    let bc = BoundaryConditions::new(Bc::Dirichlet(1.0), Bc::Dirichlet(0.9));
    let s = solve_conformal(&d, &ScalarField::zeros(n), &ScalarField::zeros(n), &bc).unwrap();
    let radii = shell_vertex_radii(1.0, 2.0, level);
    let err = radii.iter().zip(s.u.values()).map(|(r, u)| (u - (1.1 - 0.2 / r)).abs()).fold(0.0, f64::max);
    (err, s.mean_normal_derivative(BoundaryTag::Outer))
}

/// Shell harmonic 1.1 − 0.2/ρ: error ratio ≥ 3 per halving, flux 0.05 at ρ = 2.
fn conformal_convergence() -> Outcome {
    let radial: Vec<(f64, f64)> = [64, 128, 256].iter().map(|&n| radial_shell(n)).collect();
    let fem: Vec<(f64, f64)> = [2, 3, 4].iter().map(|&l| fem_shell(l)).collect();
    let ratios = |v: &[(f64, f64)]| -> Vec<f64> { v.windows(2).map(|w| w[0].0 / w[1].0).collect() };
    let (rr, fr) = (ratios(&radial), ratios(&fem));
    let (rf, ff) = (radial[2].1, fem[2].1);
    let passed = rr.iter().chain(&fr).all(|&r| r >= 3.0) && (rf - 0.05).abs() < 1e-3 && (ff - 0.05).abs() < 1e-3;
    outcome(
        passed,
        format!(
            "radial 64/128/256 ratios {:.2}, {:.2}, flux {rf:.6}; FEM levels 2/3/4 ratios {:.2}, {:.2}, flux {ff:.6} \
             (ratios >= 3, |flux - 0.05| < 1e-3)",
            rr[0], rr[1], fr[0], fr[1]
        ),
    )
}

/// Doubling on Schwarzschild m = 1, R = 3 at ε = 0.1.
fn doubling() -> Outcome {
    let d = schwarzschild_band(1.0, 3.0, 2048).unwrap();
    let rep = doubling_construct(&d, 0.1).unwrap();
    let outer: Vec<usize> = (0..rep.g1.tags.len()).filter(|&i| rep.g1.tags[i] == BoundaryTag::Outer).collect();
    let pointwise = outer.iter().all(|&i| rep.g1.new_h[i] > rep.tilde.new_h[i]);
    let etas: Vec<f64> = [0.2, 0.1, 0.05].iter().map(|&e| doubling_construct(&d, e).unwrap().eta).collect();
    let passed = rep.metric_mismatch < 1e-8
        && rep.curvature_sum < 1e-8
        && pointwise
        && rep.margin > 0.0
        && etas[0] > etas[1]
        && etas[1] > etas[2];
    outcome(
        passed,
        format!(
            "metric mismatch {:.2e}, curvature sum {:.2e} (< 1e-8); H_g1 > H_g~ pointwise with margin {:.6}; \
             eta {:.6} > {:.6} > {:.6}",
            rep.metric_mismatch, rep.curvature_sum, rep.margin, etas[0], etas[1], etas[2]
        ),
    )
}

/// Ordered brackets for every preset; narrow and containing m_BY when convex.
fn bracket_coherence() -> Outcome {
    let n = 1024;
    let mut passed = true;
    let mut notes = Vec::new();
    for preset in Preset::all() {
        let target = preset.boundary_metric(n).unwrap();
        let kappas = default_kappa_grid(&target, 4 * DEFAULT_KAPPA_COUNT);
        let grid = PointGrid::Axis(DEFAULT_AXIS_POINTS);
        let convex = target.min_gauss_curvature().1 > 0.0;
        match preset.domain(n).unwrap() {
            Some(domain) => {
                let b = variational_mass_bracket(DomainRef::Radial(&domain), &target, Some(&kappas), grid).unwrap();
                let ordered = b.lambda_lower <= b.lambda_upper;
                let width = (b.lambda_upper - b.lambda_lower) / b.total_h_over_8pi;
                let h = domain.boundary_mean_curvature(Side::Outer).unwrap();
                let by = brown_york_mass(&target, &vec![h; n]).unwrap();
                let ok = ordered && (!convex || (width < 0.05 && b.contains(by, 1e-6)));
                passed &= ok;
                notes.push(format!(
                    "{}: [{:.6}, {:.6}] width {:.2e}, m_BY {by:.6} in [{:.6}, {:.6}]",
                    preset.name(),
                    b.lambda_lower,
                    b.lambda_upper,
                    width,
                    b.mass_lower,
                    b.mass_upper
                ));
            }
            None => {
                let b = lambda_bracket(&target, &[], Some(&kappas), grid).unwrap();
                passed &= b.lower <= b.upper && !convex;
                notes.push(format!("{}: [{}, {:.6}] (no fill-in, K < 0)", preset.name(), b.lower, b.upper));
            }
        }
    }
    outcome(passed, notes.join("; "))
}

/// total_H_over_8pi < lambda_lower with margin R(1 − √(1 − 2m/R)) growing in m.
fn horizon_strictness() -> Outcome {
    let r = 3.0;
    let mut margins = Vec::new();
    let mut max_err: f64 = 0.0;
    for m in [0.25, 0.5, 1.0] {
        let band = schwarzschild_band(m, r, 1024).unwrap();
        let target = round_boundary(&band, 1024).unwrap();
        let total = total_h_over_8pi(DomainRef::Radial(&band));
        let b =
            lambda_bracket(&target, &[("band", DomainRef::Radial(&band))], None, PointGrid::Axis(DEFAULT_AXIS_POINTS))
                .unwrap();
        let margin = b.lower - total;
        max_err = max_err.max((margin - r * (1.0 - (1.0 - 2.0 * m / r).sqrt())).abs());
        margins.push(margin);
    }
    let passed = margins[0] > 0.0 && margins.windows(2).all(|w| w[1] > w[0]) && max_err < 1e-4;
    outcome(
        passed,
        format!(
            "margins {:.6}, {:.6}, {:.6} for m = 0.25, 0.5, 1 (positive, increasing); max deviation from closed form {max_err:.2e} < 1e-4",
            margins[0], margins[1], margins[2]
        ),
    )
}

#[test]
fn acceptance_criteria() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 8] = [
        ("round-sphere totals", round_sphere_totals),
        ("Brown-York Schwarzschild", brown_york),
        ("hyperbolic upper bound", hyperbolic_bound),
        ("fill-in property sweep", fillin_sweep),
        ("conformal solver convergence", conformal_convergence),
        ("doubling construction", doubling),
        ("mass-bracket coherence", bracket_coherence),
        ("horizon strictness", horizon_strictness),
    ];
    let mut failed = Vec::new();
    for (i, (title, f)) in criteria.iter().enumerate() {
        let o = f();
        report(i + 1, title, &o);
        if !o.passed {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
