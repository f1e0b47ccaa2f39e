use qlmass_core::conformal::{
    conformal_laws, doubling_construct, positivity_perturbation, scalar_flat_deformation, solve_conformal,
    weak_meanconvex_fix, Bc, BoundaryConditions,
};
use qlmass_core::fillins::schwarzschild_band;
use qlmass_core::{BoundaryTag, Error, InnerRole, RadialDomain, ScalarField, Side};

fn flat_shell(n: usize) -> RadialDomain {
    RadialDomain::from_fn(n, 1.0, 2.0, InnerRole::Cut, |r| (r, 1.0, 0.0)).unwrap()
}

fn shell_error(n: usize) -> (f64, f64) {
    let d = flat_shell(n);
    let bc = BoundaryConditions::new(Bc::Dirichlet(1.0), Bc::Dirichlet(0.9));
    let s = solve_conformal(&d, &ScalarField::zeros(n), &ScalarField::zeros(n), &bc).unwrap();
    let err = d.r().iter().zip(s.u.values()).map(|(r, u)| (u - (1.1 - 0.2 / r)).abs()).fold(0.0, f64::max);
    (err, s.normal_derivative_on(BoundaryTag::Outer).unwrap())
}

#[test]
fn flat_shell_harmonic_converges() {
    let errs: Vec<(f64, f64)> = [64, 128, 256].iter().map(|&n| shell_error(n)).collect();
    for w in errs.windows(2) {
        assert!(w[0].0 / w[1].0 >= 3.0, "{errs:?}");
    }
    assert!((errs[2].1 - 0.05).abs() < 1e-3, "{errs:?}");
}

#[test]
fn schwarzschild_neumann_horizon_gives_unit_factor() {
    let d = schwarzschild_band(1.0, 3.0, 256).unwrap();
    let n = d.nodes();
    let bc = BoundaryConditions::new(Bc::Dirichlet(1.0), Bc::Neumann(0.0));
    let r = ScalarField::new(d.scalar_curvature());
    let s = solve_conformal(&d, &r, &ScalarField::zeros(n), &bc).unwrap();
    assert!(s.u.values().iter().all(|u| (u - 1.0).abs() < 1e-9));
}

#[test]
fn unit_ball_source_problem() {
    let n = 512;
    let d = RadialDomain::flat_ball(1.0, n).unwrap();
    let s = solve_conformal(
        &d,
        &ScalarField::zeros(n),
        &ScalarField::constant(-1.0, n),
        &BoundaryConditions::dirichlet(0.0),
    )
    .unwrap();
    for (r, u) in d.r().iter().zip(s.u.values()) {
        assert!((u - (1.0 - r * r) / 6.0).abs() < 1e-5);
    }
    assert!(s.u.values()[..n - 1].iter().all(|&u| u > 0.0));
    assert!((s.normal_derivative_on(BoundaryTag::Outer).unwrap() + 1.0 / 3.0).abs() < 1e-4);
}

#[test]
fn pure_neumann_flat_is_ill_posed() {
    let d = flat_shell(32);
    let bc = BoundaryConditions::new(Bc::Neumann(0.0), Bc::Neumann(0.0));
    let err = solve_conformal(&d, &ScalarField::zeros(32), &ScalarField::zeros(32), &bc).unwrap_err();
    assert!(matches!(err, Error::IllPosed(_)));
}

#[test]
fn negative_scalar_curvature_rejected() {
    let d = flat_shell(32);
    let err = solve_conformal(
        &d,
        &ScalarField::constant(-1.0, 32),
        &ScalarField::zeros(32),
        &BoundaryConditions::dirichlet(1.0),
    )
    .unwrap_err();
    assert!(matches!(err, Error::NegativeScalarCurvature { .. }));
}

#[test]
fn nonpositive_factor_reported() {
    let d = flat_shell(32);
    let bc = BoundaryConditions::new(Bc::Dirichlet(1.0), Bc::Dirichlet(-1.0));
    let err = solve_conformal(&d, &ScalarField::zeros(32), &ScalarField::zeros(32), &bc).unwrap_err();
    assert!(matches!(err, Error::NonPositiveSolution { .. }));
}

#[test]
fn laws_identity_and_scaling() {
    let d = RadialDomain::flat_ball(1.0, 128).unwrap();
    let (r, rep) = conformal_laws(&d, &ScalarField::constant(1.0, 128), None).unwrap();
    assert!(r.values().iter().all(|v| v.abs() < 1e-8));
    assert!((rep.new_h[0] - rep.old_h[0]).abs() < 1e-10);
    assert!(rep.flags.boundary_metric_preserved);

    let c = 1.7;
    let (r, rep) = conformal_laws(&d, &ScalarField::constant(c, 128), None).unwrap();
    assert!(r.values().iter().all(|v| v.abs() < 1e-8));
    assert!((rep.new_h[0] - 2.0 / (c * c)).abs() < 1e-10);
    assert!(!rep.flags.boundary_metric_preserved);

    let err = conformal_laws(&d, &ScalarField::constant(0.0, 128), None).unwrap_err();
    assert!(matches!(err, Error::NonPositiveFactor { .. }));
}

#[test]
fn harmonic_factor_keeps_flat_shell_scalar_flat() {
    let n = 256;
    let d = flat_shell(n);
    let u = ScalarField::from_fn(d.r(), |r| 1.1 - 0.2 / r);
    let (r, rep) = conformal_laws(&d, &u, None).unwrap();
    assert!(r.values().iter().all(|v| v.abs() < 1e-4), "{:?}", r.max());
    // outer: H = 1, u = 1, du/dr = 0.05
    let outer = rep.tags.iter().position(|&t| t == BoundaryTag::Outer).unwrap();
    assert!((rep.new_h[outer] - 1.2).abs() < 1e-4);
}

#[test]
fn laws_match_explicit_warped_curvature() {
    let n = 400;
    let d = RadialDomain::sphere_cap(1.0, n).unwrap();
    let u = ScalarField::from_fn(d.r(), |r| 1.0 + 0.2 * r * r);
    let (r_new, _) = conformal_laws(&d, &u, None).unwrap();
    let deformed = d.conformally_deformed(u.values()).unwrap();
    let direct = deformed.scalar_curvature();
    let err = r_new.values().iter().zip(&direct).skip(1).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(err < 1e-3, "{err}");
}

/// Closed-form harmonic factor `φ = (A + B/ρ)/U` on Schwarzschild in isotropic
/// radius, `U = 1 + m/(2ρ)`, with `φ = φ_h` at the horizon and `1` outside.
fn isotropic_outer_h(m: f64, r_out: f64, phi_h: f64) -> (f64, f64) {
    let rho_o = {
        let b = r_out - m;
        0.5 * (b + (b * b - m * m).sqrt())
    };
    let rho_h = 0.5 * m;
    let u = |rho: f64| 1.0 + m / (2.0 * rho);
    // A + B/ρ_h = 2 φ_h, A + B/ρ_o = U(ρ_o)
    let b = (2.0 * phi_h - u(rho_o)) / (1.0 / rho_h - 1.0 / rho_o);
    let a = u(rho_o) - b / rho_o;
    let phi = |rho: f64| (a + b / rho) / u(rho);
    let dh = 1e-6 * rho_o;
    let dphi = (phi(rho_o + dh) - phi(rho_o - dh)) / (2.0 * dh);
    let h_g = 2.0 / r_out * (1.0 - 2.0 * m / r_out).sqrt();
    (h_g, h_g + 4.0 * dphi / (u(rho_o) * u(rho_o)))
}

#[test]
fn doubling_on_schwarzschild() {
    let d = schwarzschild_band(1.0, 3.0, 2048).unwrap();
    let rep = doubling_construct(&d, 0.1).unwrap();
    assert!(!rep.scalar_flattened);
    assert!(rep.metric_mismatch < 1e-8);
    assert!(rep.curvature_sum < 1e-8);
    assert!(rep.margin > 0.0);
    let (h_g, h_g1) = isotropic_outer_h(1.0, 3.0, 0.95);
    let outer = rep.g1.tags.iter().position(|&t| t == BoundaryTag::Outer).unwrap();
    assert!((rep.tilde.new_h[outer] - h_g).abs() < 1e-9);
    assert!((rep.g1.new_h[outer] - h_g1).abs() < 1e-4 * h_g1, "{} vs {h_g1}", rep.g1.new_h[outer]);
    let (a, b) = rep.halves.as_ref().unwrap();
    assert!((a.boundary_mean_curvature(Side::Outer).unwrap() - h_g1).abs() < 1e-3);
    // Σ_O carries (1 − ε)⁴γ in the second half, so only H_{g₂} > H_g̃ − η holds
    assert!(b.boundary_mean_curvature(Side::Outer).unwrap() > h_g - rep.eta - 1e-3);

    let etas: Vec<f64> = [0.2, 0.1, 0.05].iter().map(|&e| doubling_construct(&d, e).unwrap().eta).collect();
    assert!(etas[0] > etas[1] && etas[1] > etas[2], "{etas:?}");
}

#[test]
fn doubling_rejects_non_minimal_inner_boundary() {
    let err = doubling_construct(&flat_shell(64), 0.1).unwrap_err();
    assert!(matches!(err, Error::NotMinimal { .. }));
}

#[test]
fn weak_fix_raises_mean_curvature() {
    let d = RadialDomain::flat_ball(1.0, 256).unwrap();
    let rep = weak_meanconvex_fix(&d, 0.1).unwrap();
    assert!(rep.report.min_increase(BoundaryTag::Outer) > 0.0);
    assert!(rep.w.iter().all(|&w| w <= 1e-12));
    let zero = weak_meanconvex_fix(&d, 0.0).unwrap();
    assert_eq!(zero.report.new_h, zero.report.old_h);
}

#[test]
fn weak_fix_curvature_loss_is_linear() {
    // R = 0, so R(g_ε) = −8ε (1 + εw)⁻⁵ with w ≤ 0: −8ε ≥ min R ≥ −Cε, and the
    // measured C = |min R|/ε falls toward 8 as ε shrinks.
    let d = schwarzschild_band(1.0, 3.0, 512).unwrap();
    let mut last = f64::INFINITY;
    for eps in [0.1, 0.05, 0.025] {
        let rep = weak_meanconvex_fix(&d, eps).unwrap();
        let w_min = rep.w.iter().copied().fold(f64::INFINITY, f64::min);
        let expected = -8.0 * eps / (1.0 + eps * w_min).powi(5);
        assert!((rep.report.min_r_new - expected).abs() < 1e-3 * expected.abs(), "{} {expected}", rep.report.min_r_new);
        let c = -rep.report.min_r_new / eps;
        assert!(c >= 8.0 - 1e-6 && c < last, "{c}");
        last = c;
    }
}

#[test]
fn positivity_perturbation_makes_r_positive() {
    let d = schwarzschild_band(1.0, 3.0, 512).unwrap();
    let rep = positivity_perturbation(&d, 0.05).unwrap();
    assert!(rep.report.min_r_new > 0.0);
}

#[test]
fn scalar_flat_deformation_on_cap() {
    let run = |n| {
        let d = RadialDomain::sphere_cap(1.0, n).unwrap();
        let rep = scalar_flat_deformation(&d).unwrap();
        assert!(rep.solve.u.values().iter().all(|&u| u > 0.0 && u <= 1.0 + 1e-12));
        assert!(rep.report.flags.boundary_metric_preserved);
        assert!(rep.r_new.values().iter().skip(1).all(|v| v.abs() < 1e-3), "{}", rep.r_new.max());
        let old = rep.report.old_total(BoundaryTag::Outer);
        let new = rep.report.new_total(BoundaryTag::Outer);
        assert!(rep.solve.normal_derivative_on(BoundaryTag::Outer).unwrap() > 0.0);
        assert!(new > old * 1.01);
        new
    };
    let (a, b) = (run(256), run(512));
    assert!((a - b).abs() < 1e-3 * b, "{a} {b}");
}

#[test]
fn scalar_flat_domain_is_fixed() {
    let d = schwarzschild_band(1.0, 3.0, 256).unwrap();
    let rep = scalar_flat_deformation(&d).unwrap();
    assert!(rep.solve.u.values().iter().all(|u| (u - 1.0).abs() < 1e-9));
}
