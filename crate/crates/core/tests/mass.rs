use qlmass_core::conformal::DomainRef;
use qlmass_core::embedding::{default_kappa_grid, PointGrid};
use qlmass_core::fillins::schwarzschild_band;
use qlmass_core::mass::{
    additivity_combine, brown_york_mass, lambda_bracket, round_boundary, variational_mass_bracket, DEFAULT_AXIS_POINTS,
};
use qlmass_core::presets::Preset;
use qlmass_core::{AxisymmetricMetric, Error, RadialDomain};

fn schwarzschild_h(m: f64, r: f64) -> f64 {
    2.0 / r * (1.0 - 2.0 * m / r).sqrt()
}

#[test]
fn brown_york_schwarzschild_closed_form() {
    let n = 2048;
    let mut last = f64::INFINITY;
    for r in [3.0, 10.0, 100.0, 1000.0] {
        let metric = AxisymmetricMetric::round(r, n).unwrap();
        let h = vec![schwarzschild_h(1.0, r); n];
        let by = brown_york_mass(&metric, &h).unwrap();
        let exact = r * (1.0 - (1.0 - 2.0 / r).sqrt());
        assert!((by - exact).abs() < 1e-3 * exact.max(1.0), "R = {r}: {by} vs {exact}");
        assert!(by < last && by > 1.0);
        last = by;
    }
}

#[test]
fn round_sphere_bracket() {
    let m = AxisymmetricMetric::round(1.0, 512).unwrap();
    let ball = RadialDomain::flat_ball(1.0, 256).unwrap();
    let b =
        lambda_bracket(&m, &[("ball", DomainRef::from(&ball))], None, PointGrid::Axis(DEFAULT_AXIS_POINTS)).unwrap();
    assert!((b.lower - 1.0).abs() < 1e-8);
    assert!(b.upper <= 2f64.sqrt() + 1e-6);
    assert!(b.upper - 1.0 < 1e-3, "{}", b.upper);
    // finer κ toward 0 tightens the upper end
    let coarse = lambda_bracket(&m, &[], Some(&[1.0]), PointGrid::Center).unwrap();
    let fine = lambda_bracket(&m, &[], Some(&[1.0, 0.1, 0.01]), PointGrid::Center).unwrap();
    assert!(fine.upper < coarse.upper);
}

#[test]
fn nonconvex_metric_has_empty_lower_end() {
    let m = Preset::Dumbbell { depth: 0.6 }.boundary_metric(512).unwrap();
    let b = lambda_bracket(&m, &[], None, PointGrid::Axis(DEFAULT_AXIS_POINTS)).unwrap();
    assert!(!b.has_lower() && b.upper.is_finite());
    assert!(b.lower_source.is_none());
}

#[test]
fn schwarzschild_fillins_do_not_beat_the_flat_ball() {
    let r = 3.0;
    let m = AxisymmetricMetric::round(r, 512).unwrap();
    let bands: Vec<RadialDomain> =
        [0.25, 0.5, 1.0, 1.4].iter().map(|&mass| schwarzschild_band(mass, r, 512).unwrap()).collect();
    let labels = ["m0.25", "m0.5", "m1", "m1.4"];
    let fillins: Vec<(&str, DomainRef)> = labels.iter().copied().zip(bands.iter().map(DomainRef::from)).collect();
    let b = lambda_bracket(&m, &fillins, None, PointGrid::Axis(DEFAULT_AXIS_POINTS)).unwrap();
    assert!((b.lower - r).abs() < 1e-6);
    assert_eq!(b.lower_source.as_deref(), Some("flat_weyl"));
    assert!(b.candidates.iter().all(|c| c.accepted));
    for c in &b.candidates[1..] {
        assert!(c.total_h_over_8pi < b.lower);
    }
}

#[test]
fn flat_ball_has_zero_mass() {
    let d = RadialDomain::flat_ball(1.0, 256).unwrap();
    let target = round_boundary(&d, 512).unwrap();
    let b = variational_mass_bracket((&d).into(), &target, None, PointGrid::Axis(DEFAULT_AXIS_POINTS)).unwrap();
    assert!((b.total_h_over_8pi - 1.0).abs() < 1e-12);
    assert!((b.lambda_lower - 1.0).abs() < 1e-8);
    assert!(b.mass_lower.abs() < 1e-8);
    assert!(b.mass_upper < 1e-3);
}

#[test]
fn schwarzschild_mass_bracket_contains_brown_york() {
    let d = schwarzschild_band(1.0, 3.0, 1024).unwrap();
    let target = round_boundary(&d, 2048).unwrap();
    let b = variational_mass_bracket((&d).into(), &target, None, PointGrid::Axis(DEFAULT_AXIS_POINTS)).unwrap();
    assert!((b.total_h_over_8pi - 3f64.sqrt()).abs() < 1e-9);
    assert!(b.lambda_lower >= 3.0 - 1e-8);
    let by_exact = 3.0 - 3f64.sqrt();
    assert!(b.mass_lower >= by_exact - 1e-6);
    assert_eq!(b.provenance.cap_fill_eta, Some(0.0));
    let h = vec![schwarzschild_h(1.0, 3.0); 2048];
    let by = brown_york_mass(&target, &h).unwrap();
    assert!(b.contains(by, 1e-9), "{by} not in [{}, {}]", b.mass_lower, b.mass_upper);
}

#[test]
fn sphere_cap_mass_is_positive() {
    let d = RadialDomain::sphere_cap(1.0, 512).unwrap();
    let target = round_boundary(&d, 1024).unwrap();
    let b = variational_mass_bracket((&d).into(), &target, None, PointGrid::Axis(DEFAULT_AXIS_POINTS)).unwrap();
    let s1 = 1.0f64.sin();
    let expected = s1 * (1.0 - 1.0f64.cos());
    assert!((b.mass_lower - expected).abs() < 1e-6, "{} vs {expected}", b.mass_lower);
    assert!(b.mass_lower > 0.0);
}

#[test]
fn inadmissible_domain_rejected() {
    let d = RadialDomain::sphere_cap(2.0, 256).unwrap();
    let target = round_boundary(&d, 256).unwrap();
    let err = variational_mass_bracket((&d).into(), &target, Some(&[1.0]), PointGrid::Center).unwrap_err();
    assert!(matches!(err, Error::NotAdmissible(_)));
}

#[test]
fn horizon_margin_grows_with_mass() {
    let r = 3.0;
    let mut last = 0.0;
    for mass in [0.25, 0.5, 1.0] {
        let d = schwarzschild_band(mass, r, 1024).unwrap();
        let target = round_boundary(&d, 1024).unwrap();
        let b = variational_mass_bracket((&d).into(), &target, None, PointGrid::Axis(DEFAULT_AXIS_POINTS)).unwrap();
        let margin = b.lambda_lower - b.total_h_over_8pi;
        let exact = r * (1.0 - (1.0 - 2.0 * mass / r).sqrt());
        assert!((margin - exact).abs() < 1e-6);
        assert!(margin > last);
        last = margin;
    }
}

#[test]
fn additivity() {
    let grid = PointGrid::Axis(DEFAULT_AXIS_POINTS);
    let bracket = |radius: f64| {
        let d = RadialDomain::flat_ball(radius, 256).unwrap();
        let t = round_boundary(&d, 512).unwrap();
        variational_mass_bracket((&d).into(), &t, None, grid).unwrap()
    };
    let one = bracket(1.0);
    let two = bracket(2.0);
    let c = additivity_combine(&[one.clone(), one.clone()]).unwrap();
    assert!((c.lambda_lower - 2.0).abs() < 1e-8 && (c.total_h_over_8pi - 2.0).abs() < 1e-12);
    let single = additivity_combine(std::slice::from_ref(&one)).unwrap();
    assert_eq!(single.lambda_upper, one.lambda_upper);
    let c = additivity_combine(&[one.clone(), two.clone()]).unwrap();
    assert!((c.lambda_lower - 3.0).abs() < 1e-8);
    assert_eq!(c.lambda_upper, one.lambda_upper + two.lambda_upper);
    assert!(c.lambda_upper >= 3.0 && c.component_bounds_hold.iter().all(|&b| b));

    let mut empty = one.clone();
    empty.lambda_lower = f64::NEG_INFINITY;
    assert_eq!(additivity_combine(&[one, empty]).unwrap_err(), Error::EmptyComponent { index: 1 });
}

#[test]
fn presets_have_ordered_brackets() {
    for p in Preset::all() {
        let m = p.boundary_metric(512).unwrap();
        let kappas = default_kappa_grid(&m, 16);
        let domain = p.domain(512).unwrap();
        let fillins: Vec<(&str, DomainRef)> = domain.iter().map(|d| ("preset", DomainRef::from(d))).collect();
        let b = lambda_bracket(&m, &fillins, Some(&kappas), PointGrid::Axis(DEFAULT_AXIS_POINTS)).unwrap();
        assert!(b.lower <= b.upper, "{}", p.name());
    }
}
