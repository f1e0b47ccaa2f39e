use std::path::Path;

use qlmass::io::{
    format_tet, parse_profile, parse_tet, read_profile, read_sidecar, read_tet, sidecar_path, write_metric,
    write_radial, write_tet, Profile, Sidecar,
};
use qlmass_core::fillins::{random_radial_fillin, schwarzschild_band};
use qlmass_core::geometry::mesh::shell_mesh;
use qlmass_core::{AxisymmetricMetric, BoundaryTag, InnerRole, Side};

fn radial(p: Profile) -> qlmass_core::RadialDomain {
    match p {
        Profile::Radial(d) => d,
        Profile::Metric(_) => panic!("expected a radial profile"),
    }
}

#[test]
fn radial_round_trip_keeps_role_and_derivatives() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("band.csv");
    let d = schwarzschild_band(1.0, 3.0, 256).unwrap();
    let sidecar = Sidecar { m: Some(1.0), generator: Some("schwarzschild".into()), ..Sidecar::for_domain(&d) };
    write_radial(&path, &d, &sidecar).unwrap();
    assert_eq!(read_sidecar(&sidecar_path(&path)).unwrap(), sidecar);
    let back = radial(read_profile(&path, 1e-6).unwrap());
    assert_eq!(back.inner_role(), InnerRole::Horizon);
    assert_eq!(back, d);
    assert_eq!(back.boundary_mean_curvature(Side::Outer), d.boundary_mean_curvature(Side::Outer));
}

#[test]
fn generated_fillin_round_trip_with_seed() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fill.csv");
    let d = random_radial_fillin(7, 64).unwrap();
    let sidecar = Sidecar { seed: Some(7), ..Sidecar::for_domain(&d) };
    write_radial(&path, &d, &sidecar).unwrap();
    assert_eq!(radial(read_profile(&path, 1e-6).unwrap()), d);
    assert_eq!(read_sidecar(&sidecar_path(&path)).unwrap().seed, Some(7));
}

#[test]
fn radial_without_sidecar_infers_role() {
    let mut ball = String::from("r,h\n");
    let mut shell = String::from("r,h\n");
    for i in 0..64 {
        let r = i as f64 / 63.0;
        ball.push_str(&format!("{r},{r}\n"));
        shell.push_str(&format!("{},{}\n", 1.0 + r, 1.0 + r));
    }
    let p = Path::new("x.csv");
    assert_eq!(radial(parse_profile(&ball, p, None, 1e-6).unwrap()).inner_role(), InnerRole::RegularCenter);
    assert_eq!(radial(parse_profile(&shell, p, None, 1e-6).unwrap()).inner_role(), InnerRole::Cut);
    let horizon = Sidecar { inner_role: Some("horizon".into()), ..Sidecar::default() };
    // h'(r_in) = 1 is not minimal, so the declared role is rejected
    assert!(parse_profile(&shell, p, Some(&horizon), 1e-6).is_err());
}

#[test]
fn metric_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let m = AxisymmetricMetric::round(2.0, 128).unwrap();
    write_metric(&path, &m).unwrap();
    match read_profile(&path, 1e-6).unwrap() {
        Profile::Metric(back) => assert_eq!(back, m),
        Profile::Radial(_) => panic!("expected a metric"),
    }
}

#[test]
fn profile_comments_and_whitespace() {
    let mut text = String::from("# comment\n s , f \n");
    for i in 0..32 {
        let s = std::f64::consts::PI * i as f64 / 31.0;
        text.push_str(&format!("# node {i}\n{s}, {}\n", s.sin()));
    }
    assert!(matches!(parse_profile(&text, Path::new("c.csv"), None, 1e-2), Ok(Profile::Metric(m)) if m.nodes() == 32));
}

#[test]
fn malformed_profiles_rejected() {
    let p = Path::new("bad.csv");
    assert!(parse_profile("s,f\n0,0\n1,x\n", p, None, 1e-6).unwrap_err().to_string().contains("not a number"));
    assert!(parse_profile("s,f\n0,0\n", p, None, 1e-6).is_err());
}

#[test]
fn tet_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("shell.tet");
    let d = shell_mesh(1.0, 2.0, 1).unwrap();
    write_tet(&path, &d).unwrap();
    let back = read_tet(&path).unwrap();
    assert_eq!(back.vertex_count(), d.vertex_count());
    assert_eq!(back.tets(), d.tets());
    assert_eq!(back.boundary(), d.boundary());
    assert!((back.volume() - d.volume()).abs() < 1e-12 * d.volume());
    let (a, b) = (d.boundary_mean_curvature(), back.boundary_mean_curvature());
    assert!((a.total(BoundaryTag::Outer) - b.total(BoundaryTag::Outer)).abs() < 1e-9);
    assert_eq!(format_tet(&back), format_tet(&d));
}

#[test]
fn tet_scalar_curvature_section() {
    let text = "\
# single regular tet with assigned curvature
vertices 4
tets 1
0 1 2 3
edges 6
0 1 1
0 2 1
0 3 1
1 2 1
1 3 1
2 3 1
boundary 4
0 1 2 outer
0 1 3 outer
0 2 3 outer
1 2 3 outer
scalar_curvature 1
0.5
";
    let d = parse_tet(text, Path::new("t.tet")).unwrap();
    assert_eq!(d.tet_scalar_curvature(), &[0.5]);
    assert_eq!(parse_tet(&format_tet(&d), Path::new("t.tet")).unwrap().tet_scalar_curvature(), &[0.5]);
}

#[test]
fn tet_errors() {
    let p = Path::new("t.tet");
    let missing_edge = "vertices 4\ntets 1\n0 1 2 3\nedges 0\nboundary 0\n";
    assert!(parse_tet(missing_edge, p).unwrap_err().to_string().contains("missing length"));
    let bad_tag = "vertices 4\ntets 1\n0 1 2 3\nedges 0\nboundary 1\n0 1 2 top\n";
    assert!(parse_tet(bad_tag, p).unwrap_err().to_string().contains("outer or inner"));
    let trailing = "vertices 4\ntets 0\nedges 0\nboundary 0\nextra\n";
    assert!(parse_tet(trailing, p).is_err());
}
