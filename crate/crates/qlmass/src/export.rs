//! Plot-ready CSV and Wavefront OBJ output for embedded surfaces.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qlmass_core::embedding::{RevolutionSurfaceH3, RevolutionSurfaceR3};

use crate::error::{Error, Result};

/// Azimuthal samples used for OBJ meshes.
pub const OBJ_AZIMUTHS: usize = 64;

/// Columns `s,f,z,H0`.
pub fn surface_r3_csv(surf: &RevolutionSurfaceR3) -> String {
    let m = surf.source();
    let mut out = String::from("s,f,z,H0\n");
    for i in 0..m.nodes() {
        let _ = writeln!(out, "{},{},{},{}", m.s()[i], m.f()[i], surf.z()[i], surf.mean_curvature()[i]);
    }
    out
}

/// Columns `s,f,t,z,H0` in hyperboloid coordinates.
pub fn surface_h3_csv(surf: &RevolutionSurfaceH3) -> String {
    let m = surf.source();
    let mut out = String::from("s,f,t,z,H0\n");
    for i in 0..m.nodes() {
        let _ = writeln!(out, "{},{},{},{},{}", m.s()[i], m.f()[i], surf.t()[i], surf.z()[i], surf.mean_curvature()[i]);
    }
    out
}

/// The meridian swept through `azimuths` angles. Each pole is a single vertex.
pub fn surface_r3_obj(surf: &RevolutionSurfaceR3, azimuths: usize) -> String {
    let m = surf.source();
    let n = m.nodes();
    let (f, z) = (m.f(), surf.z());
    let mut out = String::from("# surface of revolution\n");
    let _ = writeln!(out, "v 0 0 {}", z[0]);
    for i in 1..n - 1 {
        for k in 0..azimuths {
            let phi = 2.0 * PI * k as f64 / azimuths as f64;
            let _ = writeln!(out, "v {} {} {}", f[i] * phi.cos(), f[i] * phi.sin(), z[i]);
        }
    }
    let _ = writeln!(out, "v 0 0 {}", z[n - 1]);
    // OBJ indices are 1-based; ring i starts at 2 + (i-1)·azimuths
    let ring = |i: usize, k: usize| 2 + (i - 1) * azimuths + k % azimuths;
    let last = 2 + (n - 2) * azimuths;
    for k in 0..azimuths {
        let _ = writeln!(out, "f 1 {} {}", ring(1, k + 1), ring(1, k));
    }
    for i in 1..n - 2 {
        for k in 0..azimuths {
            let (a, b, c, d) = (ring(i, k), ring(i, k + 1), ring(i + 1, k + 1), ring(i + 1, k));
            let _ = writeln!(out, "f {a} {b} {c}\nf {a} {c} {d}");
        }
    }
    for k in 0..azimuths {
        let _ = writeln!(out, "f {last} {} {}", ring(n - 2, k), ring(n - 2, k + 1));
    }
    out
}

pub fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(Error::io(path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qlmass_core::embedding::embed_euclidean;
    use qlmass_core::AxisymmetricMetric;

    #[test]
    fn obj_counts() {
        let m = AxisymmetricMetric::round(1.0, 32).unwrap();
        let obj = surface_r3_obj(&embed_euclidean(&m).unwrap(), 8);
        let v = obj.lines().filter(|l| l.starts_with("v ")).count();
        let f = obj.lines().filter(|l| l.starts_with("f ")).count();
        assert_eq!(v, 2 + 30 * 8);
        assert_eq!(f, 2 * 8 + 2 * 29 * 8);
        // Euler characteristic of the sphere
        let e = 3 * f / 2;
        assert_eq!(v as i64 - e as i64 + f as i64, 2);
    }
}
