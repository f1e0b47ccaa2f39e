use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::fill_poles;
use crate::error::{Error, Result};
use crate::geometry::AxisymmetricMetric;
use crate::numerics::fd::{self, Parity};
use crate::DEFAULT_TOL;

/// An axisymmetric metric realized in R³ as the surface swept by the
/// meridian `(f(s), z(s))`, with its mean curvature per node.
#[derive(Debug, Clone, PartialEq)]
pub struct RevolutionSurfaceR3 {
    source: AxisymmetricMetric,
    z: Vec<f64>,
    dz: Vec<f64>,
    h0: Vec<f64>,
}

/// Embeds `m` with `z(0) = 0` and `z' = √(1 − f'²) ≥ 0`.
///
/// Fails with [`Error::NotEmbeddable`] when `|f'| > 1 + tol` somewhere,
/// reporting the first offending run of nodes.
pub fn embed_euclidean(m: &AxisymmetricMetric) -> Result<RevolutionSurfaceR3> {
    let s = m.s();
    let (f, df, ddf) = (m.f(), m.df(), m.ddf());
    let n = m.nodes();
    if let Some(start) = (0..n).find(|&i| df[i].abs() > 1.0 + DEFAULT_TOL) {
        let end = (start..n).take_while(|&i| df[i].abs() > 1.0 + DEFAULT_TOL).last().unwrap_or(start);
        return Err(Error::NotEmbeddable { from: s[start], to: s[end] });
    }
    let dz: Vec<f64> = df.iter().map(|p| (1.0 - p * p).max(0.0).sqrt()).collect();
    let z = fd::cumulative_integral(s, &dz);
    // k_meridian = f'z'' − z'f'' = −f''/z' and k_parallel = z'/f
    let mut h0: Vec<f64> =
        (0..n).map(|i| if i == 0 || i == n - 1 { 0.0 } else { -ddf[i] / dz[i] + dz[i] / f[i] }).collect();
    fill_poles(s, &mut h0);
    Ok(RevolutionSurfaceR3 { source: m.clone(), z, dz, h0 })
}

impl RevolutionSurfaceR3 {
    pub fn source(&self) -> &AxisymmetricMetric {
        &self.source
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    /// Mean curvature (sum of principal curvatures, outward normal) per node.
    pub fn mean_curvature(&self) -> &[f64] {
        &self.h0
    }

    /// `∫ H₀ dσ`.
    pub fn total_mean_curvature(&self) -> f64 {
        self.source.integrate(&self.h0)
    }

    /// `(1/8π) ∫ H₀ dσ`.
    pub fn total_mean_curvature_over_8pi(&self) -> f64 {
        self.total_mean_curvature() / (8.0 * PI)
    }

    /// Max over nodes of `|f'² + z'² − 1|` with `z'` re-differentiated from
    /// the integrated heights.
    pub fn isometry_residual(&self) -> f64 {
        let dz = fd::derivative(self.source.s(), &self.z, Parity::Even, Parity::Even);
        self.source.df().iter().zip(&dz).map(|(p, q)| (p * p + q * q - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Max over nodes of the residual using the stored slope `z' = √(1 − f'²)`.
    pub fn slope_residual(&self) -> f64 {
        self.source.df().iter().zip(&self.dz).map(|(p, q)| (p * p + q * q - 1.0).abs()).fold(0.0, f64::max)
    }

    pub fn min_mean_curvature(&self) -> f64 {
        self.h0.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_sphere_heights_and_curvature() {
        let m = AxisymmetricMetric::round(1.0, 1024).unwrap();
        let e = embed_euclidean(&m).unwrap();
        for (s, z) in m.s().iter().zip(e.z()) {
            assert!((z - (1.0 - s.cos())).abs() < 1e-8);
        }
        for h in e.mean_curvature() {
            assert!((h - 2.0).abs() < 1e-6, "{h}");
        }
        assert!((e.total_mean_curvature() - 8.0 * PI).abs() < 1e-6 * 8.0 * PI);
    }

    #[test]
    fn steep_profile_reports_interval() {
        let m = AxisymmetricMetric::from_fn(256, PI, |s| s.sin() * (1.0 + 0.6 * s.sin().powi(2))).unwrap();
        match embed_euclidean(&m).unwrap_err() {
            Error::NotEmbeddable { from, to } => assert!(from > 0.0 && from <= to && to < PI),
            e => panic!("unexpected {e:?}"),
        }
    }
}
