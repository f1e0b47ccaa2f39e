use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{End, Error, Result};
use crate::numerics::fd::{self, Parity};
use crate::numerics::tridiag::{smallest_eigenvalue, Tridiagonal};
use crate::{DEFAULT_TOL, MIN_NODES};

/// An axisymmetric metric `ds² + f(s)² dθ²` on the 2-sphere, sampled on an
/// arc-length grid `0 = s_0 < … < s_{n-1} = L` running pole to pole.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisymmetricMetric {
    s: Vec<f64>,
    f: Vec<f64>,
    df: Vec<f64>,
    ddf: Vec<f64>,
}

impl AxisymmetricMetric {
    /// Builds and validates a metric from `(s, f)` samples with the default
    /// tolerance.
    pub fn from_samples(samples: &[(f64, f64)]) -> Result<Self> {
        Self::from_samples_with_tol(samples, DEFAULT_TOL)
    }

    pub fn from_samples_with_tol(samples: &[(f64, f64)], tol: f64) -> Result<Self> {
        let (s, f): (Vec<f64>, Vec<f64>) = samples.iter().copied().unzip();
        Self::new(s, f, tol)
    }

    /// Samples `f` on `n` evenly spaced nodes of `[0, length]`.
    pub fn from_fn(n: usize, length: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let s = fd::linspace(0.0, length, n);
        let vals = s.iter().map(|&t| f(t)).collect();
        Self::new(s, vals, DEFAULT_TOL)
    }

    /// The round sphere of radius `radius`.
    pub fn round(radius: f64, n: usize) -> Result<Self> {
        Self::from_fn(n, PI * radius, |s| radius * (s / radius).sin())
    }

    pub fn new(s: Vec<f64>, mut f: Vec<f64>, tol: f64) -> Result<Self> {
        let n = s.len();
        if n < MIN_NODES {
            return Err(Error::TooFewNodes { found: n, min: MIN_NODES });
        }
        if f.len() != n {
            return Err(Error::InvalidGrid(format!("{} s-values but {} f-values", n, f.len())));
        }
        if s.iter().chain(&f).any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite sample".into()));
        }
        if s.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("arc-length grid must be strictly increasing".into()));
        }
        let length = s[n - 1] - s[0];
        if s[0].abs() > tol * length {
            return Err(Error::InvalidGrid("arc-length grid must start at s = 0".into()));
        }
        for (end, i) in [(End::Start, 0), (End::Finish, n - 1)] {
            if f[i].abs() > tol * length {
                return Err(Error::EndpointNotZero { end, value: f[i] });
            }
            f[i] = 0.0;
        }
        if let Some(i) = (1..n - 1).find(|&i| f[i] <= 0.0) {
            return Err(Error::NonPositiveInterior { index: i, s: s[i] });
        }
        let (df, ddf) = fd::derivatives(&s, &f, Parity::Odd, Parity::Odd);
        let metric = Self { s, f, df, ddf };
        metric.check_pole_closure(tol)?;
        Ok(metric)
    }

    /// Smooth closure at the poles needs `f'(0) = 1` and `f'(L) = -1`. The
    /// allowed slack grows with the squared relative end spacing.
    fn check_pole_closure(&self, tol: f64) -> Result<()> {
        let n = self.s.len();
        let length = self.length();
        let checks = [
            (End::Start, self.df[0] - 1.0, self.s[1] - self.s[0]),
            (End::Finish, self.df[n - 1] + 1.0, self.s[n - 1] - self.s[n - 2]),
        ];
        for (end, err, h) in checks {
            let tolerance = tol.max(10.0 * (h / length).powi(2));
            if err.abs() > tolerance {
                let slope = match end {
                    End::Start => self.df[0],
                    End::Finish => -self.df[n - 1],
                };
                return Err(Error::PoleClosureViolation { end, slope: slope.abs(), tolerance });
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        self.s.len()
    }

    pub fn length(&self) -> f64 {
        self.s[self.s.len() - 1]
    }

    pub fn s(&self) -> &[f64] {
        &self.s
    }

    pub fn f(&self) -> &[f64] {
        &self.f
    }

    /// Cached `f'` estimates.
    pub fn df(&self) -> &[f64] {
        &self.df
    }

    /// Cached `f''` estimates.
    pub fn ddf(&self) -> &[f64] {
        &self.ddf
    }

    /// The metric with `s` and `f` multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let s = self.s.iter().map(|v| v * c).collect();
        let f = self.f.iter().map(|v| v * c).collect();
        Self::new(s, f, DEFAULT_TOL)
    }

    /// `∫ F dσ = 2π ∫ F(s) f(s) ds` for a per-node field `F`.
    pub fn integrate(&self, field: &[f64]) -> f64 {
        let integrand: Vec<f64> = field.iter().zip(&self.f).map(|(a, b)| a * b).collect();
        2.0 * PI * fd::integrate(&self.s, &integrand)
    }

    pub fn area(&self) -> f64 {
        2.0 * PI * fd::integrate(&self.s, &self.f)
    }

    /// Gauss curvature `K = -f''/f`; pole values are the limit of the even
    /// extension of `K` through the pole.
    pub fn gauss_curvature(&self) -> Vec<f64> {
        let n = self.nodes();
        let mut k: Vec<f64> =
            (0..n).map(|i| if i == 0 || i == n - 1 { 0.0 } else { -self.ddf[i] / self.f[i] }).collect();
        k[0] = fd::even_limit(&self.s[..4], &k[..4]);
        let tail_s: Vec<f64> = self.s[n - 4..].iter().rev().copied().collect();
        let tail_k: Vec<f64> = k[n - 4..].iter().rev().copied().collect();
        k[n - 1] = fd::even_limit(&tail_s, &tail_k);
        k
    }

    /// Finite-volume discretization of `-Δ_γ + K_γ` on axisymmetric functions,
    /// symmetrized by the dual-cell areas.
    ///
    /// Returns the symmetric tridiagonal matrix (diagonal, off-diagonal).
    pub fn conformal_operator(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.nodes();
        let k = self.gauss_curvature();
        let mut weights = alloc::vec![0.0; n];
        let mut flux = alloc::vec![0.0; n - 1];
        for i in 0..n - 1 {
            let h = self.s[i + 1] - self.s[i];
            let f_mid = 0.5 * (self.f[i] + self.f[i + 1]);
            flux[i] = f_mid / h;
            let half = 0.5 * h;
            weights[i] += half * (self.f[i] + f_mid) * 0.5;
            weights[i + 1] += half * (self.f[i + 1] + f_mid) * 0.5;
        }
        let mut op = Tridiagonal::with_size(n);
        for i in 0..n {
            op.diag[i] = k[i] * weights[i];
            if i > 0 {
                op.diag[i] += flux[i - 1];
            }
            if i + 1 < n {
                op.diag[i] += flux[i];
                op.upper[i] = -flux[i];
                op.lower[i] = -flux[i];
            }
        }
        let scale: Vec<f64> = weights.iter().map(|w| 1.0 / w.sqrt()).collect();
        let diag = (0..n).map(|i| op.diag[i] * scale[i] * scale[i]).collect();
        let off = (0..n - 1).map(|i| op.upper[i] * scale[i] * scale[i + 1]).collect();
        (diag, off)
    }

    /// Smallest eigenvalue of `-Δ_γ + K_γ` restricted to axisymmetric
    /// functions. Labeled heuristic: the restriction is not shown to capture
    /// the first eigenvalue over all functions.
    pub fn first_eigenvalue_conformal(&self) -> ConformalEigenvalue {
        let (d, e) = self.conformal_operator();
        ConformalEigenvalue { value: smallest_eigenvalue(&d, &e), heuristic: true }
    }

    pub fn min_gauss_curvature(&self) -> (f64, f64) {
        let k = self.gauss_curvature();
        let (i, kmin) =
            k.iter().copied().enumerate().fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
        (self.s[i], kmin)
    }
}

/// Result of [`AxisymmetricMetric::first_eigenvalue_conformal`]: a heuristic
/// fill-in existence indicator (positive value suggests fill-ins exist).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConformalEigenvalue {
    pub value: f64,
    pub heuristic: bool,
}

impl ConformalEigenvalue {
    pub fn indicates_fillin(&self) -> bool {
        self.value > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_sphere_is_valid() {
        let m = AxisymmetricMetric::round(1.0, 256).unwrap();
        assert_eq!(m.nodes(), 256);
        assert!((m.area() - 4.0 * PI).abs() < 1e-8);
    }

    #[test]
    fn doubled_profile_violates_pole_closure() {
        let err = AxisymmetricMetric::from_fn(256, PI, |s| 2.0 * s.sin()).unwrap_err();
        assert!(matches!(err, Error::PoleClosureViolation { end: End::Start, .. }));
    }

    #[test]
    fn harmonic_bump_rejected_and_corrected_profile_accepted() {
        // f'(0) = 1 + 3 * 0.08 = 1.24
        let err = AxisymmetricMetric::from_fn(256, PI, |s| s.sin() + 0.08 * (3.0 * s).sin()).unwrap_err();
        match err {
            Error::PoleClosureViolation { slope, .. } => assert!((slope - 1.24).abs() < 1e-4),
            e => panic!("unexpected {e:?}"),
        }
        let m = AxisymmetricMetric::from_fn(256, PI, |s| s.sin() * (1.0 + 0.2 * s.sin().powi(2))).unwrap();
        assert!((m.df()[0] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn too_few_nodes() {
        let err = AxisymmetricMetric::round(1.0, 8).unwrap_err();
        assert_eq!(err, Error::TooFewNodes { found: 8, min: MIN_NODES });
    }

    #[test]
    fn interior_zero_rejected() {
        let err = AxisymmetricMetric::from_fn(64, PI, |s| s.sin() * (s - 1.0).abs().min(1.0)).unwrap_err();
        assert!(matches!(err, Error::NonPositiveInterior { .. }) || matches!(err, Error::PoleClosureViolation { .. }));
    }

    #[test]
    fn unit_sphere_curvature() {
        let m = AxisymmetricMetric::round(1.0, 256).unwrap();
        for k in m.gauss_curvature() {
            assert!((k - 1.0).abs() < 1e-7);
        }
    }

    #[test]
    fn sphere_of_radius_r_curvature() {
        let m = AxisymmetricMetric::round(3.0, 256).unwrap();
        for k in m.gauss_curvature() {
            assert!((k - 1.0 / 9.0).abs() < 1e-8);
        }
    }

    #[test]
    fn eigenvalue_round_spheres() {
        let m = AxisymmetricMetric::round(1.0, 512).unwrap();
        assert!((m.first_eigenvalue_conformal().value - 1.0).abs() < 1e-4);
        let m = AxisymmetricMetric::round(2.0, 512).unwrap();
        assert!((m.first_eigenvalue_conformal().value - 0.25).abs() < 1e-4);
    }
}
