use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::numerics::fd::{self, Parity};
use crate::{DEFAULT_TOL, MIN_NODES};

/// What sits at the inner end `r_in` of a [`RadialDomain`]. The outer end is
/// always the boundary component Σ_O.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum InnerRole {
    /// `r_in = 0`, `h(0) = 0`, `h'(0) = 1`: no inner boundary.
    RegularCenter,
    /// A minimal sphere, `h'(r_in) = 0` (Σ_H).
    Horizon,
    /// An arbitrary inner boundary sphere.
    Cut,
}

impl InnerRole {
    pub fn name(&self) -> &'static str {
        match self {
            Self::RegularCenter => "regular-center",
            Self::Horizon => "horizon",
            Self::Cut => "cut",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "regular-center" | "center" => Some(Self::RegularCenter),
            "horizon" => Some(Self::Horizon),
            "cut" => Some(Self::Cut),
            _ => None,
        }
    }
}

/// Boundary component of a radial domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Inner,
    Outer,
}

/// A rotationally symmetric 3-manifold `dr² + h(r)² g_{S²}` on `[r_in, r_out]`.
///
/// Derivatives of `h` are stored with the samples; they are either supplied
/// exactly (closed forms, generators) or estimated by finite differences.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialDomain {
    r: Vec<f64>,
    h: Vec<f64>,
    dh: Vec<f64>,
    ddh: Vec<f64>,
    inner: InnerRole,
}

impl RadialDomain {
    /// Builds a domain from samples, estimating `h'` and `h''` by finite
    /// differences (odd reflection through a regular center).
    pub fn from_samples(r: Vec<f64>, h: Vec<f64>, inner: InnerRole) -> Result<Self> {
        Self::check_grid(&r, &h)?;
        let left = if inner == InnerRole::RegularCenter { Parity::Odd } else { Parity::None };
        let (dh, ddh) = fd::derivatives(&r, &h, left, Parity::None);
        let n = r.len();
        let spacing = (r[1] - r[0]).max(r[n - 1] - r[n - 2]) / (r[n - 1] - r[0]);
        let tol = DEFAULT_TOL.max(10.0 * spacing * spacing);
        let domain = Self { r, h, dh, ddh, inner };
        domain.check_roles(tol)?;
        Ok(domain)
    }

    /// Builds a domain from samples together with exact derivatives.
    pub fn from_parts(r: Vec<f64>, h: Vec<f64>, dh: Vec<f64>, ddh: Vec<f64>, inner: InnerRole) -> Result<Self> {
        Self::check_grid(&r, &h)?;
        if dh.len() != r.len() || ddh.len() != r.len() {
            return Err(Error::InvalidGrid("derivative arrays do not match the grid".into()));
        }
        let domain = Self { r, h, dh, ddh, inner };
        domain.check_roles(DEFAULT_TOL)?;
        Ok(domain)
    }

    /// Samples `h`, `h'`, `h''` on `n` evenly spaced nodes of `[r_in, r_out]`.
    pub fn from_fn(
        n: usize,
        r_in: f64,
        r_out: f64,
        inner: InnerRole,
        h: impl Fn(f64) -> (f64, f64, f64),
    ) -> Result<Self> {
        let r = fd::linspace(r_in, r_out, n);
        let mut hs = Vec::with_capacity(n);
        let mut d1 = Vec::with_capacity(n);
        let mut d2 = Vec::with_capacity(n);
        for &x in &r {
            let (a, b, c) = h(x);
            hs.push(a);
            d1.push(b);
            d2.push(c);
        }
        Self::from_parts(r, hs, d1, d2, inner)
    }

    /// The flat ball of radius `radius`.
    pub fn flat_ball(radius: f64, n: usize) -> Result<Self> {
        Self::from_fn(n, 0.0, radius, InnerRole::RegularCenter, |r| (r, 1.0, 0.0))
    }

    /// The geodesic ball of radius `r0` in the unit round 3-sphere.
    pub fn sphere_cap(r0: f64, n: usize) -> Result<Self> {
        Self::from_fn(n, 0.0, r0, InnerRole::RegularCenter, |r| (r.sin(), r.cos(), -r.sin()))
    }

    fn check_grid(r: &[f64], h: &[f64]) -> Result<()> {
        let n = r.len();
        if n < MIN_NODES {
            return Err(Error::TooFewNodes { found: n, min: MIN_NODES });
        }
        if h.len() != n {
            return Err(Error::InvalidGrid(format!("{} r-values but {} h-values", n, h.len())));
        }
        if r.iter().chain(h).any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite sample".into()));
        }
        if r.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("radial grid must be strictly increasing".into()));
        }
        if let Some(i) = (1..n).find(|&i| h[i] <= 0.0) {
            return Err(Error::InvalidGrid(format!("warping function not positive at r = {}", r[i])));
        }
        Ok(())
    }

    fn check_roles(&self, tol: f64) -> Result<()> {
        let scale = self.r[self.r.len() - 1] - self.r[0];
        match self.inner {
            InnerRole::RegularCenter => {
                if self.r[0].abs() > tol * scale || self.h[0].abs() > tol * scale {
                    return Err(Error::RoleViolation(format!(
                        "regular center needs r_in = 0 and h(0) = 0 (got r = {}, h = {})",
                        self.r[0], self.h[0]
                    )));
                }
                if (self.dh[0] - 1.0).abs() > tol {
                    return Err(Error::RoleViolation(format!("regular center needs h'(0) = 1 (got {})", self.dh[0])));
                }
            }
            InnerRole::Horizon => {
                if self.h[0] <= 0.0 {
                    return Err(Error::RoleViolation("horizon must have positive area radius".into()));
                }
                if self.dh[0].abs() > tol {
                    return Err(Error::RoleViolation(format!("horizon needs h'(r_in) = 0 (got {})", self.dh[0])));
                }
            }
            InnerRole::Cut => {
                if self.h[0] <= 0.0 {
                    return Err(Error::RoleViolation("inner boundary must have positive area radius".into()));
                }
            }
        }
        Ok(())
    }

    pub fn nodes(&self) -> usize {
        self.r.len()
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub fn dh(&self) -> &[f64] {
        &self.dh
    }

    pub fn ddh(&self) -> &[f64] {
        &self.ddh
    }

    pub fn inner_role(&self) -> InnerRole {
        self.inner
    }

    pub fn has_inner_boundary(&self) -> bool {
        self.inner != InnerRole::RegularCenter
    }

    pub fn r_in(&self) -> f64 {
        self.r[0]
    }

    pub fn r_out(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    /// Area radius `h(r_out)` of Σ_O.
    pub fn outer_area_radius(&self) -> f64 {
        self.h[self.h.len() - 1]
    }

    /// `R = 2(1 - h'² - 2 h h'')/h²` at every node. At a regular center the
    /// value is copied from the first interior node.
    pub fn scalar_curvature(&self) -> Vec<f64> {
        let n = self.nodes();
        let mut out: Vec<f64> = (0..n)
            .map(|i| {
                let (h, d, dd) = (self.h[i], self.dh[i], self.ddh[i]);
                2.0 * (1.0 - d * d - 2.0 * h * dd) / (h * h)
            })
            .collect();
        if self.inner == InnerRole::RegularCenter {
            out[0] = out[1];
        }
        out
    }

    /// Mean curvature `2h'/h` of a boundary sphere with respect to the
    /// outward normal (sign flipped at the inner end). Sum of principal
    /// curvatures, so the unit sphere in flat space has `H = 2`.
    pub fn boundary_mean_curvature(&self, side: Side) -> Option<f64> {
        match side {
            Side::Outer => {
                let n = self.nodes();
                Some(2.0 * self.dh[n - 1] / self.h[n - 1])
            }
            Side::Inner if self.has_inner_boundary() => Some(-2.0 * self.dh[0] / self.h[0]),
            Side::Inner => None,
        }
    }

    /// `(1/8π) ∫_{Σ_O} H dσ = h(r_out) h'(r_out)`.
    pub fn total_outer_mean_curvature_over_8pi(&self) -> f64 {
        let n = self.nodes();
        self.h[n - 1] * self.dh[n - 1]
    }

    /// `∫_{Σ_O} H dσ`.
    pub fn total_outer_mean_curvature(&self) -> f64 {
        8.0 * PI * self.total_outer_mean_curvature_over_8pi()
    }

    /// The same metric with a different inner-boundary role, re-validated.
    pub fn with_inner_role(&self, inner: InnerRole) -> Result<Self> {
        let domain = Self { inner, ..self.clone() };
        domain.check_roles(DEFAULT_TOL)?;
        Ok(domain)
    }

    /// The warped metric `ψ⁴(dr² + h² g_{S²})` rewritten as
    /// `dρ² + (ψ² h)² g_{S²}` with `ρ = ∫ ψ² dr`. Derivatives of `ψ` are
    /// estimated by finite differences.
    pub fn conformally_deformed(&self, psi: &[f64]) -> Result<Self> {
        let n = self.nodes();
        if psi.len() != n {
            return Err(Error::FieldSizeMismatch { found: psi.len(), expected: n });
        }
        if let Some(i) = psi.iter().position(|&v| v <= 0.0) {
            return Err(Error::NonPositiveFactor { index: i, value: psi[i] });
        }
        let left = if self.inner == InnerRole::RegularCenter { Parity::Even } else { Parity::None };
        let (dpsi, ddpsi) = fd::derivatives(&self.r, psi, left, Parity::None);
        let sq: Vec<f64> = psi.iter().map(|p| p * p).collect();
        let rho: Vec<f64> = fd::cumulative_integral(&self.r, &sq).iter().map(|v| v + self.r[0]).collect();
        let mut h = Vec::with_capacity(n);
        let mut dh = Vec::with_capacity(n);
        let mut ddh = Vec::with_capacity(n);
        for i in 0..n {
            let (p, dp, ddp) = (psi[i], dpsi[i], ddpsi[i]);
            let (g, dg, ddg) = (self.h[i], self.dh[i], self.ddh[i]);
            let new_h = p * p * g;
            // d/dr of ψ²h, then divide by dρ/dr = ψ² for each ρ-derivative
            let dr_h = 2.0 * p * dp * g + p * p * dg;
            let drr_h = 2.0 * (dp * dp + p * ddp) * g + 4.0 * p * dp * dg + p * p * ddg;
            let d1 = dr_h / (p * p);
            let d2 = (drr_h * p * p - dr_h * 2.0 * p * dp) / (p * p * p * p) / (p * p);
            h.push(new_h);
            dh.push(d1);
            ddh.push(d2);
        }
        let domain = Self { r: rho, h, dh, ddh, inner: self.inner };
        let spacing = domain.r.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max) / (domain.r_out() - domain.r_in());
        domain.check_roles(DEFAULT_TOL.max(10.0 * spacing * spacing))?;
        Ok(domain)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_space_is_scalar_flat() {
        let d = RadialDomain::flat_ball(1.0, 1024).unwrap();
        assert!(d.scalar_curvature().iter().all(|r| r.abs() < 1e-12));
        assert_eq!(d.boundary_mean_curvature(Side::Outer), Some(2.0));
        assert_eq!(d.boundary_mean_curvature(Side::Inner), None);
    }

    #[test]
    fn three_sphere_has_r_six() {
        let d = RadialDomain::sphere_cap(1.0, 1024).unwrap();
        assert!(d.scalar_curvature().iter().all(|r| (r - 6.0).abs() < 1e-9));
    }

    #[test]
    fn sampled_three_sphere_has_r_six_at_interior_nodes() {
        let r = fd::linspace(0.0, 1.0, 1024);
        let h = r.iter().map(|x| x.sin()).collect();
        let d = RadialDomain::from_samples(r, h, InnerRole::RegularCenter).unwrap();
        let big_r = d.scalar_curvature();
        for (i, v) in big_r.iter().enumerate().take(1023).skip(1) {
            assert!((v - 6.0).abs() < 1e-6, "node {i}: {v}");
        }
    }

    #[test]
    fn sampled_flat_ball_is_scalar_flat() {
        let r = fd::linspace(0.0, 1.0, 1024);
        let h = r.clone();
        let d = RadialDomain::from_samples(r, h, InnerRole::RegularCenter).unwrap();
        assert!(d.scalar_curvature().iter().all(|v| v.abs() < 1e-6));
    }

    #[test]
    fn regular_center_role_checked() {
        let r = fd::linspace(0.0, 1.0, 64);
        let h = r.iter().map(|x| 2.0 * x).collect();
        assert!(matches!(RadialDomain::from_samples(r, h, InnerRole::RegularCenter), Err(Error::RoleViolation(_))));
    }

    #[test]
    fn horizon_role_checked() {
        let r = fd::linspace(1.0, 2.0, 64);
        let h = r.clone();
        assert!(matches!(RadialDomain::from_samples(r, h, InnerRole::Horizon), Err(Error::RoleViolation(_))));
    }

    #[test]
    fn mean_convexity_sign() {
        let cap = RadialDomain::sphere_cap(2.0, 256).unwrap();
        assert!(cap.boundary_mean_curvature(Side::Outer).unwrap() < 0.0);
        let cap = RadialDomain::sphere_cap(1.0, 256).unwrap();
        assert!(cap.boundary_mean_curvature(Side::Outer).unwrap() > 0.0);
    }

    #[test]
    fn constant_factor_rescales() {
        let d = RadialDomain::flat_ball(1.0, 128).unwrap();
        let psi = alloc::vec![2.0; 128];
        let e = d.conformally_deformed(&psi).unwrap();
        assert!((e.r_out() - 4.0).abs() < 1e-12);
        assert!((e.boundary_mean_curvature(Side::Outer).unwrap() - 0.5).abs() < 1e-12);
    }
}
