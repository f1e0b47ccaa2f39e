use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::fill_poles;
use crate::error::{Error, Result};
use crate::geometry::AxisymmetricMetric;
use crate::numerics::fd::{self, Parity};
use crate::DEFAULT_TOL;

/// A point `(t, x₁, x₂, x₃)` of the hyperboloid `−t² + |x|² = −1/κ²`, `t > 0`.
///
/// Surfaces are placed so that the symmetry axis is the geodesic
/// `x₂ = x₃ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct HyperbolicPoint {
    pub t: f64,
    pub x: [f64; 3],
}

impl HyperbolicPoint {
    /// Validates the hyperboloid constraint to a relative tolerance of 1e-8.
    pub fn new(t: f64, x: [f64; 3], kappa: f64) -> Result<Self> {
        let p = Self { t, x };
        if !(t > 0.0) || p.constraint_residual(kappa) > 1e-8 * (t * t).max(1.0 / (kappa * kappa)) {
            return Err(Error::InvalidParameter("point is not on the hyperboloid".into()));
        }
        Ok(p)
    }

    /// The point at signed distance `w` from the origin along the axis.
    pub fn on_axis(kappa: f64, w: f64) -> Self {
        Self::from_fermi(kappa, w, 0.0, 0.0)
    }

    /// Point at axial coordinate `w`, distance `sigma` from the axis, azimuth
    /// `phi` (Fermi coordinates about the axis).
    pub fn from_fermi(kappa: f64, w: f64, sigma: f64, phi: f64) -> Self {
        let c = (kappa * sigma).cosh() / kappa;
        let r = (kappa * sigma).sinh() / kappa;
        Self { t: c * (kappa * w).cosh(), x: [c * (kappa * w).sinh(), r * phi.cos(), r * phi.sin()] }
    }

    pub fn constraint_residual(&self, kappa: f64) -> f64 {
        (-self.t * self.t
            + self.x[0] * self.x[0]
            + self.x[1] * self.x[1]
            + self.x[2] * self.x[2]
            + 1.0 / (kappa * kappa))
            .abs()
    }

    /// Minkowski product with signature (−, +, +, +).
    pub fn minkowski(&self, other: &Self) -> f64 {
        -self.t * other.t + self.x[0] * other.x[0] + self.x[1] * other.x[1] + self.x[2] * other.x[2]
    }

    /// `(β, cosh κσ, sinh κσ, φ)` with `β = κ w` the axial rapidity.
    fn fermi(&self, kappa: f64) -> Fermi {
        let rho = (self.x[1] * self.x[1] + self.x[2] * self.x[2]).sqrt();
        let sinh = kappa * rho;
        Fermi {
            beta: (self.x[0] / self.t).atanh(),
            cosh: (1.0 + sinh * sinh).sqrt(),
            sinh,
            phi: self.x[2].atan2(self.x[1]),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Fermi {
    beta: f64,
    cosh: f64,
    sinh: f64,
    phi: f64,
}

/// Geodesic distance in `H³_{−κ²}`: `cosh κr = κ² |⟨P, Q⟩|`, evaluated via
/// `sinh(κr/2) = κ √⟨P−Q, P−Q⟩ / 2` to stay accurate for nearby points.
pub fn hyperbolic_distance(p: &HyperbolicPoint, q: &HyperbolicPoint, kappa: f64) -> f64 {
    let d = HyperbolicPoint { t: p.t - q.t, x: [p.x[0] - q.x[0], p.x[1] - q.x[1], p.x[2] - q.x[2]] };
    let chord = d.minkowski(&d).max(0.0).sqrt();
    2.0 / kappa * (0.5 * kappa * chord).asinh()
}

/// An axisymmetric metric realized in `H³_{−κ²}` as the orbit of the curve
/// `(t, z, f) = (a cosh β, a sinh β, f)` with `a = √(1/κ² + f²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RevolutionSurfaceH3 {
    source: AxisymmetricMetric,
    kappa: f64,
    beta: Vec<f64>,
    t: Vec<f64>,
    z: Vec<f64>,
    h0: Vec<f64>,
}

/// Embeds `m` in `H³_{−κ²}`. The arc-length constraint gives
/// `β' = √(1 − p²)/a` with `p = f'/(κa)`; `β` is integrated from `β(0) = 0`.
pub fn embed_hyperbolic(m: &AxisymmetricMetric, kappa: f64) -> Result<RevolutionSurfaceH3> {
    if !(kappa > 0.0) || !kappa.is_finite() {
        return Err(Error::InvalidParameter("kappa must be positive and finite".into()));
    }
    let bound = -kappa * kappa;
    let k = m.gauss_curvature();
    if let Some(i) = (0..k.len()).find(|&i| k[i] <= bound) {
        return Err(Error::CurvatureBoundViolated { s: m.s()[i], curvature: k[i], bound });
    }
    let (s, f, df, ddf) = (m.s(), m.f(), m.df(), m.ddf());
    let n = m.nodes();
    let inv_k2 = 1.0 / (kappa * kappa);
    let a: Vec<f64> = f.iter().map(|v| (inv_k2 + v * v).sqrt()).collect();
    let mut q = vec![0.0; n];
    let mut h0 = vec![0.0; n];
    for i in 0..n {
        let p = df[i] / (kappa * a[i]);
        if p * p > 1.0 + DEFAULT_TOL {
            return Err(Error::OdeBreakdown { s: s[i] });
        }
        q[i] = (1.0 - p * p).max(0.0).sqrt();
        if i > 0 && i < n - 1 {
            let dp = ddf[i] / (kappa * a[i]) - f[i] * df[i] * df[i] / (kappa * a[i].powi(3));
            // meridian: −p'/q + κ q f/a (axis term); parallel: κ q a/f
            h0[i] = -dp / q[i] + kappa * q[i] * (f[i] / a[i] + a[i] / f[i]);
        }
    }
    fill_poles(s, &mut h0);
    let dbeta: Vec<f64> = q.iter().zip(&a).map(|(q, a)| q / a).collect();
    let beta = fd::cumulative_integral(s, &dbeta);
    let t = beta.iter().zip(&a).map(|(b, a)| a * b.cosh()).collect();
    let z = beta.iter().zip(&a).map(|(b, a)| a * b.sinh()).collect();
    Ok(RevolutionSurfaceH3 { source: m.clone(), kappa, beta, t, z, h0 })
}

impl RevolutionSurfaceH3 {
    pub fn source(&self) -> &AxisymmetricMetric {
        &self.source
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn t(&self) -> &[f64] {
        &self.t
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    /// Axial rapidity `β(s)`; the surface meets the axis at `β = 0` and
    /// `β = β(L)`.
    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn mean_curvature(&self) -> &[f64] {
        &self.h0
    }

    /// Length `β(L)/κ` of the axis segment inside the surface.
    pub fn axis_length(&self) -> f64 {
        self.beta[self.beta.len() - 1] / self.kappa
    }

    /// Axis point halfway between the poles.
    pub fn center(&self) -> HyperbolicPoint {
        HyperbolicPoint::on_axis(self.kappa, 0.5 * self.axis_length())
    }

    /// Surface point at node `i` and azimuth `phi`.
    pub fn point(&self, i: usize, phi: f64) -> HyperbolicPoint {
        let f = self.source.f()[i];
        HyperbolicPoint { t: self.t[i], x: [self.z[i], f * phi.cos(), f * phi.sin()] }
    }

    pub fn total_mean_curvature(&self) -> f64 {
        self.source.integrate(&self.h0)
    }

    /// Max node residual of `−t² + z² + f² + 1/κ² = 0`.
    pub fn hyperboloid_residual(&self) -> f64 {
        let k2 = 1.0 / (self.kappa * self.kappa);
        (0..self.t.len())
            .map(|i| {
                let f = self.source.f()[i];
                (-self.t[i] * self.t[i] + self.z[i] * self.z[i] + f * f + k2).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Max node residual of `−t'² + z'² + f'² = 1` with `t'`, `z'` from finite
    /// differences of the stored coordinates.
    pub fn arc_length_residual(&self) -> f64 {
        let s = self.source.s();
        let dt = fd::derivative(s, &self.t, Parity::Even, Parity::Even);
        let dz = fd::derivative(s, &self.z, Parity::Even, Parity::Even);
        (0..s.len())
            .map(|i| {
                let p = self.source.df()[i];
                (-dt[i] * dt[i] + dz[i] * dz[i] + p * p - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// `cosh κσ` and `sinh κσ` at each node, `σ` the distance to the axis.
    fn axis_distance(&self) -> (Vec<f64>, Vec<f64>) {
        let k = self.kappa;
        let sinh: Vec<f64> = self.source.f().iter().map(|f| k * f).collect();
        let cosh = sinh.iter().map(|s| (1.0 + s * s).sqrt()).collect();
        (cosh, sinh)
    }

    /// Whether `p` lies strictly inside the region bounded by the surface.
    /// `β` is nondecreasing along the meridian, so the region is the set of
    /// points whose axial rapidity is in `(0, β(L))` and whose distance to the
    /// axis is below the meridian's at that rapidity.
    pub fn encloses(&self, p: &HyperbolicPoint) -> bool {
        let fp = p.fermi(self.kappa);
        let n = self.beta.len();
        if !(fp.beta > 0.0 && fp.beta < self.beta[n - 1]) {
            return false;
        }
        let i = self.beta.partition_point(|&b| b <= fp.beta).clamp(1, n - 1);
        let (b0, b1) = (self.beta[i - 1], self.beta[i]);
        let f = self.source.f();
        let sigma_profile = if b1 > b0 {
            let w = (fp.beta - b0) / (b1 - b0);
            f[i - 1] * (1.0 - w) + f[i] * w
        } else {
            f[i - 1].max(f[i])
        };
        fp.sinh / self.kappa < sigma_profile
    }

    /// `min_y cosh κ r(p, y)` over the surface.
    fn min_cosh_distance(&self, p: &HyperbolicPoint) -> f64 {
        let fp = p.fermi(self.kappa);
        let (ch, sh) = self.axis_distance();
        // minimizing over the azimuth aligns the orbit point with p
        let g: Vec<f64> =
            (0..ch.len()).map(|i| ch[i] * fp.cosh * (self.beta[i] - fp.beta).cosh() - sh[i] * fp.sinh).collect();
        let (i, gmin) =
            g.iter().copied().enumerate().fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
        let refined = if i > 0 && i + 1 < g.len() {
            // vertex of the parabola through the three nodes around the minimum
            let s = self.source.s();
            let w = fd::fornberg_weights(s[i], &s[i - 1..=i + 1], 2);
            let (d1, d2) = (fd::dot(&w[1], &g[i - 1..=i + 1]), fd::dot(&w[2], &g[i - 1..=i + 1]));
            if d2 > 0.0 {
                gmin - 0.5 * d1 * d1 / d2
            } else {
                gmin
            }
        } else {
            gmin
        };
        refined.clamp(1.0, gmin)
    }
}

/// `r_* = min_y r(p, y)` over the embedded surface.
pub fn min_distance(surf: &RevolutionSurfaceH3, p: &HyperbolicPoint) -> f64 {
    surf.min_cosh_distance(p).acosh() / surf.kappa
}

const AZIMUTH_POINTS: usize = 64;

/// `∫ H₀ cosh(κ r(p, ·)) dσ₀`. One-dimensional when `p` is on the symmetry
/// axis; otherwise the azimuthal integral is done by the periodic trapezoid
/// rule.
pub fn cosh_weighted_total(surf: &RevolutionSurfaceH3, p: &HyperbolicPoint) -> f64 {
    let fp = p.fermi(surf.kappa);
    let (ch, sh) = surf.axis_distance();
    let n = ch.len();
    let weight: Vec<f64> = if fp.sinh == 0.0 {
        (0..n).map(|i| ch[i] * fp.cosh * (surf.beta[i] - fp.beta).cosh()).collect()
    } else {
        (0..n)
            .map(|i| {
                let axial = ch[i] * fp.cosh * (surf.beta[i] - fp.beta).cosh();
                let sum: f64 = (0..AZIMUTH_POINTS)
                    .map(|j| {
                        let phi = 2.0 * PI * j as f64 / AZIMUTH_POINTS as f64;
                        axial - sh[i] * fp.sinh * (phi - fp.phi).cos()
                    })
                    .sum();
                sum / AZIMUTH_POINTS as f64
            })
            .collect()
    };
    let integrand: Vec<f64> = surf.h0.iter().zip(&weight).map(|(h, w)| h * w).collect();
    surf.source.integrate(&integrand)
}

impl RevolutionSurfaceH3 {
    /// `(1/8π) (cosh κ r_*)⁻¹ ∫ H₀ cosh(κ r(p, ·)) dσ₀`.
    pub fn lambda_upper(&self, p: &HyperbolicPoint) -> Result<f64> {
        if !self.encloses(p) {
            return Err(Error::PointNotEnclosed);
        }
        Ok(cosh_weighted_total(self, p) / (8.0 * PI * self.min_cosh_distance(p)))
    }
}

/// Upper bound on `(1/8π) ∫ H dσ` over all admissible fill-ins of `m`, from
/// the embedding in `H³_{−κ²}` and a base point `p` inside it.
pub fn lambda_upper_bound(m: &AxisymmetricMetric, kappa: f64, p: &HyperbolicPoint) -> Result<f64> {
    embed_hyperbolic(m, kappa)?.lambda_upper(p)
}

/// Base points on the symmetry axis, chosen per κ since the embedded surface
/// depends on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointGrid {
    /// The axis midpoint.
    Center,
    /// `n` equally spaced interior axis points.
    Axis(usize),
}

impl PointGrid {
    fn positions(&self, axis_length: f64) -> Vec<f64> {
        match *self {
            Self::Center => vec![0.5 * axis_length],
            Self::Axis(n) => (1..=n).map(|j| axis_length * j as f64 / (n + 1) as f64).collect(),
        }
    }
}

/// One `(κ, p)` entry of an upper-bound sweep; `axis_position` is the axial
/// coordinate of `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct UpperEvaluation {
    pub kappa: f64,
    pub axis_position: f64,
    pub value: f64,
}

/// Bounds for every base point of `grid` at a single κ.
pub fn lambda_upper_at_kappa(m: &AxisymmetricMetric, kappa: f64, grid: PointGrid) -> Result<Vec<UpperEvaluation>> {
    let surf = embed_hyperbolic(m, kappa)?;
    grid.positions(surf.axis_length())
        .into_iter()
        .map(|w| {
            let p = HyperbolicPoint::on_axis(kappa, w);
            surf.lambda_upper(&p).map(|value| UpperEvaluation { kappa, axis_position: w, value })
        })
        .collect()
}

/// Minimum of the hyperbolic upper bound over a `(κ, p)` grid.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LambdaUpper {
    pub value: f64,
    pub kappa: f64,
    pub axis_position: f64,
    pub evaluations: Vec<UpperEvaluation>,
    /// κ values whose embedding failed.
    pub skipped_kappas: Vec<f64>,
}

impl LambdaUpper {
    /// Combines per-κ results (in grid order). Failed κ values are skipped;
    /// if every κ failed the first error is returned.
    pub fn from_results(results: Vec<(f64, Result<Vec<UpperEvaluation>>)>) -> Result<Self> {
        let mut evaluations = Vec::new();
        let mut skipped_kappas = Vec::new();
        let mut first_err = None;
        for (kappa, r) in results {
            match r {
                Ok(v) => evaluations.extend(v),
                Err(e) => {
                    skipped_kappas.push(kappa);
                    first_err.get_or_insert(e);
                }
            }
        }
        let best = evaluations.iter().copied().fold(None::<UpperEvaluation>, |acc, e| match acc {
            Some(b) if b.value <= e.value => Some(b),
            _ => Some(e),
        });
        match best {
            Some(b) => {
                Ok(Self { value: b.value, kappa: b.kappa, axis_position: b.axis_position, evaluations, skipped_kappas })
            }
            None => Err(first_err.unwrap_or(Error::InvalidParameter("empty kappa grid".into()))),
        }
    }
}

/// Sequential sweep of [`lambda_upper_at_kappa`] over `kappas`.
pub fn lambda_upper_grid(m: &AxisymmetricMetric, kappas: &[f64], grid: PointGrid) -> Result<LambdaUpper> {
    LambdaUpper::from_results(kappas.iter().map(|&k| (k, lambda_upper_at_kappa(m, k, grid))).collect())
}

/// `κ = 1.05 √max(0, −min K) + 0.01`, which keeps `K > −κ²`.
pub fn kappa_rule(m: &AxisymmetricMetric) -> f64 {
    let (_, kmin) = m.min_gauss_curvature();
    (-kmin).max(0.0).sqrt() * 1.05 + 0.01
}

/// `n` log-spaced κ values. For positive curvature the grid runs from 1e-3
/// up to `max(κ_rule, 1)` (the bound improves toward κ → 0); otherwise from
/// `κ_rule` to `10 κ_rule`.
pub fn default_kappa_grid(m: &AxisymmetricMetric, n: usize) -> Vec<f64> {
    let rule = kappa_rule(m);
    let (_, kmin) = m.min_gauss_curvature();
    let (lo, hi) = if kmin > 0.0 { (1e-3, rule.max(1.0)) } else { (rule, 10.0 * rule) };
    if n <= 1 {
        return vec![lo];
    }
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_sphere_kappa_one() {
        let m = AxisymmetricMetric::round(1.0, 1024).unwrap();
        let surf = embed_hyperbolic(&m, 1.0).unwrap();
        for h in surf.mean_curvature() {
            assert!((h - 2.0 * 2.0f64.sqrt()).abs() < 1e-6, "{h}");
        }
        assert!(surf.hyperboloid_residual() < 1e-8);
        let s0 = 1.0f64.asinh();
        assert!((surf.axis_length() - 2.0 * s0).abs() < 1e-7);
        let c = surf.center();
        assert!((min_distance(&surf, &c) - s0).abs() < 1e-7);
        assert!((surf.lambda_upper(&c).unwrap() - 2.0f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn distances_along_axis() {
        let p = HyperbolicPoint { t: 1.0, x: [0.0; 3] };
        let q = HyperbolicPoint { t: 1.0f64.cosh(), x: [1.0f64.sinh(), 0.0, 0.0] };
        assert!((hyperbolic_distance(&p, &q, 1.0) - 1.0).abs() < 1e-14);
        assert_eq!(hyperbolic_distance(&p, &p, 1.0), 0.0);
    }

    #[test]
    fn outside_point_rejected() {
        let m = AxisymmetricMetric::round(1.0, 128).unwrap();
        let surf = embed_hyperbolic(&m, 1.0).unwrap();
        let p = HyperbolicPoint::on_axis(1.0, 3.0);
        assert_eq!(surf.lambda_upper(&p), Err(Error::PointNotEnclosed));
        let off = HyperbolicPoint::from_fermi(1.0, surf.axis_length() / 2.0, 0.95, 0.3);
        assert!(!surf.encloses(&off));
    }
}
