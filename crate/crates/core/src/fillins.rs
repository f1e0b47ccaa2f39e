//! Generators and validators for fill-ins: compact 3-manifolds with `R ≥ 0`
//! whose outer boundary carries a prescribed metric with positive mean
//! curvature, optionally with additional minimal ("horizon") boundary.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conformal::{DomainRef, MINIMAL_TOL};
use crate::error::{Error, Result};
use crate::geometry::{AxisymmetricMetric, BoundaryTag, InnerRole, RadialDomain, Side};
use crate::numerics::fd;

/// Scalar curvature above `−SCALAR_CURVATURE_TOL` counts as nonnegative.
pub const SCALAR_CURVATURE_TOL: f64 = 1e-8;
/// Relative tolerance of the boundary-metric match for radial domains.
pub const METRIC_TOL: f64 = 1e-6;
/// Relative area tolerance of the boundary-metric match for tet meshes, whose
/// polyhedral boundary only approximates a smooth target.
pub const TET_AREA_TOL: f64 = 5e-2;

/// Membership of a domain in the fill-in classes of a target metric.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FillinReport {
    pub min_r: f64,
    /// Minimum mean curvature over Σ_O.
    pub min_h_outer: f64,
    /// Maximum `|H|` over the remaining boundary (0 if there is none).
    pub max_abs_h_inner: f64,
    pub has_inner_boundary: bool,
    /// Relative mismatch between the induced metric on Σ_O and the target.
    pub metric_residual: f64,
    /// Member of F: `R ≥ 0`, `H > 0`, boundary is Σ_O alone.
    pub in_f: bool,
    /// Member of F̊: as F, but the rest of the boundary may be minimal.
    pub in_f_ring: bool,
}

/// Reports F and F̊ membership of `domain` for the boundary metric `target`.
///
/// Radial domains have round Σ_O, compared node by node with `target`; tet
/// meshes compare total area only.
pub fn validate_fillin<'a>(domain: impl Into<DomainRef<'a>>, target: &AxisymmetricMetric) -> FillinReport {
    let domain = domain.into();
    let (min_r, metric_residual) = match domain {
        DomainRef::Radial(d) => {
            let min_r = d.scalar_curvature().iter().copied().fold(f64::INFINITY, f64::min);
            (min_r, round_metric_residual(d.outer_area_radius(), target))
        }
        DomainRef::Tet(d) => {
            let min_r = d.tet_scalar_curvature().iter().copied().fold(f64::INFINITY, f64::min);
            let area = d.boundary_mean_curvature().area(BoundaryTag::Outer);
            (min_r, (area - target.area()).abs() / target.area())
        }
    };
    let boundary = domain.boundary_nodes();
    let min_h_outer =
        boundary.iter().filter(|b| b.tag == BoundaryTag::Outer).map(|b| b.mean_curvature).fold(f64::INFINITY, f64::min);
    let max_abs_h_inner =
        boundary.iter().filter(|b| b.tag == BoundaryTag::Inner).map(|b| b.mean_curvature.abs()).fold(0.0, f64::max);
    let has_inner_boundary = domain.has_inner_boundary();
    let metric_tol = match domain {
        DomainRef::Radial(_) => METRIC_TOL,
        DomainRef::Tet(_) => TET_AREA_TOL,
    };
    let base = min_r >= -SCALAR_CURVATURE_TOL && min_h_outer > 0.0 && metric_residual <= metric_tol;
    FillinReport {
        min_r,
        min_h_outer,
        max_abs_h_inner,
        has_inner_boundary,
        metric_residual,
        in_f: base && !has_inner_boundary,
        in_f_ring: base && max_abs_h_inner <= MINIMAL_TOL,
    }
}

/// Distance of `target` from the round sphere of area radius `radius`:
/// meridian length and profile `ρ sin(s/ρ)`, relative to `ρ`.
fn round_metric_residual(radius: f64, target: &AxisymmetricMetric) -> f64 {
    let length = (target.length() - PI * radius).abs() / radius;
    let profile = target
        .s()
        .iter()
        .zip(target.f())
        .map(|(s, f)| (f - radius * (PI * s / target.length()).sin()).abs() / radius)
        .fold(0.0, f64::max);
    length.max(profile)
}

/// Parameters of [`random_radial_fillin_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomFillinParams {
    pub nodes: usize,
    /// Outer radius before truncation.
    pub radius: f64,
    /// Lower end of the `h''` sampling range.
    pub c_min: f64,
    /// The profile stops before `h'` would fall below this.
    pub h_min: f64,
}

impl Default for RandomFillinParams {
    fn default() -> Self {
        Self { nodes: 64, radius: 1.0, c_min: -1.0, h_min: 0.05 }
    }
}

/// [`random_radial_fillin_with`] with default parameters and `nodes` nodes.
pub fn random_radial_fillin(seed: u64, nodes: usize) -> Result<RadialDomain> {
    random_radial_fillin_with(seed, RandomFillinParams { nodes, ..Default::default() })
}

/// A regular-center radial domain with `R ≥ 0` by construction.
///
/// `h` is piecewise quadratic on an even grid: on each step `h''` is drawn
/// uniformly from `[c_min, min((1 − h'²)/(2h), (1 − h')/Δ)]`, which keeps
/// `R ≥ 0` at the node and `h' ≤ 1`. Derivatives are stored exactly. The
/// profile ends early if a step would take `h'` below `h_min`.
pub fn random_radial_fillin_with(seed: u64, params: RandomFillinParams) -> Result<RadialDomain> {
    let n = params.nodes;
    if n < crate::MIN_NODES || !(params.radius > 0.0) || !(params.h_min > 0.0 && params.h_min < 1.0) {
        return Err(Error::InvalidParameter(format!("invalid random fill-in parameters {params:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dr = params.radius / (n - 1) as f64;
    let (mut r, mut h, mut dh, mut ddh) =
        (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
    let (mut x, mut hv, mut d) = (0.0, 0.0, 1.0);
    for i in 0..n {
        let c = if i == 0 || i == n - 1 {
            0.0
        } else {
            let hi = ((1.0 - d * d) / (2.0 * hv)).min((1.0 - d) / dr).max(params.c_min);
            let lo = params.c_min;
            lo + rng.gen::<f64>() * (hi - lo)
        };
        r.push(x);
        h.push(hv);
        dh.push(d);
        if i > 0 && d + c * dr < params.h_min && i + 1 >= crate::MIN_NODES {
            ddh.push(0.0);
            break;
        }
        let c = if d + c * dr < params.h_min { (params.h_min - d) / dr } else { c };
        ddh.push(c);
        if i + 1 < n {
            hv += d * dr + 0.5 * c * dr * dr;
            d += c * dr;
            x += dr;
        }
    }
    // last node: curvature-neutral choice within the admissible range
    let last = h.len() - 1;
    ddh[last] = ddh[last].min((1.0 - dh[last] * dh[last]) / (2.0 * h[last]));
    RadialDomain::from_parts(r, h, dh, ddh, InnerRole::RegularCenter)
}

/// Totals of Theorem-1.1 type for a round-boundary fill-in in F.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ShiTam {
    /// `∫ H dσ = 8π h h'(r_out)`.
    pub total_h: f64,
    /// `∫ H₀ dσ = 8π h(r_out)` for the round boundary embedded in R³.
    pub total_h0: f64,
    pub gap: f64,
}

impl ShiTam {
    /// Equality detection: gap below 1e-6.
    pub fn is_equality(&self) -> bool {
        self.gap < 1e-6
    }
}

/// Compares `∫ H` with `∫ H₀` for a regular-center radial fill-in.
pub fn shitam_check(domain: &RadialDomain) -> Result<ShiTam> {
    let min_r = domain.scalar_curvature().iter().copied().fold(f64::INFINITY, f64::min);
    let h_out = domain.boundary_mean_curvature(Side::Outer).unwrap_or(0.0);
    if domain.has_inner_boundary() || min_r < -SCALAR_CURVATURE_TOL || !(h_out > 0.0) {
        return Err(Error::NotInF);
    }
    let total_h = domain.total_outer_mean_curvature();
    let total_h0 = 8.0 * PI * domain.outer_area_radius();
    Ok(ShiTam { total_h, total_h0, gap: total_h0 - total_h })
}

/// Max over nodes of `|h(r) − r|`: the flatness test used after an equality
/// detection.
pub fn flatness_defect(domain: &RadialDomain) -> f64 {
    domain.r().iter().zip(domain.h()).map(|(r, h)| (h - r).abs()).fold(0.0, f64::max)
}

/// Spatial Schwarzschild of mass `m` from the horizon (area radius `2m`) out
/// to area radius `r_out`, sampled on `n` nodes even in proper distance.
///
/// Built from isotropic coordinates, `g = (1 + m/2ρ)⁴ δ`: proper distance
/// `r(ρ) = ρ + m ln ρ − m²/(4ρ)` (shifted to vanish at `ρ = m/2`), area
/// radius `h = ρ(1 + a)²`, `h' = (1 − a)/(1 + a)`, `h'' = 2a/(ρ(1 + a)⁴)` with
/// `a = m/(2ρ)`.
pub fn schwarzschild_band(m: f64, r_out: f64, n: usize) -> Result<RadialDomain> {
    if !(m > 0.0) || !(r_out > 2.0 * m) || !r_out.is_finite() {
        return Err(Error::InvalidRadii { mass: m, outer: r_out });
    }
    if r_out < 2.0 * m * (1.0 + 1e-4) {
        log::warn!("outer radius {r_out} is within 1e-4 of the horizon 2m = {}", 2.0 * m);
    }
    let rho_h = 0.5 * m;
    let rho_out = {
        let b = r_out - m;
        0.5 * (b + (b * b - m * m).max(0.0).sqrt())
    };
    let proper = |rho: f64| rho + m * rho.ln() - m * m / (4.0 * rho) - (rho_h + m * rho_h.ln() - m * m / (4.0 * rho_h));
    let length = proper(rho_out);
    let r = fd::linspace(0.0, length, n);
    let mut rho = Vec::with_capacity(n);
    let mut guess = rho_h;
    for (i, &target) in r.iter().enumerate() {
        if i == 0 {
            rho.push(rho_h);
            continue;
        }
        if i == n - 1 {
            rho.push(rho_out);
            continue;
        }
        for _ in 0..100 {
            let a = m / (2.0 * guess);
            let step = (proper(guess) - target) / ((1.0 + a) * (1.0 + a));
            guess -= step;
            if step.abs() <= 1e-15 * guess {
                break;
            }
        }
        rho.push(guess);
    }
    let mut h = Vec::with_capacity(n);
    let mut dh = Vec::with_capacity(n);
    let mut ddh = Vec::with_capacity(n);
    for &p in &rho {
        let a = m / (2.0 * p);
        h.push(p * (1.0 + a) * (1.0 + a));
        dh.push((1.0 - a) / (1.0 + a));
        ddh.push(2.0 * a / (p * (1.0 + a).powi(4)));
    }
    // exact at the horizon
    h[0] = 2.0 * m;
    dh[0] = 0.0;
    h[n - 1] = r_out;
    RadialDomain::from_parts(r, h, dh, ddh, InnerRole::Horizon)
}

/// A cap-filled domain and its bookkeeping.
#[derive(Debug, Clone, PartialEq)]
pub struct CapFill {
    pub domain: RadialDomain,
    /// Max deficit of the outer mean curvature relative to the input.
    pub eta: f64,
    /// `(r, jump of h'')` at each seam, where the metric is only C¹.
    pub curvature_jumps: Vec<(f64, f64)>,
    pub collar_width: f64,
}

/// Caps a minimal inner sphere of area radius `a`: a round hemisphere of the
/// 3-sphere of radius `a` (`h = a sin(r/a)`, `R = 6/a²`), then a cylindrical
/// collar `h = a` (`R = 2/a²`) of the given width, then the input band. All
/// seams match `h` and `h' = 0`; the band's nodes are kept unchanged.
pub fn cap_fill(domain: &RadialDomain, collar_width: f64) -> Result<CapFill> {
    if !domain.has_inner_boundary() {
        return Err(Error::NotMinimalInner { slope: 1.0 });
    }
    let slope = domain.dh()[0];
    if slope.abs() > MINIMAL_TOL {
        return Err(Error::NotMinimalInner { slope });
    }
    if !(collar_width >= 0.0) {
        return Err(Error::InvalidParameter(format!("collar width must be nonnegative, got {collar_width}")));
    }
    let a = domain.h()[0];
    let spacing = domain.r().windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    let cap_len = 0.5 * PI * a;
    let cap_nodes = ((cap_len / spacing).ceil() as usize + 1).max(crate::MIN_NODES);
    let collar_nodes = if collar_width > 0.0 { ((collar_width / spacing).ceil() as usize + 1).max(2) } else { 0 };

    let (mut r, mut h, mut dh, mut ddh) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for x in fd::linspace(0.0, cap_len, cap_nodes).into_iter().take(cap_nodes - 1) {
        r.push(x);
        h.push(a * (x / a).sin());
        dh.push((x / a).cos());
        ddh.push(-(x / a).sin() / a);
    }
    let mut curvature_jumps = Vec::new();
    if collar_nodes > 0 {
        curvature_jumps.push((cap_len, 1.0 / a));
        for x in fd::linspace(cap_len, cap_len + collar_width, collar_nodes).into_iter().take(collar_nodes - 1) {
            r.push(x);
            h.push(a);
            dh.push(0.0);
            ddh.push(0.0);
        }
    }
    let shift = cap_len + collar_width - domain.r_in();
    let before = if collar_nodes > 0 { 0.0 } else { -1.0 / a };
    curvature_jumps.push((cap_len + collar_width, domain.ddh()[0] - before));
    for i in 0..domain.nodes() {
        r.push(domain.r()[i] + shift);
        h.push(domain.h()[i]);
        dh.push(domain.dh()[i]);
        ddh.push(domain.ddh()[i]);
    }
    let composite = RadialDomain::from_parts(r, h, dh, ddh, InnerRole::RegularCenter)?;
    let old = domain.boundary_mean_curvature(Side::Outer).unwrap_or(0.0);
    let new = composite.boundary_mean_curvature(Side::Outer).unwrap_or(0.0);
    Ok(CapFill { domain: composite, eta: (old - new).max(0.0), curvature_jumps, collar_width })
}
