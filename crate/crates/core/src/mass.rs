//! Brown-York mass, brackets on the fill-in supremum Λ, the variational mass
//! bracket and its additivity over boundary components.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::conformal::DomainRef;
use crate::embedding::{default_kappa_grid, embed_euclidean, lambda_upper_grid, LambdaUpper, PointGrid};
use crate::error::{Error, Result};
use crate::fillins::{cap_fill, validate_fillin};
use crate::geometry::{AxisymmetricMetric, BoundaryTag, RadialDomain};
use crate::DEFAULT_TOL;

/// Number of κ values in the default grid.
pub const DEFAULT_KAPPA_COUNT: usize = 16;
/// Number of axis points in the default base-point grid.
pub const DEFAULT_AXIS_POINTS: usize = 9;
/// Collar width of the cap used for horizon domains, relative to the horizon
/// area radius.
pub const CAP_COLLAR_FRACTION: f64 = 0.25;

/// `(1/8π) ∫ (H₀ − H) dσ` with `H₀` from the embedding in R³.
pub fn brown_york_mass(m: &AxisymmetricMetric, h: &[f64]) -> Result<f64> {
    if h.len() != m.nodes() {
        return Err(Error::FieldSizeMismatch { found: h.len(), expected: m.nodes() });
    }
    let (s, curvature) = m.min_gauss_curvature();
    if !(curvature > 0.0) {
        return Err(Error::NotConvex { s, curvature });
    }
    let surf = embed_euclidean(m)?;
    let diff: Vec<f64> = surf.mean_curvature().iter().zip(h).map(|(a, b)| a - b).collect();
    Ok(m.integrate(&diff) / (8.0 * PI))
}

/// Total mean curvature of Σ_O over 8π for either domain kind.
pub fn total_h_over_8pi(domain: DomainRef<'_>) -> f64 {
    match domain {
        DomainRef::Radial(d) => d.total_outer_mean_curvature_over_8pi(),
        DomainRef::Tet(d) => d.boundary_mean_curvature().total(BoundaryTag::Outer) / (8.0 * PI),
    }
}

/// The round boundary metric of a radial domain on `n` nodes.
pub fn round_boundary(domain: &RadialDomain, n: usize) -> Result<AxisymmetricMetric> {
    AxisymmetricMetric::round(domain.outer_area_radius(), n)
}

/// A fill-in offered as a lower-bound witness.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LowerCandidate {
    pub label: String,
    pub total_h_over_8pi: f64,
    /// Whether it validated as a member of F̊ for the boundary metric.
    pub accepted: bool,
}

/// `lower ≤ Λ ≤ upper` with the witnesses for each end.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LambdaBracket {
    /// `−∞` when no fill-in is known.
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::serde_ext::extended_f64"))]
    pub lower: f64,
    pub upper: f64,
    pub lower_source: Option<String>,
    pub candidates: Vec<LowerCandidate>,
    pub upper_detail: LambdaUpper,
}

impl LambdaBracket {
    pub fn has_lower(&self) -> bool {
        self.lower > f64::NEG_INFINITY
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

/// [`lambda_bracket_with_upper`] with the upper bound swept sequentially over
/// `kappas` (the default grid when `None`) and `grid`.
pub fn lambda_bracket(
    m: &AxisymmetricMetric,
    fillins: &[(&str, DomainRef<'_>)],
    kappas: Option<&[f64]>,
    grid: PointGrid,
) -> Result<LambdaBracket> {
    let default;
    let kappas = match kappas {
        Some(k) => k,
        None => {
            default = default_kappa_grid(m, DEFAULT_KAPPA_COUNT);
            &default
        }
    };
    lambda_bracket_with_upper(m, fillins, lambda_upper_grid(m, kappas, grid)?)
}

/// Lower end: the best validated fill-in, including the flat Weyl fill-in
/// when `K > 0`. Fill-ins that fail validation are kept in the candidate
/// list but do not count.
pub fn lambda_bracket_with_upper(
    m: &AxisymmetricMetric,
    fillins: &[(&str, DomainRef<'_>)],
    upper: LambdaUpper,
) -> Result<LambdaBracket> {
    let mut candidates = Vec::new();
    if m.min_gauss_curvature().1 > 0.0 {
        let surf = embed_euclidean(m)?;
        candidates.push(LowerCandidate {
            label: "flat_weyl".to_string(),
            total_h_over_8pi: surf.total_mean_curvature_over_8pi(),
            accepted: true,
        });
    }
    for (label, domain) in fillins {
        let report = validate_fillin(*domain, m);
        if !report.in_f_ring {
            log::warn!("fill-in {label} rejected: {report:?}");
        }
        candidates.push(LowerCandidate {
            label: label.to_string(),
            total_h_over_8pi: total_h_over_8pi(*domain),
            accepted: report.in_f_ring,
        });
    }
    let best = candidates.iter().filter(|c| c.accepted).fold(None::<&LowerCandidate>, |acc, c| match acc {
        Some(b) if b.total_h_over_8pi >= c.total_h_over_8pi => Some(b),
        _ => Some(c),
    });
    let (lower, lower_source) = match best {
        Some(c) => (c.total_h_over_8pi, Some(c.label.clone())),
        None => (f64::NEG_INFINITY, None),
    };
    // the two ends come from different discretizations; allow that much slack
    if lower > upper.value + DEFAULT_TOL * upper.value.abs() {
        return Err(Error::BracketInverted { lower, upper: upper.value });
    }
    Ok(LambdaBracket { lower, upper: upper.value, lower_source, candidates, upper_detail: upper })
}

/// Bracket on the variational mass `m(Σ; Ω) = Λ̊ − (1/8π) ∫ H dσ`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MassBracket {
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::serde_ext::extended_f64"))]
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    pub total_h_over_8pi: f64,
    /// `max(0, lambda_lower − total_h_over_8pi)`; the mass is nonnegative.
    pub mass_lower: f64,
    pub mass_upper: f64,
    pub provenance: MassProvenance,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct MassProvenance {
    /// `lambda_lower − total_h_over_8pi` before clamping.
    #[cfg_attr(feature = "serde", serde(serialize_with = "crate::serde_ext::extended_f64"))]
    pub raw_mass_lower: f64,
    /// Deficit of the cap fill used when the domain has a horizon.
    pub cap_fill_eta: Option<f64>,
    pub lambda: LambdaBracket,
}

impl MassBracket {
    fn from_lambda(lambda: LambdaBracket, total: f64, cap_fill_eta: Option<f64>) -> Self {
        let raw = lambda.lower - total;
        Self {
            lambda_lower: lambda.lower,
            lambda_upper: lambda.upper,
            total_h_over_8pi: total,
            mass_lower: raw.max(0.0),
            mass_upper: lambda.upper - total,
            provenance: MassProvenance { raw_mass_lower: raw, cap_fill_eta, lambda },
        }
    }

    /// Whether `value` lies in `[mass_lower, mass_upper]` up to `tol`.
    pub fn contains(&self, value: f64, tol: f64) -> bool {
        value >= self.mass_lower - tol && value <= self.mass_upper + tol
    }
}

/// [`variational_mass_bracket_with_upper`] with the upper bound swept over
/// `kappas` (default grid when `None`) and `grid`.
pub fn variational_mass_bracket(
    domain: DomainRef<'_>,
    target: &AxisymmetricMetric,
    kappas: Option<&[f64]>,
    grid: PointGrid,
) -> Result<MassBracket> {
    let default;
    let kappas = match kappas {
        Some(k) => k,
        None => {
            default = default_kappa_grid(target, DEFAULT_KAPPA_COUNT);
            &default
        }
    };
    variational_mass_bracket_with_upper(domain, target, lambda_upper_grid(target, kappas, grid)?)
}

/// The domain must be a member of F̊ for `target`; it is itself a lower-bound
/// witness. A radial domain with a horizon is also cap-filled into F and the
/// cap's deficit recorded.
pub fn variational_mass_bracket_with_upper(
    domain: DomainRef<'_>,
    target: &AxisymmetricMetric,
    upper: LambdaUpper,
) -> Result<MassBracket> {
    let report = validate_fillin(domain, target);
    if !report.in_f_ring {
        return Err(Error::NotAdmissible(format!(
            "min R = {:.3e}, min H on Σ_O = {:.3e}, max |H| on Σ_H = {:.3e}, metric residual = {:.3e}",
            report.min_r, report.min_h_outer, report.max_abs_h_inner, report.metric_residual
        )));
    }
    let total = total_h_over_8pi(domain);
    let capped = match domain {
        DomainRef::Radial(d) if d.has_inner_boundary() => Some(cap_fill(d, CAP_COLLAR_FRACTION * d.h()[0])?),
        _ => None,
    };
    let mut fillins: Vec<(&str, DomainRef<'_>)> = Vec::new();
    fillins.push(("domain", domain));
    if let Some(c) = &capped {
        fillins.push(("domain_cap_filled", DomainRef::Radial(&c.domain)));
    }
    let lambda = lambda_bracket_with_upper(target, &fillins, upper)?;
    Ok(MassBracket::from_lambda(lambda, total, capped.map(|c| c.eta)))
}

/// Sum of component brackets for a boundary with several components.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CombinedBracket {
    pub lambda_lower: f64,
    pub lambda_upper: f64,
    pub total_h_over_8pi: f64,
    pub mass_lower: f64,
    pub mass_upper: f64,
    /// Per component: `total_h_over_8pi ≤ lambda_upper`.
    pub component_bounds_hold: Vec<bool>,
}

/// Λ is additive over boundary components, so each end of the bracket sums.
pub fn additivity_combine(brackets: &[MassBracket]) -> Result<CombinedBracket> {
    if brackets.is_empty() {
        return Err(Error::InvalidParameter("no components to combine".into()));
    }
    if let Some(index) = brackets.iter().position(|b| !(b.lambda_lower > f64::NEG_INFINITY)) {
        return Err(Error::EmptyComponent { index });
    }
    let sum = |f: fn(&MassBracket) -> f64| brackets.iter().map(f).sum::<f64>();
    let lambda_lower = sum(|b| b.lambda_lower);
    let lambda_upper = sum(|b| b.lambda_upper);
    let total = sum(|b| b.total_h_over_8pi);
    Ok(CombinedBracket {
        lambda_lower,
        lambda_upper,
        total_h_over_8pi: total,
        mass_lower: (lambda_lower - total).max(0.0),
        mass_upper: lambda_upper - total,
        component_bounds_hold: brackets.iter().map(|b| b.total_h_over_8pi <= b.lambda_upper).collect(),
    })
}
