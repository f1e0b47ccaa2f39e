use alloc::format;
use alloc::vec::Vec;

use super::discretize::Discretization;
use super::{
    deformed_laplacian, finish_laws, solve_conformal, solve_nodal, Bc, BoundaryConditions, BoundaryNode,
    ConformalSolve, DeformedBoundaryReport, DomainRef, SolverDiagnostics,
};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryTag, InnerRole, RadialDomain, ScalarField};

/// Tolerance on `|H|` for a boundary piece to count as minimal.
pub const MINIMAL_TOL: f64 = 1e-6;

/// Mean-curvature jump across the gluing interface Σ_H of a double:
/// `H` seen from the first copy minus `H` seen from the second, both with the
/// normal pointing into the second copy. Nonnegative jumps are the ones that
/// corner smoothing can absorb.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CornerReport {
    pub nodes: Vec<usize>,
    pub jump: Vec<f64>,
}

impl CornerReport {
    pub fn min_jump(&self) -> f64 {
        self.jump.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Output of [`doubling_construct`]. Conformal factors are relative to the
/// input metric `g`: `g̃ = u⁴ g`, `g₁ = φ₁⁴ g̃ = (u φ₁)⁴ g` and likewise for
/// `g₂`; `phi1` and `phi2` hold the products `u φ₁`, `u φ₂`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DoublingReport {
    pub epsilon: f64,
    /// Whether the scalar-flattening step ran (`R ≢ 0`).
    pub scalar_flattened: bool,
    pub u: Vec<f64>,
    pub phi1: Vec<f64>,
    pub phi2: Vec<f64>,
    pub tilde: DeformedBoundaryReport,
    pub g1: DeformedBoundaryReport,
    pub g2: DeformedBoundaryReport,
    /// Item (i): max over Σ_H of `|φ₁⁴ − φ₂⁴|` (relative to `g`).
    pub metric_mismatch: f64,
    /// Item (ii): max over Σ_H of `|H_{g₁} + H_{g₂}|`, outward normals.
    pub curvature_sum: f64,
    /// Item (iii): `min_{Σ_O} (H_{g₁} − H_g̃)`.
    pub margin: f64,
    /// Item (iv): `max_{Σ_O} |H_g̃ − H_{g₂}|`, so `H_{g₂} ≥ H_g̃ − η`.
    pub eta: f64,
    /// Signed `max_{Σ_O} (H_g̃ − H_{g₂})`.
    pub max_deficit: f64,
    pub corner: CornerReport,
    /// The two halves `(Ω, g₁)` and `(Ω, g₂)` as warped products, for radial
    /// input.
    #[cfg_attr(feature = "serde", serde(skip))]
    pub halves: Option<(RadialDomain, RadialDomain)>,
}

fn pieces(boundary: &[BoundaryNode], tag: BoundaryTag) -> impl Iterator<Item = usize> + '_ {
    (0..boundary.len()).filter(move |&i| boundary[i].tag == tag)
}

/// Doubles a domain across its minimal boundary Σ_H with the conformal
/// factors `φ₁` (harmonic, `1` on Σ_O, `1 − ε/2` on Σ_H) and
/// `φ₂ = (2 − ε) − φ₁`, after first making the metric scalar-flat with a
/// Neumann-on-Σ_H solve when `R ≢ 0`. Every factor is computed relative to
/// `g` by linearity, so both halves share one discretization.
pub fn doubling_construct<'a>(domain: impl Into<DomainRef<'a>>, epsilon: f64) -> Result<DoublingReport> {
    let domain = domain.into();
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let boundary = domain.boundary_nodes();
    if !domain.has_inner_boundary() {
        return Err(Error::InvalidParameter("doubling needs an inner boundary Σ_H".into()));
    }
    let max_h = pieces(&boundary, BoundaryTag::Inner).map(|i| boundary[i].mean_curvature.abs()).fold(0.0, f64::max);
    if max_h > MINIMAL_TOL {
        return Err(Error::NotMinimal { max_h });
    }

    let n = domain.nodes();
    let r = domain.scalar_curvature();
    let zero = ScalarField::zeros(n);
    let scalar_flattened = r.values().iter().any(|v| v.abs() > 1e-12);
    let (u, mut diagnostics) = if scalar_flattened {
        let bc = BoundaryConditions::new(Bc::Dirichlet(1.0), Bc::Neumann(0.0));
        let s = solve_conformal(domain, &r, &zero, &bc)?;
        (s.u.into_values(), s.diagnostics)
    } else {
        (alloc::vec![1.0; n], SolverDiagnostics::default())
    };
    let psi1 = solve_nodal(domain, &r, &zero, |b| match b.tag {
        BoundaryTag::Outer => Bc::Dirichlet(1.0),
        BoundaryTag::Inner => Bc::Dirichlet(u[b.node] * (1.0 - 0.5 * epsilon)),
    })?;
    diagnostics.iterations += psi1.diagnostics.iterations;
    diagnostics.relative_residual = diagnostics.relative_residual.max(psi1.diagnostics.relative_residual);
    let psi1 = psi1.u.into_values();
    let psi2: Vec<f64> = u.iter().zip(&psi1).map(|(u, p)| (2.0 - epsilon) * u - p).collect();
    if let Some(i) = psi2.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveFactor { index: i, value: psi2[i] });
    }

    let disc = Discretization::new(domain, r.values());
    let zeros = alloc::vec![0.0; n];
    let report = |v: &[f64]| {
        let nd = disc.recover_flux(v, &zeros, &boundary);
        let lap = deformed_laplacian(&disc, v, &boundary, Some(&nd));
        finish_laws(&boundary, r.values(), v, &lap, &nd, diagnostics).1
    };
    let tilde = report(&u);
    let g1 = report(&psi1);
    let g2 = report(&psi2);

    let inner: Vec<usize> = pieces(&boundary, BoundaryTag::Inner).collect();
    let outer: Vec<usize> = pieces(&boundary, BoundaryTag::Outer).collect();
    let metric_mismatch = inner.iter().map(|&i| (g1.metric_factor[i] - g2.metric_factor[i]).abs()).fold(0.0, f64::max);
    let jump: Vec<f64> = inner.iter().map(|&i| g1.new_h[i] + g2.new_h[i]).collect();
    let curvature_sum = jump.iter().map(|j| j.abs()).fold(0.0, f64::max);
    let margin = outer.iter().map(|&i| g1.new_h[i] - tilde.new_h[i]).fold(f64::INFINITY, f64::min);
    let max_deficit = outer.iter().map(|&i| tilde.new_h[i] - g2.new_h[i]).fold(f64::NEG_INFINITY, f64::max);
    let eta = outer.iter().map(|&i| (tilde.new_h[i] - g2.new_h[i]).abs()).fold(0.0, f64::max);
    let corner = CornerReport { nodes: inner.iter().map(|&i| boundary[i].node).collect(), jump };

    let halves = match domain {
        DomainRef::Radial(d) => {
            let cut = d.with_inner_role(InnerRole::Cut)?;
            Some((cut.conformally_deformed(&psi1)?, cut.conformally_deformed(&psi2)?))
        }
        DomainRef::Tet(_) => None,
    };
    Ok(DoublingReport {
        epsilon,
        scalar_flattened,
        u,
        phi1: psi1,
        phi2: psi2,
        tilde,
        g1,
        g2,
        metric_mismatch,
        curvature_sum,
        margin,
        eta,
        max_deficit,
        corner,
        halves,
    })
}

/// Output of the `(1 + εw)⁴ g` perturbations.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PerturbationReport {
    pub epsilon: f64,
    /// The constant source `φ` in `Δw − (R/8) w = φ`.
    pub phi: f64,
    pub w: Vec<f64>,
    pub report: DeformedBoundaryReport,
}

impl PerturbationReport {
    /// Whether `min R(g_ε) > −6κ²`.
    pub fn within_budget(&self, kappa: f64) -> bool {
        self.report.min_r_new > -6.0 * kappa * kappa
    }
}

fn perturb(domain: DomainRef<'_>, phi: f64, epsilon: f64) -> Result<PerturbationReport> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be nonnegative, got {epsilon}")));
    }
    let n = domain.nodes();
    let r = domain.scalar_curvature();
    let w = solve_conformal(domain, &r, &ScalarField::constant(phi, n), &BoundaryConditions::dirichlet(0.0))?;
    let factor: Vec<f64> = w.u.values().iter().map(|w| 1.0 + epsilon * w).collect();
    if let Some(i) = factor.iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveFactor { index: i, value: factor[i] });
    }
    let nd: Vec<f64> = w.normal_derivative.iter().map(|d| epsilon * d).collect();
    let disc = Discretization::new(domain, r.values());
    let lap = deformed_laplacian(&disc, &factor, &w.boundary, Some(&nd));
    let (_, report) = finish_laws(&w.boundary, r.values(), &factor, &lap, &nd, w.diagnostics);
    Ok(PerturbationReport { epsilon, phi, w: w.u.into_values(), report })
}

/// Perturbation making a weakly mean-convex boundary strictly mean-convex:
/// `Δw − (R/8) w = 1`, `w = 0` on the boundary, so `w ≤ 0`, `∂w/∂ν > 0` and
/// `H(g_ε) = H + 4ε ∂w/∂ν > H`. The scalar curvature becomes
/// `(1 + εw)⁻⁵ (R − 8ε)`, negative by at most `O(ε)`.
pub fn weak_meanconvex_fix<'a>(domain: impl Into<DomainRef<'a>>, epsilon: f64) -> Result<PerturbationReport> {
    let domain = domain.into();
    let boundary = domain.boundary_nodes();
    if let Some(b) = boundary.iter().find(|b| b.tag == BoundaryTag::Outer && b.mean_curvature < -MINIMAL_TOL) {
        return Err(Error::NotAdmissible(format!("H = {} < 0 on the outer boundary", b.mean_curvature)));
    }
    perturb(domain, 1.0, epsilon)
}

/// Perturbation making the scalar curvature strictly positive:
/// `Δw − (R/8) w = −1`, `w = 0` on the boundary, `g^(τ) = (1 + τw)⁴ g` with
/// `R(g^(τ)) = (1 + τw)⁻⁵ (R + 8τ) > 0`, at the cost of an `O(τ)` drop in `H`.
pub fn positivity_perturbation<'a>(domain: impl Into<DomainRef<'a>>, tau: f64) -> Result<PerturbationReport> {
    perturb(domain.into(), -1.0, tau)
}

/// Output of [`scalar_flat_deformation`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFlatReport {
    pub solve: ConformalSolve,
    pub r_new: ScalarField,
    pub report: DeformedBoundaryReport,
}

/// Conformal change to a scalar-flat metric with the same boundary metric:
/// `Δu − (R/8) u = 0`, `u = 1` on the boundary. Since `R ≥ 0`, `u ≤ 1` and
/// `∂u/∂ν ≥ 0`, so `H` can only increase.
pub fn scalar_flat_deformation<'a>(domain: impl Into<DomainRef<'a>>) -> Result<ScalarFlatReport> {
    let domain = domain.into();
    let r = domain.scalar_curvature();
    let solve = solve_conformal(domain, &r, &ScalarField::zeros(domain.nodes()), &BoundaryConditions::dirichlet(1.0))?;
    let (r_new, report) = solve.laws(domain)?;
    Ok(ScalarFlatReport { solve, r_new, report })
}
