//! The linear conformal-Laplacian equation `Δ_g u − (R/8) u = rhs` on radial
//! and tetrahedral domains, the transformation laws of `R` and `H` under
//! `g ↦ u⁴ g`, and the conformal constructions built from them.
//!
//! Both discretizations share one structure: a symmetric stiffness matrix `K`
//! with `uᵀKu ≈ ∫|∇u|²`, lumped node volumes `V`, and lumped boundary areas
//! `A`. The equation at node `i` reads
//! `[(K + RV/8) u]_i + V_i rhs_i = A_i ∂u/∂ν`, which also recovers boundary
//! fluxes from a solution.

mod constructions;
mod discretize;

pub use constructions::{
    doubling_construct, positivity_perturbation, scalar_flat_deformation, weak_meanconvex_fix, CornerReport,
    DoublingReport, PerturbationReport, ScalarFlatReport, MINIMAL_TOL,
};

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryTag, RadialDomain, ScalarField, TetDomain};
use crate::numerics::fd::{self, Parity};
use crate::numerics::sparse::pcg;
pub use crate::numerics::sparse::CgDiagnostics as SolverDiagnostics;
use crate::DEFAULT_TOL;
use discretize::{Discretization, Operator};

/// Relative residual target of the conjugate-gradient solves.
pub const CG_TOLERANCE: f64 = 1e-10;

/// A radial or tetrahedral domain, borrowed.
#[derive(Debug, Clone, Copy)]
pub enum DomainRef<'a> {
    Radial(&'a RadialDomain),
    Tet(&'a TetDomain),
}

impl<'a> From<&'a RadialDomain> for DomainRef<'a> {
    fn from(d: &'a RadialDomain) -> Self {
        Self::Radial(d)
    }
}

impl<'a> From<&'a TetDomain> for DomainRef<'a> {
    fn from(d: &'a TetDomain) -> Self {
        Self::Tet(d)
    }
}

impl DomainRef<'_> {
    pub fn nodes(&self) -> usize {
        match self {
            Self::Radial(d) => d.nodes(),
            Self::Tet(d) => d.vertex_count(),
        }
    }

    /// Scalar curvature per node (per vertex for meshes, volume-averaged).
    pub fn scalar_curvature(&self) -> ScalarField {
        match self {
            Self::Radial(d) => d.scalar_curvature().into(),
            Self::Tet(d) => d.vertex_scalar_curvature().into(),
        }
    }

    /// Boundary nodes with their lumped areas and mean curvatures. Radial
    /// domains list the inner sphere (if any) first, then the outer sphere.
    pub fn boundary_nodes(&self) -> Vec<BoundaryNode> {
        match self {
            Self::Radial(d) => {
                let n = d.nodes();
                let sphere = |i: usize| 4.0 * core::f64::consts::PI * d.h()[i] * d.h()[i];
                let mut out = Vec::new();
                if d.has_inner_boundary() {
                    out.push(BoundaryNode {
                        node: 0,
                        tag: BoundaryTag::Inner,
                        area: sphere(0),
                        mean_curvature: -2.0 * d.dh()[0] / d.h()[0],
                    });
                }
                out.push(BoundaryNode {
                    node: n - 1,
                    tag: BoundaryTag::Outer,
                    area: sphere(n - 1),
                    mean_curvature: 2.0 * d.dh()[n - 1] / d.h()[n - 1],
                });
                out
            }
            Self::Tet(d) => {
                let hc = d.boundary_mean_curvature();
                (0..hc.vertices.len())
                    .map(|i| BoundaryNode {
                        node: hc.vertices[i],
                        tag: hc.tag[i],
                        area: hc.dual_area[i],
                        mean_curvature: hc.mean_curvature[i],
                    })
                    .collect()
            }
        }
    }

    pub fn has_inner_boundary(&self) -> bool {
        match self {
            Self::Radial(d) => d.has_inner_boundary(),
            Self::Tet(d) => d.has_inner_boundary(),
        }
    }
}

/// A boundary node with its lumped area and mean curvature (outward normal).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundaryNode {
    pub node: usize,
    pub tag: BoundaryTag,
    pub area: f64,
    pub mean_curvature: f64,
}

/// Boundary condition on one boundary piece; Neumann data is `∂u/∂ν` with
/// `ν` the outward normal.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum Bc {
    Dirichlet(f64),
    Neumann(f64),
}

/// Conditions on Σ_O and on the inner boundary (ignored if there is none).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundaryConditions {
    pub outer: Bc,
    pub inner: Bc,
}

impl BoundaryConditions {
    pub fn new(outer: Bc, inner: Bc) -> Self {
        Self { outer, inner }
    }

    /// The same Dirichlet value on every boundary piece.
    pub fn dirichlet(value: f64) -> Self {
        Self { outer: Bc::Dirichlet(value), inner: Bc::Dirichlet(value) }
    }

    pub fn on(&self, tag: BoundaryTag) -> Bc {
        match tag {
            BoundaryTag::Outer => self.outer,
            BoundaryTag::Inner => self.inner,
        }
    }
}

/// Solution of a conformal-Laplacian boundary-value problem.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalSolve {
    pub u: ScalarField,
    /// Boundary nodes in [`DomainRef::boundary_nodes`] order.
    pub boundary: Vec<BoundaryNode>,
    /// Recovered outward normal derivative `∂u/∂ν` per boundary node.
    pub normal_derivative: Vec<f64>,
    pub diagnostics: SolverDiagnostics,
}

impl ConformalSolve {
    /// `∂u/∂ν` at the first boundary node carrying `tag`.
    pub fn normal_derivative_on(&self, tag: BoundaryTag) -> Option<f64> {
        self.boundary.iter().position(|b| b.tag == tag).map(|i| self.normal_derivative[i])
    }

    /// Area-weighted mean of `∂u/∂ν` over the nodes carrying `tag`.
    pub fn mean_normal_derivative(&self, tag: BoundaryTag) -> f64 {
        let (mut num, mut den) = (0.0, 0.0);
        for (b, d) in self.boundary.iter().zip(&self.normal_derivative) {
            if b.tag == tag {
                num += b.area * d;
                den += b.area;
            }
        }
        num / den
    }
}

fn check_scalar_curvature(r: &ScalarField) -> Result<()> {
    let scale = r.values().iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let min = r.min();
    if min < -1e-8 * scale {
        return Err(Error::NegativeScalarCurvature { min });
    }
    Ok(())
}

/// Solves `Δ_g u − (R/8) u = rhs` with the given boundary conditions.
///
/// Radial domains use a finite-volume scheme (second order) and a direct
/// tridiagonal solve; tet meshes use P1 elements with lumped potential and
/// source terms, solved by Jacobi-preconditioned conjugate gradients.
///
/// `R` must be nonnegative. Without a Dirichlet piece the problem is only
/// well posed when `R ≢ 0`; otherwise [`Error::IllPosed`] is returned. When
/// `rhs ≡ 0` the solution is meant as a conformal factor and a nonpositive
/// value is reported as [`Error::NonPositiveSolution`].
pub fn solve_conformal<'a>(
    domain: impl Into<DomainRef<'a>>,
    r: &ScalarField,
    rhs: &ScalarField,
    bc: &BoundaryConditions,
) -> Result<ConformalSolve> {
    solve_nodal(domain.into(), r, rhs, |b| bc.on(b.tag))
}

/// [`solve_conformal`] with a boundary condition chosen per boundary node.
pub(crate) fn solve_nodal(
    domain: DomainRef<'_>,
    r: &ScalarField,
    rhs: &ScalarField,
    bc: impl Fn(&BoundaryNode) -> Bc,
) -> Result<ConformalSolve> {
    let n = domain.nodes();
    r.check_len(n)?;
    rhs.check_len(n)?;
    check_scalar_curvature(r)?;
    let disc = Discretization::new(domain, r.values());
    let boundary = domain.boundary_nodes();
    let has_dirichlet = boundary.iter().any(|b| matches!(bc(b), Bc::Dirichlet(_)));
    if !has_dirichlet && r.values().iter().all(|v| v.abs() <= 1e-12) {
        return Err(Error::IllPosed("pure Neumann problem with R = 0 has no unique solution".into()));
    }

    let mut load: Vec<f64> = (0..n).map(|i| -disc.volume[i] * rhs[i]).collect();
    let mut fixed: Vec<Option<f64>> = vec![None; n];
    for b in &boundary {
        match bc(b) {
            Bc::Dirichlet(v) => fixed[b.node] = Some(v),
            Bc::Neumann(g) => load[b.node] += b.area * g,
        }
    }
    let (u, diagnostics) = disc.solve(&load, &fixed)?;

    if rhs.values().iter().all(|&v| v == 0.0) {
        if let Some(i) = u.iter().position(|&v| !(v > 0.0)) {
            return Err(Error::NonPositiveSolution { index: i, value: u[i] });
        }
    }
    let normal_derivative = disc.recover_flux(&u, rhs.values(), &boundary);
    Ok(ConformalSolve { u: u.into(), boundary, normal_derivative, diagnostics })
}

/// Boundary data of `u⁴ g` next to that of `g`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DeformedBoundaryReport {
    pub nodes: Vec<usize>,
    pub tags: Vec<BoundaryTag>,
    /// Lumped boundary areas in the old metric.
    pub areas: Vec<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "old_H"))]
    pub old_h: Vec<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "new_H"))]
    pub new_h: Vec<f64>,
    /// `u⁴` on the boundary: the factor by which the induced metric changes.
    pub metric_factor: Vec<f64>,
    #[cfg_attr(feature = "serde", serde(rename = "min_R_new"))]
    pub min_r_new: f64,
    pub flags: BoundaryFlags,
    pub diagnostics: SolverDiagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundaryFlags {
    /// `u = 1` on Σ_O within tolerance.
    pub boundary_metric_preserved: bool,
    /// New `H > 0` on Σ_O.
    pub mean_convex: bool,
}

impl DeformedBoundaryReport {
    fn values_on<'s>(&'s self, v: &'s [f64], tag: BoundaryTag) -> impl Iterator<Item = (usize, f64)> + 's {
        (0..self.nodes.len()).filter(move |&i| self.tags[i] == tag).map(move |i| (i, v[i]))
    }

    /// `∫ H dσ` over the nodes carrying `tag`, old metric.
    pub fn old_total(&self, tag: BoundaryTag) -> f64 {
        self.values_on(&self.old_h, tag).map(|(i, h)| h * self.areas[i]).sum()
    }

    /// `∫ H dσ` over the nodes carrying `tag` in the new metric, whose area
    /// element is `u⁴ dσ`.
    pub fn new_total(&self, tag: BoundaryTag) -> f64 {
        self.values_on(&self.new_h, tag).map(|(i, h)| h * self.areas[i] * self.metric_factor[i]).sum()
    }

    pub fn min_new_h(&self, tag: BoundaryTag) -> f64 {
        self.values_on(&self.new_h, tag).map(|(_, h)| h).fold(f64::INFINITY, f64::min)
    }

    /// Pointwise `min (new H − old H)` over `tag`.
    pub fn min_increase(&self, tag: BoundaryTag) -> f64 {
        self.values_on(&self.new_h, tag).map(|(i, h)| h - self.old_h[i]).fold(f64::INFINITY, f64::min)
    }
}

/// `R(u⁴g) = u⁻⁵(R u − 8 Δu)` per node and `H(u⁴g) = u⁻²H + 4u⁻³ ∂u/∂ν` per
/// boundary node.
///
/// `normal_derivative`, in [`DomainRef::boundary_nodes`] order, is typically
/// the flux recovered by [`solve_conformal`]; the discrete Laplacian at
/// boundary nodes then uses it, making the law exact for the discrete
/// solution. Without it, radial domains fall back to finite differences at
/// the boundary; tet meshes require it.
pub fn conformal_laws<'a>(
    domain: impl Into<DomainRef<'a>>,
    u: &ScalarField,
    normal_derivative: Option<&[f64]>,
) -> Result<(ScalarField, DeformedBoundaryReport)> {
    let domain = domain.into();
    let n = domain.nodes();
    u.check_len(n)?;
    if let Some(i) = u.values().iter().position(|&v| !(v > 0.0)) {
        return Err(Error::NonPositiveFactor { index: i, value: u[i] });
    }
    let r = domain.scalar_curvature();
    let disc = Discretization::new(domain, r.values());
    let boundary = domain.boundary_nodes();
    let u = u.values();
    let nd: Vec<f64> = match (normal_derivative, domain) {
        (Some(nd), _) => {
            if nd.len() != boundary.len() {
                return Err(Error::FieldSizeMismatch { found: nd.len(), expected: boundary.len() });
            }
            nd.to_vec()
        }
        (None, DomainRef::Radial(d)) => {
            let left = if d.has_inner_boundary() { Parity::None } else { Parity::Even };
            let (du, ddu) = fd::derivatives(d.r(), u, left, Parity::None);
            let mut lap = deformed_laplacian(&disc, u, &boundary, None);
            let mut nd = Vec::with_capacity(boundary.len());
            for b in &boundary {
                let i = b.node;
                lap[i] = ddu[i] + 2.0 * d.dh()[i] / d.h()[i] * du[i];
                nd.push(if b.tag == BoundaryTag::Inner { -du[i] } else { du[i] });
            }
            return Ok(finish_laws(&boundary, r.values(), u, &lap, &nd, SolverDiagnostics::default()));
        }
        (None, DomainRef::Tet(_)) => {
            return Err(Error::InvalidParameter("tet meshes need boundary normal derivatives".into()));
        }
    };
    let lap = deformed_laplacian(&disc, u, &boundary, Some(&nd));
    Ok(finish_laws(&boundary, r.values(), u, &lap, &nd, SolverDiagnostics::default()))
}

/// Lumped `Δu`; boundary nodes include the flux term when it is known.
pub(crate) fn deformed_laplacian(
    disc: &Discretization,
    u: &[f64],
    boundary: &[BoundaryNode],
    nd: Option<&[f64]>,
) -> Vec<f64> {
    let ku = disc.stiffness.apply(u);
    let mut lap: Vec<f64> = ku.iter().zip(&disc.volume).map(|(k, v)| -k / v).collect();
    if let Some(nd) = nd {
        for (b, d) in boundary.iter().zip(nd) {
            lap[b.node] += b.area * d / disc.volume[b.node];
        }
    }
    lap
}

pub(crate) fn finish_laws(
    boundary: &[BoundaryNode],
    r: &[f64],
    u: &[f64],
    lap: &[f64],
    nd: &[f64],
    diagnostics: SolverDiagnostics,
) -> (ScalarField, DeformedBoundaryReport) {
    let r_new: Vec<f64> = (0..u.len()).map(|i| (r[i] * u[i] - 8.0 * lap[i]) / u[i].powi(5)).collect();
    let min_r_new = r_new.iter().copied().fold(f64::INFINITY, f64::min);
    let report = boundary_report(boundary, u, nd, min_r_new, diagnostics);
    (r_new.into(), report)
}

pub(crate) fn boundary_report(
    boundary: &[BoundaryNode],
    u: &[f64],
    nd: &[f64],
    min_r_new: f64,
    diagnostics: SolverDiagnostics,
) -> DeformedBoundaryReport {
    let mut rep = DeformedBoundaryReport {
        nodes: Vec::with_capacity(boundary.len()),
        tags: Vec::with_capacity(boundary.len()),
        areas: Vec::with_capacity(boundary.len()),
        old_h: Vec::with_capacity(boundary.len()),
        new_h: Vec::with_capacity(boundary.len()),
        metric_factor: Vec::with_capacity(boundary.len()),
        min_r_new,
        flags: BoundaryFlags { boundary_metric_preserved: true, mean_convex: true },
        diagnostics,
    };
    for (b, &d) in boundary.iter().zip(nd) {
        let ui = u[b.node];
        let h = b.mean_curvature / (ui * ui) + 4.0 * d / ui.powi(3);
        rep.nodes.push(b.node);
        rep.tags.push(b.tag);
        rep.areas.push(b.area);
        rep.old_h.push(b.mean_curvature);
        rep.new_h.push(h);
        rep.metric_factor.push(ui.powi(4));
        if b.tag == BoundaryTag::Outer {
            rep.flags.boundary_metric_preserved &= (ui - 1.0).abs() <= DEFAULT_TOL;
            rep.flags.mean_convex &= h > 0.0;
        }
    }
    rep
}

impl ConformalSolve {
    /// [`conformal_laws`] with this solution's recovered fluxes.
    pub fn laws<'a>(&self, domain: impl Into<DomainRef<'a>>) -> Result<(ScalarField, DeformedBoundaryReport)> {
        let (r, mut rep) = conformal_laws(domain, &self.u, Some(&self.normal_derivative))?;
        rep.diagnostics = self.diagnostics;
        Ok((r, rep))
    }
}

pub(crate) fn cg_solve(op: &Operator, b: &[f64], x0: &[f64]) -> Result<(Vec<f64>, SolverDiagnostics)> {
    match op {
        Operator::Tri(t) => {
            let x = t.solve(b).ok_or(Error::SolverDivergence { iterations: 0, residual: f64::INFINITY })?;
            let ax = t.apply(&x);
            let num: f64 = ax.iter().zip(b).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
            let den: f64 = b.iter().map(|c| c * c).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
            Ok((x, SolverDiagnostics { iterations: 0, relative_residual: num / den, converged: true }))
        }
        Operator::Csr(a) => {
            let (x, diag) = pcg(a, b, x0, CG_TOLERANCE, (10 * a.size()).max(1000));
            if !diag.converged {
                return Err(Error::SolverDivergence { iterations: diag.iterations, residual: diag.relative_residual });
            }
            Ok((x, diag))
        }
    }
}
