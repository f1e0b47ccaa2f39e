use alloc::string::String;

/// Which end of a meridian or radial interval a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum End {
    Start,
    Finish,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("grid has {found} nodes, at least {min} required")]
    TooFewNodes { found: usize, min: usize },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("pole closure violated at {end:?}: |f'| = {slope:.6}, expected 1 within {tolerance:.2e}")]
    PoleClosureViolation { end: End, slope: f64, tolerance: f64 },
    #[error("profile must vanish at the poles ({end:?} value {value:.3e})")]
    EndpointNotZero { end: End, value: f64 },
    #[error("profile is not positive in the interior (node {index}, s = {s:.6})")]
    NonPositiveInterior { index: usize, s: f64 },
    #[error("inner boundary role violated: {0}")]
    RoleViolation(String),
    #[error("tetrahedron {tet} is not realizable (Cayley-Menger determinant not positive)")]
    NonRealizable { tet: usize },
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("profile is not embeddable as a surface of revolution in R^3: |f'| > 1 on s in [{from:.6}, {to:.6}]")]
    NotEmbeddable { from: f64, to: f64 },
    #[error("Gauss curvature {curvature:.6} at s = {s:.6} does not exceed -kappa^2 = {bound:.6}")]
    CurvatureBoundViolated { s: f64, curvature: f64, bound: f64 },
    #[error("hyperbolic embedding ODE breaks down at s = {s:.6} (arc-length constraint has no real solution)")]
    OdeBreakdown { s: f64 },
    #[error("base point is not enclosed by the embedded surface")]
    PointNotEnclosed,
    #[error("linear solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    SolverDivergence { iterations: usize, residual: f64 },
    #[error("conformal factor is not positive at node {index} (value {value:.6e})")]
    NonPositiveSolution { index: usize, value: f64 },
    #[error("conformal factor is not positive at node {index} (value {value:.6e})")]
    NonPositiveFactor { index: usize, value: f64 },
    #[error("scalar curvature is negative ({min:.6e}); the conformal operator needs R >= 0")]
    NegativeScalarCurvature { min: f64 },
    #[error("boundary-value problem is ill-posed: {0}")]
    IllPosed(String),
    #[error("horizon boundary is not minimal (max |H| = {max_h:.3e})")]
    NotMinimal { max_h: f64 },
    #[error("inner boundary is not a minimal sphere (h' = {slope:.3e})")]
    NotMinimalInner { slope: f64 },
    #[error("domain is not a member of the fill-in class F")]
    NotInF,
    #[error("invalid radii: need R_out > 2m > 0 (m = {mass}, R_out = {outer})")]
    InvalidRadii { mass: f64, outer: f64 },
    #[error("Gauss curvature is not positive (K = {curvature:.6} at s = {s:.6}); Brown-York mass is undefined")]
    NotConvex { s: f64, curvature: f64 },
    #[error("domain is not an admissible fill-in: {0}")]
    NotAdmissible(String),
    #[error("component {index} has no known fill-in")]
    EmptyComponent { index: usize },
    #[error("bracket inverted: lower {lower:.9} exceeds upper {upper:.9}")]
    BracketInverted { lower: f64, upper: f64 },
    #[error("field has {found} values but the domain has {expected} nodes")]
    FieldSizeMismatch { found: usize, expected: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = core::result::Result<T, Error>;
