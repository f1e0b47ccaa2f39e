//! Numerics for quasi-local mass on discretized Riemannian data.
//!
//! The crate is `no_std` (it needs `alloc`). It covers axisymmetric 2-sphere
//! metrics and their embeddings in R³ and hyperbolic space, rotationally
//! symmetric and tetrahedral 3-domains, conformal-Laplacian solves and the
//! conformal constructions built on them, fill-in generators and validators,
//! and the Brown-York / variational mass brackets.
#![no_std]
// `!(x > 0.0)` is used on purpose so NaN is rejected along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod conformal;
pub mod embedding;
pub mod error;
pub mod fillins;
pub mod geometry;
pub mod mass;
pub mod numerics;
pub mod presets;
#[cfg(feature = "serde")]
mod serde_ext;

pub use error::{End, Error, Result};
pub use geometry::{AxisymmetricMetric, BoundaryTag, InnerRole, RadialDomain, ScalarField, Side, TetDomain};

/// Default relative tolerance for validation invariants.
pub const DEFAULT_TOL: f64 = 1e-6;

/// Minimum number of grid nodes for any sampled profile.
pub const MIN_NODES: usize = 16;
