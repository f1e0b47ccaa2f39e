//! Discretized metrics: axisymmetric 2-spheres, warped-product 3-domains and
//! tetrahedral 3-meshes.

pub mod axisym;
pub mod field;
pub mod mesh;
pub mod radial;
pub mod tet;

pub use axisym::{AxisymmetricMetric, ConformalEigenvalue};
pub use field::ScalarField;
pub use radial::{InnerRole, RadialDomain, Side};
pub use tet::{BoundaryCurvature, BoundaryTag, TetDomain};
