//! Isometric embeddings of axisymmetric 2-sphere metrics as surfaces of
//! revolution, in R³ and in the hyperboloid model of H³ of curvature −κ².

mod euclidean;
mod hyperbolic;

pub use euclidean::{embed_euclidean, RevolutionSurfaceR3};
pub use hyperbolic::{
    cosh_weighted_total, default_kappa_grid, embed_hyperbolic, hyperbolic_distance, kappa_rule, lambda_upper_at_kappa,
    lambda_upper_bound, lambda_upper_grid, min_distance, HyperbolicPoint, LambdaUpper, PointGrid, RevolutionSurfaceH3,
    UpperEvaluation,
};

use alloc::vec::Vec;

use crate::numerics::fd;

/// Replaces the two pole values of a per-node field by the even-extension
/// limit from the neighbouring nodes.
pub(crate) fn fill_poles(s: &[f64], v: &mut [f64]) {
    let n = s.len();
    v[0] = fd::even_limit(&s[..4], &v[..4]);
    let tail_s: Vec<f64> = s[n - 4..].iter().rev().copied().collect();
    let tail_v: Vec<f64> = v[n - 4..].iter().rev().copied().collect();
    v[n - 1] = fd::even_limit(&tail_s, &tail_v);
}
