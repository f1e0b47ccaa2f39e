//! Finite-difference weights, derivative estimates and interval quadrature on
//! (possibly non-uniform) one-dimensional grids.
//!
//! Interior derivatives use five-point centered stencils (fourth order on
//! uniform grids). Endpoints either use six-point one-sided stencils or, when
//! the sampled function has a known reflection symmetry about the endpoint,
//! ghost nodes obtained from that symmetry.

use alloc::vec;
use alloc::vec::Vec;

/// Reflection symmetry of a sampled function about one end of its grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// No symmetry known; one-sided stencils are used.
    None,
    /// `v(x0 - d) = 2 v(x0) - v(x0 + d)` (e.g. a profile through a pole).
    Odd,
    /// `v(x0 - d) = v(x0 + d)`.
    Even,
}

const GHOSTS: usize = 3;
const CENTERED: usize = 5;
const ONE_SIDED: usize = 6;

/// Fornberg's recursion: weights `c[k][j]` such that
/// `v^(k)(z) ≈ Σ_j c[k][j] v(x[j])` for `k = 0..=m`.
pub fn fornberg_weights(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    let mut c = vec![vec![0.0; n]; m + 1];
    if n == 0 {
        return c;
    }
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// Grid values extended with parity ghosts at either end.
struct Extended {
    x: Vec<f64>,
    v: Vec<f64>,
    offset: usize,
}

fn extend(x: &[f64], v: &[f64], left: Parity, right: Parity) -> Extended {
    let n = x.len();
    let g = GHOSTS.min(n - 1);
    let mut ex = Vec::with_capacity(n + 2 * g);
    let mut ev = Vec::with_capacity(n + 2 * g);
    let mut offset = 0;
    if left != Parity::None {
        for k in (1..=g).rev() {
            ex.push(2.0 * x[0] - x[k]);
            ev.push(reflect(left, v[0], v[k]));
        }
        offset = g;
    }
    ex.extend_from_slice(x);
    ev.extend_from_slice(v);
    if right != Parity::None {
        for k in 1..=g {
            ex.push(2.0 * x[n - 1] - x[n - 1 - k]);
            ev.push(reflect(right, v[n - 1], v[n - 1 - k]));
        }
    }
    Extended { x: ex, v: ev, offset }
}

fn reflect(parity: Parity, v0: f64, vk: f64) -> f64 {
    match parity {
        Parity::Odd => 2.0 * v0 - vk,
        Parity::Even => vk,
        Parity::None => unreachable!(),
    }
}

fn stencil(len: usize, center: usize) -> (usize, usize) {
    let half = CENTERED / 2;
    if len < CENTERED {
        return (0, len);
    }
    if center >= half && center + half < len {
        return (center - half, center + half + 1);
    }
    let width = ONE_SIDED.min(len);
    if center < half {
        (0, width)
    } else {
        (len - width, len)
    }
}

/// First and second derivative estimates at every node.
pub fn derivatives(x: &[f64], v: &[f64], left: Parity, right: Parity) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let ext = extend(x, v, left, right);
    let mut d1 = Vec::with_capacity(n);
    let mut d2 = Vec::with_capacity(n);
    for i in 0..n {
        let c = i + ext.offset;
        let (lo, hi) = stencil(ext.x.len(), c);
        let w = fornberg_weights(ext.x[c], &ext.x[lo..hi], 2);
        let vals = &ext.v[lo..hi];
        d1.push(dot(&w[1], vals));
        d2.push(dot(&w[2], vals));
    }
    (d1, d2)
}

/// First-derivative estimate only.
pub fn derivative(x: &[f64], v: &[f64], left: Parity, right: Parity) -> Vec<f64> {
    derivatives(x, v, left, right).0
}

/// Value at `z` of the polynomial through the given nodes.
pub fn interpolate(z: f64, x: &[f64], v: &[f64]) -> f64 {
    let w = fornberg_weights(z, x, 0);
    dot(&w[0], v)
}

/// Value at `x[0]` of an even function known at `x[1..=3]`, using the mirrored
/// nodes as well.
pub fn even_limit(x: &[f64], v: &[f64]) -> f64 {
    let x0 = x[0];
    let mut xs = Vec::with_capacity(6);
    let mut vs = Vec::with_capacity(6);
    for k in 1..=3.min(x.len() - 1) {
        xs.push(x0 - (x[k] - x0));
        vs.push(v[k]);
        xs.push(x[k]);
        vs.push(v[k]);
    }
    interpolate(x0, &xs, &vs)
}

const GAUSS3: [(f64, f64); 3] =
    [(-0.774_596_669_241_483_4, 5.0 / 9.0), (0.0, 8.0 / 9.0), (0.774_596_669_241_483_4, 5.0 / 9.0)];

/// Running integral `∫_{x0}^{x_i} v` using, on each interval, the cubic through
/// the four nearest nodes.
pub fn cumulative_integral(x: &[f64], v: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    out.push(0.0);
    let mut acc = 0.0;
    for i in 0..n - 1 {
        let (lo, hi) = if n < 4 {
            (0, n)
        } else {
            let lo = i.saturating_sub(1).min(n - 4);
            (lo, lo + 4)
        };
        let a = x[i];
        let b = x[i + 1];
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut seg = 0.0;
        for &(t, w) in &GAUSS3 {
            seg += w * interpolate(mid + half * t, &x[lo..hi], &v[lo..hi]);
        }
        acc += half * seg;
        out.push(acc);
    }
    out
}

/// `∫ v dx` over the whole grid.
pub fn integrate(x: &[f64], v: &[f64]) -> f64 {
    *cumulative_integral(x, v).last().unwrap_or(&0.0)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// `n` evenly spaced points on `[a, b]`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let step = (b - a) / (n - 1) as f64;
    (0..n).map(|i| if i == n - 1 { b } else { a + step * i as f64 }).collect()
}
