use alloc::vec::Vec;

/// Tridiagonal system `lower[i-1] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i]`.
#[derive(Debug, Clone, Default)]
pub struct Tridiagonal {
    pub lower: Vec<f64>,
    pub diag: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Tridiagonal {
    pub fn with_size(n: usize) -> Self {
        Self {
            lower: alloc::vec![0.0; n.saturating_sub(1)],
            diag: alloc::vec![0.0; n],
            upper: alloc::vec![0.0; n.saturating_sub(1)],
        }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Thomas algorithm. Returns `None` on a zero pivot.
    pub fn solve(&self, rhs: &[f64]) -> Option<Vec<f64>> {
        let n = self.len();
        let mut c = Vec::with_capacity(n);
        let mut d = Vec::with_capacity(n);
        let mut denom = self.diag[0];
        if denom == 0.0 {
            return None;
        }
        c.push(if n > 1 { self.upper[0] / denom } else { 0.0 });
        d.push(rhs[0] / denom);
        for i in 1..n {
            denom = self.diag[i] - self.lower[i - 1] * c[i - 1];
            if denom == 0.0 {
                return None;
            }
            c.push(if i < n - 1 { self.upper[i] / denom } else { 0.0 });
            d.push((rhs[i] - self.lower[i - 1] * d[i - 1]) / denom);
        }
        let mut x = d;
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        Some(x)
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut acc = self.diag[i] * x[i];
                if i > 0 {
                    acc += self.lower[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    acc += self.upper[i] * x[i + 1];
                }
                acc
            })
            .collect()
    }
}

/// Number of eigenvalues below `x` of the symmetric tridiagonal matrix with
/// diagonal `d` and off-diagonal `e` (Sturm sequence).
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = d[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for i in 1..d.len() {
        let prev = if q == 0.0 { f64::EPSILON * (e[i - 1].abs() + 1.0) } else { q };
        q = d[i] - x - e[i - 1] * e[i - 1] / prev;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Smallest eigenvalue of a symmetric tridiagonal matrix, by bisection.
pub fn smallest_eigenvalue(d: &[f64], e: &[f64]) -> f64 {
    let n = d.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { e[i - 1].abs() } else { 0.0 } + if i + 1 < n { e[i].abs() } else { 0.0 };
        lo = lo.min(d[i] - r);
        hi = hi.max(d[i] + r);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(d, e, mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_solves_poisson_stencil() {
        let n = 6;
        let mut t = Tridiagonal::with_size(n);
        for i in 0..n {
            t.diag[i] = 2.0;
        }
        for i in 0..n - 1 {
            t.lower[i] = -1.0;
            t.upper[i] = -1.0;
        }
        let x: Vec<f64> = (0..n).map(|i| (i as f64).powi(2)).collect();
        let b = t.apply(&x);
        let y = t.solve(&b).unwrap();
        for i in 0..n {
            assert!((x[i] - y[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn smallest_eigenvalue_of_laplacian_stencil() {
        let n = 50;
        let d = alloc::vec![2.0; n];
        let e = alloc::vec![-1.0; n - 1];
        let expected = 2.0 - 2.0 * (core::f64::consts::PI / (n as f64 + 1.0)).cos();
        assert!((smallest_eigenvalue(&d, &e) - expected).abs() < 1e-12);
    }
}
