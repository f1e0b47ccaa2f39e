use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{cg_solve, BoundaryNode, DomainRef, SolverDiagnostics};
use crate::error::Result;
use crate::geometry::tet::TET_EDGES;
use crate::numerics::sparse::{CsrMatrix, TripletBuilder};
use crate::numerics::tridiag::Tridiagonal;

#[derive(Debug, Clone)]
pub(crate) enum Operator {
    Tri(Tridiagonal),
    Csr(CsrMatrix),
}

impl Operator {
    pub(crate) fn apply(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Self::Tri(t) => t.apply(x),
            Self::Csr(a) => a.mul_vec(x),
        }
    }
}

/// Stiffness `K`, potential `R V / 8` and lumped volumes `V` of a domain.
#[derive(Debug, Clone)]
pub(crate) struct Discretization {
    pub stiffness: Operator,
    pub potential: Vec<f64>,
    pub volume: Vec<f64>,
}

impl Discretization {
    pub(crate) fn new(domain: DomainRef<'_>, r: &[f64]) -> Self {
        let (stiffness, volume) = match domain {
            DomainRef::Radial(d) => radial(d.r(), d.h()),
            DomainRef::Tet(d) => {
                let n = d.vertex_count();
                let mut t = TripletBuilder::new(n);
                for (tet, g) in d.tets().iter().zip(d.geometry()) {
                    for (k, &(i, j)) in TET_EDGES.iter().enumerate() {
                        let w = g.stiffness(k);
                        let (a, b) = (tet[i], tet[j]);
                        t.add(a, b, w);
                        t.add(b, a, w);
                        t.add(a, a, -w);
                        t.add(b, b, -w);
                    }
                }
                (Operator::Csr(t.build()), d.vertex_volumes())
            }
        };
        let potential = volume.iter().zip(r).map(|(v, r)| v * r / 8.0).collect();
        Self { stiffness, potential, volume }
    }

    /// `(K + RV/8) x`.
    pub(crate) fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = self.stiffness.apply(x);
        for (i, yi) in y.iter_mut().enumerate() {
            *yi += self.potential[i] * x[i];
        }
        y
    }

    /// Solves `(K + RV/8) u = load` with `u_i = fixed[i]` where given.
    pub(crate) fn solve(&self, load: &[f64], fixed: &[Option<f64>]) -> Result<(Vec<f64>, SolverDiagnostics)> {
        let n = load.len();
        match &self.stiffness {
            Operator::Tri(k) => {
                let mut a = k.clone();
                let mut b = load.to_vec();
                for i in 0..n {
                    a.diag[i] += self.potential[i];
                }
                for i in 0..n {
                    if let Some(v) = fixed[i] {
                        a.diag[i] = 1.0;
                        if i > 0 {
                            a.lower[i - 1] = 0.0;
                        }
                        if i + 1 < n {
                            a.upper[i] = 0.0;
                        }
                        b[i] = v;
                    }
                }
                cg_solve(&Operator::Tri(a), &b, &[])
            }
            Operator::Csr(k) => {
                let mut index = vec![usize::MAX; n];
                let mut free = Vec::new();
                for i in 0..n {
                    if fixed[i].is_none() {
                        index[i] = free.len();
                        free.push(i);
                    }
                }
                let mut t = TripletBuilder::new(free.len());
                let mut b: Vec<f64> = free.iter().map(|&i| load[i]).collect();
                for (fi, &i) in free.iter().enumerate() {
                    t.add(fi, fi, self.potential[i]);
                    for (j, v) in k.row(i) {
                        match fixed[j] {
                            Some(uj) => b[fi] -= v * uj,
                            None => t.add(fi, index[j], v),
                        }
                    }
                }
                let fixed_mean = {
                    let vals: Vec<f64> = fixed.iter().flatten().copied().collect();
                    if vals.is_empty() {
                        0.0
                    } else {
                        vals.iter().sum::<f64>() / vals.len() as f64
                    }
                };
                let x0 = vec![fixed_mean; free.len()];
                let (x, diag) = cg_solve(&Operator::Csr(t.build()), &b, &x0)?;
                let mut u: Vec<f64> = fixed.iter().map(|v| v.unwrap_or(0.0)).collect();
                for (fi, &i) in free.iter().enumerate() {
                    u[i] = x[fi];
                }
                Ok((u, diag))
            }
        }
    }

    /// `∂u/∂ν_i = ([(K + RV/8) u]_i + V_i rhs_i) / A_i` at each boundary node.
    pub(crate) fn recover_flux(&self, u: &[f64], rhs: &[f64], boundary: &[BoundaryNode]) -> Vec<f64> {
        let au = self.apply(u);
        boundary.iter().map(|b| (au[b.node] + self.volume[b.node] * rhs[b.node]) / b.area).collect()
    }
}

/// Finite volumes on `[r_i − Δ/2, r_i + Δ/2]`: face areas use the mean of
/// the neighbouring `h`, and each half cell's volume is exact for `h` linear.
fn radial(r: &[f64], h: &[f64]) -> (Operator, Vec<f64>) {
    let n = r.len();
    let mut k = Tridiagonal::with_size(n);
    let mut volume = vec![0.0; n];
    for i in 0..n - 1 {
        let dr = r[i + 1] - r[i];
        let hm = 0.5 * (h[i] + h[i + 1]);
        let w = 4.0 * PI * hm * hm / dr;
        k.diag[i] += w;
        k.diag[i + 1] += w;
        k.upper[i] = -w;
        k.lower[i] = -w;
        let half = 0.5 * dr;
        for (node, a) in [(i, h[i]), (i + 1, h[i + 1])] {
            volume[node] += 4.0 * PI * half * (a * a + a * hm + hm * hm) / 3.0;
        }
    }
    (Operator::Tri(k), volume)
}
