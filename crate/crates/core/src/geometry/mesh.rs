//! Structured tetrahedral meshes: Kuhn-subdivided boxes, balls obtained by
//! radially mapping a cube onto a sphere, and icosphere shells.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use super::tet::{BoundaryTag, TetDomain};
use crate::error::{Error, Result};

/// Each unit cube splits into six tets along its main diagonal, one per
/// ordering of the axes. Neighbouring cubes agree on shared faces.
const KUHN_PATHS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

struct Grid {
    coords: Vec<[f64; 3]>,
    tets: Vec<[usize; 4]>,
}

/// Kuhn triangulation of the cells of `[lo, lo + n·h]³` accepted by `keep`
/// (called with the cell's center), with unused vertices dropped.
fn kuhn_grid(n: [usize; 3], lo: [f64; 3], h: [f64; 3], keep: impl Fn(&[f64; 3]) -> bool) -> Grid {
    let idx = |i: usize, j: usize, k: usize| i + (n[0] + 1) * (j + (n[1] + 1) * k);
    let total = (n[0] + 1) * (n[1] + 1) * (n[2] + 1);
    let mut renumber = vec![usize::MAX; total];
    let mut coords = Vec::new();
    let mut tets = Vec::new();
    for k in 0..n[2] {
        for j in 0..n[1] {
            for i in 0..n[0] {
                let center =
                    [lo[0] + (i as f64 + 0.5) * h[0], lo[1] + (j as f64 + 0.5) * h[1], lo[2] + (k as f64 + 0.5) * h[2]];
                if !keep(&center) {
                    continue;
                }
                for path in KUHN_PATHS {
                    let mut corner = [i, j, k];
                    let mut tet = [0usize; 4];
                    for (step, slot) in tet.iter_mut().enumerate() {
                        if step > 0 {
                            corner[path[step - 1]] += 1;
                        }
                        let g = idx(corner[0], corner[1], corner[2]);
                        if renumber[g] == usize::MAX {
                            renumber[g] = coords.len();
                            coords.push([
                                lo[0] + corner[0] as f64 * h[0],
                                lo[1] + corner[1] as f64 * h[1],
                                lo[2] + corner[2] as f64 * h[2],
                            ]);
                        }
                        *slot = renumber[g];
                    }
                    tets.push(tet);
                }
            }
        }
    }
    Grid { coords, tets }
}

/// Sends the cube of half-side `t` onto the sphere of radius `t`.
fn spherify(p: &[f64; 3]) -> [f64; 3] {
    let linf = p[0].abs().max(p[1].abs()).max(p[2].abs());
    let l2 = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    if l2 == 0.0 {
        return *p;
    }
    let s = linf / l2;
    [p[0] * s, p[1] * s, p[2] * s]
}

/// Flat box `[0, size]` with `n` cells per axis, boundary tagged Σ_O.
pub fn box_mesh(n: [usize; 3], size: [f64; 3]) -> Result<TetDomain> {
    if n.contains(&0) || size.iter().any(|&s| !(s > 0.0)) {
        return Err(Error::InvalidParameter("box needs positive cell counts and sizes".into()));
    }
    let h = [size[0] / n[0] as f64, size[1] / n[1] as f64, size[2] / n[2] as f64];
    let grid = kuhn_grid(n, [0.0; 3], h, |_| true);
    TetDomain::from_coordinates(&grid.coords, grid.tets, |_| BoundaryTag::Outer, None)
}

/// Flat ball of the given radius: the cube `[-1, 1]³` with `n` cells per
/// side, spherified and scaled. `6 n³` tetrahedra.
pub fn ball_mesh(radius: f64, n: usize) -> Result<TetDomain> {
    if n < 2 || !(radius > 0.0) {
        return Err(Error::InvalidParameter("ball needs radius > 0 and n >= 2".into()));
    }
    let h = 2.0 / n as f64;
    let mut grid = kuhn_grid([n; 3], [-1.0; 3], [h; 3], |_| true);
    for p in &mut grid.coords {
        let q = spherify(p);
        *p = [q[0] * radius, q[1] * radius, q[2] * radius];
    }
    TetDomain::from_coordinates(&grid.coords, grid.tets, |_| BoundaryTag::Outer, None)
}

/// Unit icosahedron subdivided `level` times, vertices projected to the
/// sphere. Returns vertices and counterclockwise faces.
fn icosphere(level: usize) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let t = (1.0 + 5.0f64.sqrt()) / 2.0;
    let norm = |p: [f64; 3]| {
        let l = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        [p[0] / l, p[1] / l, p[2] / l]
    };
    let mut verts: Vec<[f64; 3]> = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ]
    .into_iter()
    .map(norm)
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    for _ in 0..level {
        let mut mid = alloc::collections::BTreeMap::new();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<[f64; 3]>| {
            *mid.entry((a.min(b), a.max(b))).or_insert_with(|| {
                let (p, q) = (verts[a], verts[b]);
                verts.push(norm([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(4 * faces.len());
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    (verts, faces)
}

/// Flat spherical shell `r_in ≤ |x| ≤ r_out`: an icosphere subdivided
/// `level` times, extruded through `2^level` even radial layers, each prism
/// cut into three tets. Quad faces are split along the diagonal from the
/// lower-numbered bottom vertex to the higher-numbered top vertex, so
/// neighbouring prisms agree; odd layers reverse the numbering, which keeps
/// vertex stencils balanced between the layers above and below. The inner
/// sphere is tagged Σ_H, the outer Σ_O.
pub fn shell_mesh(r_in: f64, r_out: f64, level: usize) -> Result<TetDomain> {
    if !(r_in > 0.0 && r_out > r_in) || level > 6 {
        return Err(Error::InvalidParameter(format!("invalid shell radii {r_in}, {r_out} or level {level}")));
    }
    let (sphere, faces) = icosphere(level);
    let layers = 1usize << level;
    let nv = sphere.len();
    let radii = shell_layer_radii(r_in, r_out, level);
    let mut coords = Vec::with_capacity(nv * (layers + 1));
    for &r in &radii {
        coords.extend(sphere.iter().map(|p| [p[0] * r, p[1] * r, p[2] * r]));
    }
    let mut tets = Vec::with_capacity(3 * faces.len() * layers);
    for j in 0..layers {
        for f in &faces {
            let mut f = *f;
            f.sort_unstable();
            if j % 2 == 1 {
                f.reverse();
            }
            let [a, b, c] = f;
            let (lo, hi) = (j * nv, (j + 1) * nv);
            tets.push([a + lo, b + lo, c + lo, c + hi]);
            tets.push([a + lo, b + lo, b + hi, c + hi]);
            tets.push([a + lo, a + hi, b + hi, c + hi]);
        }
    }
    let mid = 0.5 * (r_in + r_out);
    TetDomain::from_coordinates(
        &coords,
        tets,
        |c| {
            if (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt() < mid {
                BoundaryTag::Inner
            } else {
                BoundaryTag::Outer
            }
        },
        None,
    )
}

fn shell_layer_radii(r_in: f64, r_out: f64, level: usize) -> Vec<f64> {
    let layers = 1usize << level;
    (0..=layers).map(|j| r_in + (r_out - r_in) * j as f64 / layers as f64).collect()
}

/// Euclidean norm of each vertex position; meshes built here keep only
/// lengths, so generators that need radii recompute them from coordinates.
pub fn ball_vertex_radii(radius: f64, n: usize) -> Vec<f64> {
    let h = 2.0 / n as f64;
    let grid = kuhn_grid([n; 3], [-1.0; 3], [h; 3], |_| true);
    grid.coords.iter().map(|p| radius * p[0].abs().max(p[1].abs()).max(p[2].abs())).collect()
}

/// Vertex radii of [`shell_mesh`] in the same vertex order.
pub fn shell_vertex_radii(r_in: f64, r_out: f64, level: usize) -> Vec<f64> {
    let nv = icosphere(level).0.len();
    shell_layer_radii(r_in, r_out, level).into_iter().flat_map(|r| core::iter::repeat_n(r, nv)).collect()
}
