use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// Tag of a boundary triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum BoundaryTag {
    /// Σ_O, the component whose metric is prescribed.
    Outer,
    /// Σ_H, the remaining boundary (a horizon when minimal).
    Inner,
}

/// Local vertex pairs of the six tetrahedron edges; edge `k` is opposite
/// edge `5 - k`.
pub const TET_EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub(crate) fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn face_key(mut f: [usize; 3]) -> [usize; 3] {
    f.sort_unstable();
    f
}

/// Intrinsic geometry of one tetrahedron computed from its six edge lengths.
#[derive(Debug, Clone, Copy)]
pub struct TetGeometry {
    pub volume: f64,
    /// Interior dihedral angle at each local edge, ordered as [`TET_EDGES`].
    pub dihedral: [f64; 6],
    pub lengths: [f64; 6],
}

impl TetGeometry {
    /// Places the tetrahedron in R³ from its lengths; fails when some face
    /// violates the triangle inequality or the Cayley-Menger determinant is
    /// not positive.
    pub fn from_lengths(l: [f64; 6]) -> Option<Self> {
        let [l01, l02, l03, l12, l13, l23] = l;
        if l.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return None;
        }
        let scale = l.iter().fold(0.0f64, |a, &b| a.max(b));
        let p1 = [l01, 0.0, 0.0];
        let x2 = (l01 * l01 + l02 * l02 - l12 * l12) / (2.0 * l01);
        let y2sq = l02 * l02 - x2 * x2;
        if y2sq <= 1e-14 * scale * scale {
            return None;
        }
        let y2 = y2sq.sqrt();
        let p2 = [x2, y2, 0.0];
        let x3 = (l01 * l01 + l03 * l03 - l13 * l13) / (2.0 * l01);
        let y3 = (l03 * l03 - l23 * l23 + x2 * x2 + y2 * y2 - 2.0 * x3 * x2) / (2.0 * y2);
        let z3sq = l03 * l03 - x3 * x3 - y3 * y3;
        if z3sq <= 1e-14 * scale * scale {
            return None;
        }
        let p3 = [x3, y3, z3sq.sqrt()];
        let pts = [[0.0, 0.0, 0.0], p1, p2, p3];
        // every face must itself be a proper triangle
        for (a, b, c) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            if triangle_area(dist(&pts[a], &pts[b]), dist(&pts[a], &pts[c]), dist(&pts[b], &pts[c])) <= 0.0 {
                return None;
            }
        }
        let volume = l01 * y2 * z3sq.sqrt() / 6.0;
        let mut dihedral = [0.0; 6];
        for (k, &(i, j)) in TET_EDGES.iter().enumerate() {
            let (a, b) = opposite(i, j);
            dihedral[k] = dihedral_angle(&pts[i], &pts[j], &pts[a], &pts[b]);
        }
        Some(Self { volume, dihedral, lengths: l })
    }

    /// P1 stiffness coupling `∫ ∇φ_i·∇φ_j` for local edge `k`:
    /// `-(1/6) |e_opp| cot θ_opp`.
    pub fn stiffness(&self, k: usize) -> f64 {
        let opp = 5 - k;
        -self.lengths[opp] / (6.0 * self.dihedral[opp].tan())
    }
}

fn opposite(i: usize, j: usize) -> (usize, usize) {
    let mut rest = (0..4).filter(|&v| v != i && v != j);
    (rest.next().unwrap(), rest.next().unwrap())
}

fn sub(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dist(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    let d = sub(a, b);
    dot3(&d, &d).sqrt()
}

fn dihedral_angle(pi: &[f64; 3], pj: &[f64; 3], pa: &[f64; 3], pb: &[f64; 3]) -> f64 {
    let e = sub(pj, pi);
    let ee = dot3(&e, &e);
    let project = |p: &[f64; 3]| {
        let v = sub(p, pi);
        let t = dot3(&v, &e) / ee;
        [v[0] - t * e[0], v[1] - t * e[1], v[2] - t * e[2]]
    };
    let u = project(pa);
    let w = project(pb);
    let c = cross(&u, &w);
    dot3(&c, &c).sqrt().atan2(dot3(&u, &w))
}

/// Heron's formula, stable ordering.
pub fn triangle_area(a: f64, b: f64, c: f64) -> f64 {
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.partial_cmp(x).unwrap_or(core::cmp::Ordering::Equal));
    let [a, b, c] = s;
    let q = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    if q <= 0.0 {
        0.0
    } else {
        0.25 * q.sqrt()
    }
}

/// A tetrahedral 3-mesh described intrinsically by edge lengths, with tagged
/// boundary triangles and an assigned per-tet scalar curvature.
#[derive(Debug, Clone)]
pub struct TetDomain {
    vertex_count: usize,
    tets: Vec<[usize; 4]>,
    lengths: BTreeMap<(usize, usize), f64>,
    boundary: Vec<([usize; 3], BoundaryTag)>,
    scalar_curvature: Vec<f64>,
    geometry: Vec<TetGeometry>,
}

impl TetDomain {
    /// Validates realizability of every tet and that the tagged boundary is
    /// exactly the set of faces owned by one tet, closed, with Σ_O and Σ_H
    /// vertex-disjoint.
    pub fn new(
        vertex_count: usize,
        tets: Vec<[usize; 4]>,
        lengths: BTreeMap<(usize, usize), f64>,
        boundary: Vec<([usize; 3], BoundaryTag)>,
        scalar_curvature: Option<Vec<f64>>,
    ) -> Result<Self> {
        if tets.is_empty() {
            return Err(Error::InvalidMesh("no tetrahedra".into()));
        }
        let scalar_curvature = scalar_curvature.unwrap_or_else(|| vec![0.0; tets.len()]);
        if scalar_curvature.len() != tets.len() {
            return Err(Error::InvalidMesh(format!(
                "{} scalar curvature values for {} tetrahedra",
                scalar_curvature.len(),
                tets.len()
            )));
        }
        let mut geometry = Vec::with_capacity(tets.len());
        for (t, tet) in tets.iter().enumerate() {
            if tet.iter().any(|&v| v >= vertex_count) {
                return Err(Error::InvalidMesh(format!("tet {t} references a missing vertex")));
            }
            let mut l = [0.0; 6];
            for (k, &(i, j)) in TET_EDGES.iter().enumerate() {
                l[k] = *lengths
                    .get(&edge_key(tet[i], tet[j]))
                    .ok_or_else(|| Error::InvalidMesh(format!("missing length for edge {}-{}", tet[i], tet[j])))?;
            }
            geometry.push(TetGeometry::from_lengths(l).ok_or(Error::NonRealizable { tet: t })?);
        }

        let mut face_count: BTreeMap<[usize; 3], usize> = BTreeMap::new();
        for tet in &tets {
            for skip in 0..4 {
                let f: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| tet[k]).collect();
                *face_count.entry(face_key([f[0], f[1], f[2]])).or_insert(0) += 1;
            }
        }
        if face_count.values().any(|&c| c > 2) {
            return Err(Error::InvalidMesh("a face is shared by more than two tetrahedra".into()));
        }
        let exposed: BTreeSet<[usize; 3]> = face_count.iter().filter(|(_, &c)| c == 1).map(|(f, _)| *f).collect();
        let tagged: BTreeSet<[usize; 3]> = boundary.iter().map(|(f, _)| face_key(*f)).collect();
        if tagged.len() != boundary.len() {
            return Err(Error::InvalidMesh("duplicate boundary triangle".into()));
        }
        if tagged != exposed {
            return Err(Error::InvalidMesh("tagged boundary does not match the exposed faces of the mesh".into()));
        }
        let mut edge_uses: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (f, _) in &boundary {
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[0], f[2])] {
                *edge_uses.entry(edge_key(a, b)).or_insert(0) += 1;
            }
        }
        if edge_uses.values().any(|&c| c != 2) {
            return Err(Error::InvalidMesh("boundary surface is not a closed 2-manifold".into()));
        }
        let mut outer_vertices = BTreeSet::new();
        let mut inner_vertices = BTreeSet::new();
        for (f, tag) in &boundary {
            let set = if *tag == BoundaryTag::Outer { &mut outer_vertices } else { &mut inner_vertices };
            set.extend(f.iter().copied());
        }
        if outer_vertices.is_empty() {
            return Err(Error::InvalidMesh("no boundary triangle is tagged as the outer boundary".into()));
        }
        if !outer_vertices.is_disjoint(&inner_vertices) {
            return Err(Error::InvalidMesh("outer and inner boundaries share a vertex".into()));
        }
        Ok(Self { vertex_count, tets, lengths, boundary, scalar_curvature, geometry })
    }

    /// Builds a domain from vertex positions (used by mesh generators); only
    /// the resulting edge lengths are kept.
    pub fn from_coordinates(
        coords: &[[f64; 3]],
        tets: Vec<[usize; 4]>,
        tag: impl Fn(&[f64; 3]) -> BoundaryTag,
        scalar_curvature: Option<Vec<f64>>,
    ) -> Result<Self> {
        let mut lengths = BTreeMap::new();
        let mut faces: BTreeMap<[usize; 3], usize> = BTreeMap::new();
        for tet in &tets {
            for &(i, j) in &TET_EDGES {
                let key = edge_key(tet[i], tet[j]);
                lengths.entry(key).or_insert_with(|| dist(&coords[key.0], &coords[key.1]));
            }
            for skip in 0..4 {
                let f: Vec<usize> = (0..4).filter(|&k| k != skip).map(|k| tet[k]).collect();
                *faces.entry(face_key([f[0], f[1], f[2]])).or_insert(0) += 1;
            }
        }
        let boundary = faces
            .into_iter()
            .filter(|&(_, c)| c == 1)
            .map(|(f, _)| {
                let c = [0, 1, 2].map(|k| (coords[f[0]][k] + coords[f[1]][k] + coords[f[2]][k]) / 3.0);
                (f, tag(&c))
            })
            .collect();
        Self::new(coords.len(), tets, lengths, boundary, scalar_curvature)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn tets(&self) -> &[[usize; 4]] {
        &self.tets
    }

    pub fn lengths(&self) -> &BTreeMap<(usize, usize), f64> {
        &self.lengths
    }

    pub fn boundary(&self) -> &[([usize; 3], BoundaryTag)] {
        &self.boundary
    }

    pub fn tet_scalar_curvature(&self) -> &[f64] {
        &self.scalar_curvature
    }

    pub fn geometry(&self) -> &[TetGeometry] {
        &self.geometry
    }

    pub fn has_inner_boundary(&self) -> bool {
        self.boundary.iter().any(|(_, t)| *t == BoundaryTag::Inner)
    }

    pub fn volume(&self) -> f64 {
        self.geometry.iter().map(|g| g.volume).sum()
    }

    fn length(&self, a: usize, b: usize) -> f64 {
        self.lengths[&edge_key(a, b)]
    }

    /// Lumped volume per vertex (a quarter of each incident tet).
    pub fn vertex_volumes(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.vertex_count];
        for (tet, g) in self.tets.iter().zip(&self.geometry) {
            for &v in tet {
                out[v] += 0.25 * g.volume;
            }
        }
        out
    }

    /// Scalar curvature per vertex: volume-weighted average of incident tets.
    pub fn vertex_scalar_curvature(&self) -> Vec<f64> {
        let mut acc = vec![0.0; self.vertex_count];
        let mut vol = vec![0.0; self.vertex_count];
        for ((tet, g), r) in self.tets.iter().zip(&self.geometry).zip(&self.scalar_curvature) {
            for &v in tet {
                acc[v] += r * g.volume;
                vol[v] += g.volume;
            }
        }
        acc.iter().zip(&vol).map(|(a, v)| if *v > 0.0 { a / v } else { 0.0 }).collect()
    }

    /// Discrete boundary mean curvature (sum of principal curvatures, outward
    /// normal): each boundary edge carries `|e| (π - θ_e)` with `θ_e` the total
    /// interior dihedral angle; half of it goes to each endpoint and is divided
    /// by the vertex's third of the incident boundary area. First-order
    /// consistent on regular meshes.
    pub fn boundary_mean_curvature(&self) -> BoundaryCurvature {
        let mut boundary_edges: BTreeMap<(usize, usize), f64> = BTreeMap::new();
        let mut area: BTreeMap<usize, f64> = BTreeMap::new();
        let mut tags: BTreeMap<usize, BoundaryTag> = BTreeMap::new();
        for (f, tag) in &self.boundary {
            for (a, b) in [(f[0], f[1]), (f[1], f[2]), (f[0], f[2])] {
                boundary_edges.insert(edge_key(a, b), 0.0);
            }
            let a = triangle_area(self.length(f[0], f[1]), self.length(f[1], f[2]), self.length(f[0], f[2]));
            for &v in f {
                *area.entry(v).or_insert(0.0) += a / 3.0;
                tags.insert(v, *tag);
            }
        }
        for (tet, g) in self.tets.iter().zip(&self.geometry) {
            for (k, &(i, j)) in TET_EDGES.iter().enumerate() {
                if let Some(theta) = boundary_edges.get_mut(&edge_key(tet[i], tet[j])) {
                    *theta += g.dihedral[k];
                }
            }
        }
        let mut integrated: BTreeMap<usize, f64> = BTreeMap::new();
        for (&(a, b), &theta) in &boundary_edges {
            let w = 0.5 * self.length(a, b) * (PI - theta);
            *integrated.entry(a).or_insert(0.0) += w;
            *integrated.entry(b).or_insert(0.0) += w;
        }
        let mut out = BoundaryCurvature::default();
        for (&v, &a) in &area {
            out.vertices.push(v);
            out.dual_area.push(a);
            out.tag.push(tags[&v]);
            out.mean_curvature.push(integrated.get(&v).copied().unwrap_or(0.0) / a);
        }
        out
    }
}

/// Per-boundary-vertex mean curvature of a [`TetDomain`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundaryCurvature {
    pub vertices: Vec<usize>,
    pub mean_curvature: Vec<f64>,
    pub dual_area: Vec<f64>,
    pub tag: Vec<BoundaryTag>,
}

impl BoundaryCurvature {
    /// `∫ H dσ` over the boundary vertices with the given tag.
    pub fn total(&self, tag: BoundaryTag) -> f64 {
        self.iter(tag).map(|(_, h, a)| h * a).sum()
    }

    pub fn area(&self, tag: BoundaryTag) -> f64 {
        self.iter(tag).map(|(_, _, a)| a).sum()
    }

    /// `(vertex, H, dual area)` for vertices carrying `tag`.
    pub fn iter(&self, tag: BoundaryTag) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        (0..self.vertices.len())
            .filter(move |&i| self.tag[i] == tag)
            .map(move |i| (self.vertices[i], self.mean_curvature[i], self.dual_area[i]))
    }
}
