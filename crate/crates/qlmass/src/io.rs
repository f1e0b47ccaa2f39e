//! Profile CSV files, their JSON sidecars, and the plain-text tet format.
//!
//! # Profiles
//!
//! UTF-8 CSV, `#` starts a comment line. The header selects the kind:
//!
//! * `s,f` is an axisymmetric 2-sphere metric `ds² + f(s)² dθ²`.
//! * `r,h` (optionally `r,h,dh,ddh` with exact derivatives) is a
//!   rotationally symmetric 3-domain `dr² + h(r)² g_{S²}`.
//!
//! A radial profile `name.csv` may have a sidecar `name.json` holding the
//! inner role and generator metadata. Without one the role is inferred:
//! `h(r_in) = 0` is a regular center, anything else a cut.
//!
//! # Tet meshes
//!
//! Whitespace separated, `#` comments, sections in this order:
//!
//! ```text
//! vertices N
//! tets M
//! a b c d            # M rows of vertex indices
//! edges K
//! i j length         # K rows
//! boundary B
//! a b c outer|inner  # B rows
//! scalar_curvature M # optional, M rows of one value
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use qlmass_core::{AxisymmetricMetric, BoundaryTag, InnerRole, RadialDomain, TetDomain};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A parsed profile file.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    Metric(AxisymmetricMetric),
    Radial(RadialDomain),
}

/// Metadata stored next to a radial profile.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_role: Option<String>,
    /// Mass parameter of the generating family, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

impl Sidecar {
    pub fn for_domain(domain: &RadialDomain) -> Self {
        Self { inner_role: Some(domain.inner_role().name().to_string()), ..Self::default() }
    }
}

pub fn sidecar_path(profile: &Path) -> PathBuf {
    profile.with_extension("json")
}

/// Reads a profile and, for radial profiles, its sidecar if present. `tol`
/// is the closure tolerance for metrics.
pub fn read_profile(path: &Path, tol: f64) -> Result<Profile> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    let side = sidecar_path(path);
    let sidecar = if side.exists() { Some(read_sidecar(&side)?) } else { None };
    parse_profile(&text, path, sidecar.as_ref(), tol)
}

pub fn read_sidecar(path: &Path) -> Result<Sidecar> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    serde_json::from_str(&text).map_err(|source| Error::Json { path: path.into(), source })
}

/// Parses profile CSV text; `path` is only used in messages.
pub fn parse_profile(text: &str, path: &Path, sidecar: Option<&Sidecar>, tol: f64) -> Result<Profile> {
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let csv_err = |source| Error::Csv { path: path.into(), source };
    let header: Vec<String> = reader.headers().map_err(csv_err)?.iter().map(str::to_owned).collect();
    let columns = match header.iter().map(String::as_str).collect::<Vec<_>>().as_slice() {
        ["s", "f"] | ["r", "h"] => 2,
        ["r", "h", "dh", "ddh"] => 4,
        other => return Err(Error::parse(path, 1, format!("unknown header {other:?}; expected s,f or r,h"))),
    };
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); columns];
    for record in reader.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != columns {
            return Err(Error::parse(path, line, format!("expected {columns} fields, found {}", record.len())));
        }
        for (col, field) in cols.iter_mut().zip(record.iter()) {
            let v = field.parse::<f64>().map_err(|_| Error::parse(path, line, format!("not a number: {field:?}")))?;
            col.push(v);
        }
    }
    if header[0] == "s" {
        let samples: Vec<(f64, f64)> = cols[0].iter().copied().zip(cols[1].iter().copied()).collect();
        return Ok(Profile::Metric(AxisymmetricMetric::from_samples_with_tol(&samples, tol)?));
    }
    let role = match sidecar.and_then(|s| s.inner_role.as_deref()) {
        Some(name) => InnerRole::parse(name)
            .ok_or_else(|| Error::parse(sidecar_path(path), 0, format!("unknown inner role {name:?}")))?,
        None if cols[1].first() == Some(&0.0) => InnerRole::RegularCenter,
        None => InnerRole::Cut,
    };
    let mut cols = cols.into_iter();
    let (r, h) = (cols.next().unwrap_or_default(), cols.next().unwrap_or_default());
    let domain = match (cols.next(), cols.next()) {
        (Some(dh), Some(ddh)) => RadialDomain::from_parts(r, h, dh, ddh, role)?,
        _ => RadialDomain::from_samples(r, h, role)?,
    };
    Ok(Profile::Radial(domain))
}

pub fn format_metric(m: &AxisymmetricMetric) -> String {
    let mut out = String::from("s,f\n");
    for (s, f) in m.s().iter().zip(m.f()) {
        out.push_str(&format!("{s},{f}\n"));
    }
    out
}

/// Writes `r,h,dh,ddh` so derivatives survive a round trip.
pub fn format_radial(d: &RadialDomain) -> String {
    let mut out = String::from("r,h,dh,ddh\n");
    for i in 0..d.nodes() {
        out.push_str(&format!("{},{},{},{}\n", d.r()[i], d.h()[i], d.dh()[i], d.ddh()[i]));
    }
    out
}

pub fn write_metric(path: &Path, m: &AxisymmetricMetric) -> Result<()> {
    fs::write(path, format_metric(m)).map_err(Error::io(path))
}

/// Writes the profile and its sidecar.
pub fn write_radial(path: &Path, d: &RadialDomain, sidecar: &Sidecar) -> Result<()> {
    fs::write(path, format_radial(d)).map_err(Error::io(path))?;
    let side = sidecar_path(path);
    let json = serde_json::to_string_pretty(sidecar).map_err(|source| Error::Json { path: side.clone(), source })?;
    fs::write(&side, json + "\n").map_err(Error::io(side))
}

type Tokens<'a> = Box<dyn Iterator<Item = (usize, Vec<&'a str>)> + 'a>;

struct Lines<'a> {
    path: &'a Path,
    inner: std::iter::Peekable<Tokens<'a>>,
}

impl<'a> Lines<'a> {
    fn new(path: &'a Path, text: &'a str) -> Self {
        let it: Tokens<'a> = Box::new(text.lines().enumerate().filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("").trim();
            (!l.is_empty()).then(|| (i + 1, l.split_whitespace().collect()))
        }));
        Self { path, inner: it.peekable() }
    }

    fn next_row(&mut self, what: &str) -> Result<(usize, Vec<&'a str>)> {
        self.inner.next().ok_or_else(|| Error::parse(self.path, 0, format!("unexpected end of file, expected {what}")))
    }

    fn section(&mut self, name: &str) -> Result<usize> {
        let (line, row) = self.next_row(name)?;
        match row.as_slice() {
            [key, n] if *key == name => {
                n.parse().map_err(|_| Error::parse(self.path, line, format!("bad count {n:?}")))
            }
            _ => Err(Error::parse(self.path, line, format!("expected `{name} <count>`"))),
        }
    }

    fn optional_section(&mut self, name: &str) -> Result<Option<usize>> {
        match self.inner.peek() {
            Some((_, row)) if row.first() == Some(&name) => self.section(name).map(Some),
            _ => Ok(None),
        }
    }

    fn num<T: std::str::FromStr>(&self, line: usize, tok: &str) -> Result<T> {
        tok.parse().map_err(|_| Error::parse(self.path, line, format!("bad value {tok:?}")))
    }

    fn fields(&mut self, what: &str, n: usize) -> Result<(usize, Vec<&'a str>)> {
        let (line, row) = self.next_row(what)?;
        if row.len() != n {
            return Err(Error::parse(self.path, line, format!("{what} row needs {n} fields, found {}", row.len())));
        }
        Ok((line, row))
    }
}

/// Parses the tet format; `path` is only used in messages.
pub fn parse_tet(text: &str, path: &Path) -> Result<TetDomain> {
    let mut lines = Lines::new(path, text);
    let vertex_count = lines.section("vertices")?;
    let n_tets = lines.section("tets")?;
    let mut tets = Vec::with_capacity(n_tets);
    for _ in 0..n_tets {
        let (line, row) = lines.fields("tet", 4)?;
        let mut t = [0usize; 4];
        for (slot, tok) in t.iter_mut().zip(&row) {
            *slot = lines.num(line, tok)?;
        }
        tets.push(t);
    }
    let n_edges = lines.section("edges")?;
    let mut lengths = BTreeMap::new();
    for _ in 0..n_edges {
        let (line, row) = lines.fields("edge", 3)?;
        let (i, j): (usize, usize) = (lines.num(line, row[0])?, lines.num(line, row[1])?);
        let l: f64 = lines.num(line, row[2])?;
        if lengths.insert((i.min(j), i.max(j)), l).is_some() {
            return Err(Error::parse(path, line, format!("duplicate edge {i}-{j}")));
        }
    }
    let n_boundary = lines.section("boundary")?;
    let mut boundary = Vec::with_capacity(n_boundary);
    for _ in 0..n_boundary {
        let (line, row) = lines.fields("boundary", 4)?;
        let f = [lines.num(line, row[0])?, lines.num(line, row[1])?, lines.num(line, row[2])?];
        let tag = match row[3] {
            "outer" => BoundaryTag::Outer,
            "inner" => BoundaryTag::Inner,
            other => {
                return Err(Error::parse(path, line, format!("boundary tag must be outer or inner, not {other:?}")))
            }
        };
        boundary.push((f, tag));
    }
    let scalar_curvature = match lines.optional_section("scalar_curvature")? {
        Some(n) => {
            let mut values = Vec::with_capacity(n);
            for _ in 0..n {
                let (line, row) = lines.fields("scalar_curvature", 1)?;
                values.push(lines.num(line, row[0])?);
            }
            Some(values)
        }
        None => None,
    };
    if let Some((line, _)) = lines.inner.next() {
        return Err(Error::parse(path, line, "trailing content"));
    }
    Ok(TetDomain::new(vertex_count, tets, lengths, boundary, scalar_curvature)?)
}

pub fn format_tet(d: &TetDomain) -> String {
    let mut out = format!("vertices {}\ntets {}\n", d.vertex_count(), d.tets().len());
    for t in d.tets() {
        out.push_str(&format!("{} {} {} {}\n", t[0], t[1], t[2], t[3]));
    }
    out.push_str(&format!("edges {}\n", d.lengths().len()));
    for ((i, j), l) in d.lengths() {
        out.push_str(&format!("{i} {j} {l}\n"));
    }
    out.push_str(&format!("boundary {}\n", d.boundary().len()));
    for (f, tag) in d.boundary() {
        let tag = if *tag == BoundaryTag::Outer { "outer" } else { "inner" };
        out.push_str(&format!("{} {} {} {tag}\n", f[0], f[1], f[2]));
    }
    let r = d.tet_scalar_curvature();
    if r.iter().any(|&v| v != 0.0) {
        out.push_str(&format!("scalar_curvature {}\n", r.len()));
        for v in r {
            out.push_str(&format!("{v}\n"));
        }
    }
    out
}

pub fn read_tet(path: &Path) -> Result<TetDomain> {
    let text = fs::read_to_string(path).map_err(Error::io(path))?;
    parse_tet(&text, path)
}

pub fn write_tet(path: &Path, d: &TetDomain) -> Result<()> {
    fs::write(path, format_tet(d)).map_err(Error::io(path))
}
