//! Conforming triangulations of star-shaped domains.

use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Read, Write};

use crate::error::{Error, Result};
use crate::qcmaps::{AnalyticQCMap, DomainSpec};

/// A triangle is degenerate when its area is below this multiple of its
/// longest edge squared.
pub const MIN_AREA_RATIO: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    pub vertices: Vec<[f64; 2]>,
    pub triangles: Vec<[usize; 3]>,
    pub boundary: Vec<bool>,
    pub h_max: f64,
}

fn signed_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl Mesh {
    /// Builds a mesh and checks every invariant; boundary flags are derived
    /// from edges that belong to a single triangle.
    pub fn new(vertices: Vec<[f64; 2]>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let nv = vertices.len();
        if nv < 3 || triangles.is_empty() {
            return Err(Error::InvalidMesh(format!("{nv} vertices, {} triangles", triangles.len())));
        }
        if let Some(t) = triangles.iter().find(|t| t.iter().any(|&i| i >= nv)) {
            return Err(Error::InvalidMesh(format!("triangle {t:?} references a missing vertex")));
        }
        let h_max = triangles
            .iter()
            .flat_map(|t| (0..3).map(move |k| (t[k], t[(k + 1) % 3])))
            .map(|(i, j)| dist(vertices[i], vertices[j]))
            .fold(0.0, f64::max);
        for t in &triangles {
            let [p, q, r] = [vertices[t[0]], vertices[t[1]], vertices[t[2]]];
            let a = signed_area(p, q, r);
            // relative to the triangle's own size: cusp tips are legitimately tiny
            let l = dist(p, q).max(dist(q, r)).max(dist(r, p));
            if !(a >= MIN_AREA_RATIO * l * l) || a <= 0.0 {
                return Err(Error::DegenerateBoundary(format!("triangle {t:?} has signed area {a:e}")));
            }
        }
        let edges = edge_counts(&triangles);
        let mut boundary = vec![false; nv];
        for (&(i, j), &c) in &edges {
            match c {
                1 => {
                    boundary[i] = true;
                    boundary[j] = true;
                }
                2 => {}
                _ => return Err(Error::InvalidMesh(format!("edge ({i}, {j}) shared by {c} triangles"))),
            }
        }
        let mut used = vec![false; nv];
        triangles.iter().flatten().for_each(|&i| used[i] = true);
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(Error::InvalidMesh(format!("vertex {i} belongs to no triangle")));
        }
        Ok(Self { vertices, triangles, boundary, h_max })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn n_edges(&self) -> usize {
        edge_counts(&self.triangles).len()
    }

    /// `V - E + F`; equals 1 for a triangulated disc.
    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices() as i64 - self.n_edges() as i64 + self.n_triangles() as i64
    }

    pub fn triangle_area(&self, t: usize) -> f64 {
        let [a, b, c] = self.triangles[t];
        signed_area(self.vertices[a], self.vertices[b], self.vertices[c])
    }

    pub fn area(&self) -> f64 {
        let areas: Vec<f64> = (0..self.n_triangles()).map(|t| self.triangle_area(t)).collect();
        crate::quadrature::stable_sum(&areas)
    }

    pub fn centroid(&self, t: usize) -> Complex64 {
        let [a, b, c] = self.triangles[t];
        let v = &self.vertices;
        Complex64::new((v[a][0] + v[b][0] + v[c][0]) / 3.0, (v[a][1] + v[b][1] + v[c][1]) / 3.0)
    }

    /// Writes `nv nt`, then `x y flag` per vertex and `i j k` per triangle.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        let mut s = String::new();
        writeln!(s, "{} {}", self.n_vertices(), self.n_triangles()).unwrap();
        for (v, &b) in self.vertices.iter().zip(&self.boundary) {
            writeln!(s, "{:?} {:?} {}", v[0], v[1], b as u8).unwrap();
        }
        for t in &self.triangles {
            writeln!(s, "{} {} {}", t[0], t[1], t[2]).unwrap();
        }
        out.write_all(s.as_bytes())?;
        Ok(())
    }

    pub fn read_text<R: Read>(input: R) -> Result<Self> {
        let mut lines = BufReader::new(input).lines();
        let mut next = |what: &str| -> Result<String> {
            lines
                .next()
                .ok_or_else(|| Error::Parse(format!("unexpected end of mesh file reading {what}")))?
                .map_err(Error::from)
        };
        let header = next("header")?;
        let mut it = header.split_whitespace().map(str::parse::<usize>);
        let (nv, nt) = match (it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b))) => (a, b),
            _ => return Err(Error::Parse(format!("bad mesh header `{header}`"))),
        };
        let mut vertices = Vec::with_capacity(nv);
        let mut flags = Vec::with_capacity(nv);
        for k in 0..nv {
            let line = next("vertex")?;
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Parse(format!("vertex line {k}: `{line}`")));
            }
            let p = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("vertex line {k}: `{line}`")));
            vertices.push([p(f[0])?, p(f[1])?]);
            flags.push(f[2] == "1");
        }
        let mut triangles = Vec::with_capacity(nt);
        for k in 0..nt {
            let line = next("triangle")?;
            let idx: std::result::Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
            match idx {
                Ok(v) if v.len() == 3 => triangles.push([v[0], v[1], v[2]]),
                _ => return Err(Error::Parse(format!("triangle line {k}: `{line}`"))),
            }
        }
        let mesh = Self::new(vertices, triangles)?;
        if mesh.boundary != flags {
            return Err(Error::InvalidMesh("boundary flags disagree with mesh topology".into()));
        }
        Ok(mesh)
    }
}

fn edge_counts(triangles: &[[usize; 3]]) -> HashMap<(usize, usize), u32> {
    let mut edges = HashMap::with_capacity(triangles.len() * 2);
    for t in triangles {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            *edges.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
    }
    edges
}

/// Structured polar grid: vertex 0 at the pole, then rings `i = 1..=n_r`
/// of `cols` vertices each.
struct PolarGrid {
    n_r: usize,
    cols: usize,
    periodic: bool,
}

impl PolarGrid {
    fn index(&self, i: usize, j: usize) -> usize {
        if i == 0 {
            0
        } else {
            1 + (i - 1) * self.cols + j % self.cols
        }
    }

    /// Triangles with counter-clockwise orientation in `(s, theta)`.
    ///
    /// Quads left of `pivot` take the `(i, j)-(i+1, j+1)` diagonal and the
    /// others the opposite one, so the pattern is mirror-symmetric about the
    /// column `pivot`.
    fn triangles(&self, pivot: usize) -> Vec<[usize; 3]> {
        let strips = if self.periodic { self.cols } else { self.cols - 1 };
        let mut tris = Vec::with_capacity(strips * (2 * self.n_r - 1));
        for j in 0..strips {
            tris.push([0, self.index(1, j), self.index(1, j + 1)]);
        }
        for i in 1..self.n_r {
            for j in 0..strips {
                let a = self.index(i, j);
                let b = self.index(i + 1, j);
                let c = self.index(i + 1, j + 1);
                let d = self.index(i, j + 1);
                if j < pivot {
                    tris.push([a, b, c]);
                    tris.push([a, c, d]);
                } else {
                    tris.push([a, b, d]);
                    tris.push([b, c, d]);
                }
            }
        }
        tris
    }
}

fn check_resolution(n_radial: usize, n_angular: usize) -> Result<()> {
    if n_radial < 4 || n_angular < 16 {
        return Err(Error::InvalidResolution(format!(
            "need n_radial >= 4 and n_angular >= 16, got ({n_radial}, {n_angular})"
        )));
    }
    Ok(())
}

/// Triangulates a star-shaped domain by radial blending of a structured
/// polar grid, `z = s^p rho(theta) e^{i theta}` with the domain's grading `p`.
///
/// When the pole lies on the boundary (petal and cusp tips) the two angular
/// end rays collapse onto the pole; their sectors carry no area and are
/// dropped, so the mesh covers `theta` in `[theta_1, theta_{n-1}]`.
pub fn mesh_star_domain(domain: &DomainSpec, n_radial: usize, n_angular: usize) -> Result<Mesh> {
    check_resolution(n_radial, n_angular)?;
    let (t0, t1) = domain.theta_range();
    let periodic = domain.is_periodic();
    let p = domain.radial_grading();
    let dtheta = (t1 - t0) / n_angular as f64;
    let thetas: Vec<f64> = if periodic {
        (0..n_angular).map(|j| t0 + j as f64 * dtheta).collect()
    } else {
        (1..n_angular).map(|j| t0 + j as f64 * dtheta).collect()
    };
    let pole_on_boundary = domain.pole_on_boundary();
    let grid = PolarGrid { n_r: n_radial, cols: thetas.len(), periodic };
    let rho: Vec<f64> = thetas.iter().map(|&t| domain.rho(t)).collect();
    let mut vertices = Vec::with_capacity(1 + n_radial * thetas.len());
    vertices.push([0.0, 0.0]);
    for i in 1..=n_radial {
        let s = (i as f64 / n_radial as f64).powf(p);
        for (&t, &r) in thetas.iter().zip(&rho) {
            vertices.push([s * r * t.cos(), s * r * t.sin()]);
        }
    }
    let pivot = if pole_on_boundary { grid.cols } else { grid.cols / 2 };
    Mesh::new(vertices, grid.triangles(pivot))
}

/// Triangulation of `Omega` as the image under `phi^{-1}` of a structured
/// disc mesh with `n_radial` rings of `n_angular` vertices.
///
/// The disc grid has a vertex at `w = -1` and a diagonal pattern that is
/// symmetric about it, so that the angle-doubling branch point of the cusp
/// map does not fold any triangle.
pub fn mesh_pullback(map: &AnalyticQCMap, n_radial: usize, n_angular: usize) -> Result<Mesh> {
    check_resolution(n_radial, n_angular)?;
    let n_angular = n_angular + n_angular % 2;
    let grid = PolarGrid { n_r: n_radial, cols: n_angular, periodic: true };
    let mut vertices = Vec::with_capacity(1 + n_radial * n_angular);
    let push = |vertices: &mut Vec<[f64; 2]>, w: Complex64| {
        let z = map.inverse_unchecked(w);
        vertices.push([z.re, z.im]);
    };
    push(&mut vertices, Complex64::new(0.0, 0.0));
    for i in 1..=n_radial {
        let r = i as f64 / n_radial as f64;
        for j in 0..n_angular {
            let w = if i == n_radial && 2 * j == n_angular {
                Complex64::new(-1.0, 0.0)
            } else {
                Complex64::from_polar(r, 2.0 * PI * j as f64 / n_angular as f64)
            };
            push(&mut vertices, w);
        }
    }
    Mesh::new(vertices, grid.triangles(n_angular / 2))
}

/// Structured `n x n` triangulation of the square `[0, side]^2`.
pub fn mesh_square(side: f64, n: usize) -> Result<Mesh> {
    if n < 2 {
        return Err(Error::InvalidResolution(format!("square mesh needs n >= 2, got {n}")));
    }
    let h = side / n as f64;
    let mut vertices = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..=n {
        for j in 0..=n {
            vertices.push([j as f64 * h, i as f64 * h]);
        }
    }
    let id = |i: usize, j: usize| i * (n + 1) + j;
    let mut tris = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            // alternate diagonals give a criss-cross free, symmetric pattern
            if (i + j) % 2 == 0 {
                tris.push([id(i, j), id(i, j + 1), id(i + 1, j + 1)]);
                tris.push([id(i, j), id(i + 1, j + 1), id(i + 1, j)]);
            } else {
                tris.push([id(i, j), id(i, j + 1), id(i + 1, j)]);
                tris.push([id(i, j + 1), id(i + 1, j + 1), id(i + 1, j)]);
            }
        }
    }
    Mesh::new(vertices, tris)
}
