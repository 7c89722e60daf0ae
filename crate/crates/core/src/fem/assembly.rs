//! P1 assembly of the Neumann form `int <A grad u, grad v>` and the mass
//! matrix.
//!
//! Element matrices are computed in parallel and scattered sequentially in
//! triangle order, so the result is bitwise independent of the thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use super::mesh::Mesh;
use super::sparse::CsrMatrix;
use crate::dilatation::{MatrixField, SymMatrix2};
use crate::error::Result;

pub type ElementMatrix = [[f64; 3]; 3];

/// Gradients of the three barycentric functions and the triangle area.
pub fn p1_gradients(p: [[f64; 2]; 3]) -> ([[f64; 2]; 3], f64) {
    let area = 0.5 * ((p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[1][1] - p[0][1]) * (p[2][0] - p[0][0]));
    let inv = 1.0 / (2.0 * area);
    let mut g = [[0.0; 2]; 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        let k = (i + 2) % 3;
        g[i] = [(p[j][1] - p[k][1]) * inv, (p[k][0] - p[j][0]) * inv];
    }
    (g, area)
}

/// Element stiffness `area <A grad phi_i, grad phi_j>` for constant `A`.
pub fn element_stiffness(p: [[f64; 2]; 3], a: &SymMatrix2) -> ElementMatrix {
    let (g, area) = p1_gradients(p);
    let mut k = [[0.0; 3]; 3];
    for i in 0..3 {
        let ag = a.apply(g[i]);
        for j in 0..3 {
            k[i][j] = area * (ag[0] * g[j][0] + ag[1] * g[j][1]);
        }
    }
    k
}

/// Exact P1 mass matrix `area / 12 [[2,1,1],[1,2,1],[1,1,2]]`.
pub fn element_mass(p: [[f64; 2]; 3]) -> ElementMatrix {
    let (_, area) = p1_gradients(p);
    let d = area / 6.0;
    let o = area / 12.0;
    [[d, o, o], [o, d, o], [o, o, d]]
}

/// Mass matrix for `int w u v`, with `w` sampled at the edge midpoints
/// (exact when `w` is constant or linear).
pub fn element_weighted_mass(p: [[f64; 2]; 3], w: impl Fn(Complex64) -> f64) -> ElementMatrix {
    let (_, area) = p1_gradients(p);
    let mid = |a: usize, b: usize| Complex64::new(0.5 * (p[a][0] + p[b][0]), 0.5 * (p[a][1] + p[b][1]));
    // midpoint m_k lies opposite vertex k; basis values there are 1/2, 1/2, 0
    let wm = [w(mid(1, 2)), w(mid(2, 0)), w(mid(0, 1))];
    let mut m = [[0.0; 3]; 3];
    for (k, &wk) in wm.iter().enumerate() {
        let mut phi = [0.5; 3];
        phi[k] = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += area / 3.0 * wk * phi[i] * phi[j];
            }
        }
    }
    m
}

fn pattern(mesh: &Mesh) -> CsrMatrix {
    let mut rows: Vec<Vec<usize>> = vec![Vec::new(); mesh.n_vertices()];
    for t in &mesh.triangles {
        for &i in t {
            rows[i].extend_from_slice(t);
        }
    }
    for r in &mut rows {
        r.sort_unstable();
        r.dedup();
    }
    CsrMatrix::from_pattern(&rows)
}

fn scatter(target: &mut CsrMatrix, mesh: &Mesh, elements: &[ElementMatrix]) {
    for (t, e) in mesh.triangles.iter().zip(elements) {
        for i in 0..3 {
            for j in 0..3 {
                target.add_to(t[i], t[j], e[i][j]);
            }
        }
    }
}

fn corners(mesh: &Mesh, t: usize) -> [[f64; 2]; 3] {
    let [a, b, c] = mesh.triangles[t];
    [mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]]
}

/// Stiffness matrix with `A` evaluated at each triangle centroid.
pub fn assemble_stiffness(mesh: &Mesh, field: &MatrixField) -> Result<CsrMatrix> {
    let elements: Vec<ElementMatrix> = (0..mesh.n_triangles())
        .into_par_iter()
        .map(|t| Ok(element_stiffness(corners(mesh, t), &field.eval(mesh.centroid(t))?)))
        .collect::<Result<_>>()?;
    let mut s = pattern(mesh);
    scatter(&mut s, mesh, &elements);
    Ok(s)
}

pub fn assemble_mass(mesh: &Mesh) -> CsrMatrix {
    let elements: Vec<ElementMatrix> = (0..mesh.n_triangles())
        .into_par_iter()
        .map(|t| element_mass(corners(mesh, t)))
        .collect();
    let mut m = pattern(mesh);
    scatter(&mut m, mesh, &elements);
    m
}

pub fn assemble_weighted_mass<W>(mesh: &Mesh, weight: W) -> CsrMatrix
where
    W: Fn(Complex64) -> f64 + Sync,
{
    let elements: Vec<ElementMatrix> = (0..mesh.n_triangles())
        .into_par_iter()
        .map(|t| element_weighted_mass(corners(mesh, t), &weight))
        .collect();
    let mut m = pattern(mesh);
    scatter(&mut m, mesh, &elements);
    m
}

/// `(stiffness, mass)` for the Neumann problem `-div(A grad u) = mu u`.
pub fn assemble(mesh: &Mesh, field: &MatrixField) -> Result<(CsrMatrix, CsrMatrix)> {
    Ok((assemble_stiffness(mesh, field)?, assemble_mass(mesh)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const REF: [[f64; 2]; 3] = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]];

    #[test]
    fn reference_element() {
        let k = element_stiffness(REF, &SymMatrix2::IDENTITY);
        let want = [[1.0, -0.5, -0.5], [-0.5, 0.5, 0.0], [-0.5, 0.0, 0.5]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((k[i][j] - want[i][j]).abs() < 1e-15);
            }
        }
        let m = element_mass(REF);
        assert!((m[0][0] - 1.0 / 12.0).abs() < 1e-15 && (m[0][1] - 1.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn weighted_mass_reduces_to_plain() {
        let a = element_weighted_mass(REF, |_| 1.0);
        let b = element_mass(REF);
        for i in 0..3 {
            for j in 0..3 {
                assert!((a[i][j] - b[i][j]).abs() < 1e-15);
            }
        }
    }
}
