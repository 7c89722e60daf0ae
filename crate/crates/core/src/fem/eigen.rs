//! Smallest eigenvalues of the Neumann pencil `S x = mu M x`.
//!
//! Small problems go through a dense Cholesky reduction. Larger ones use
//! block shift-invert subspace iteration on `(S + tau M)^{-1} M`, with the
//! constant mode removed in the `M` inner product, so that the iteration
//! only sees mean-zero functions.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sparse::{CsrMatrix, SkylineCholesky};
use crate::bounds::SpectralBound;
use crate::error::{Error, Result};

/// Problems with fewer unknowns use the dense solver.
pub const DENSE_LIMIT: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenOptions {
    /// Eigenvalues requested, counting `mu_0`.
    pub m: usize,
    /// Target for `||S x - mu M x|| / (mu ||M x||)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Extra block vectors beyond those requested.
    pub guard: usize,
    pub seed: u64,
    pub dense_limit: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        Self { m: 4, tol: 1e-9, max_iter: 300, guard: 4, seed: 7, dense_limit: DENSE_LIMIT }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub mu1_fem: f64,
    /// `mu_0, mu_1, ...`, non-decreasing.
    pub mu_sequence: Vec<f64>,
    /// Relative residuals of `mu_1, mu_2, ...`.
    pub residuals: Vec<f64>,
    pub solver: String,
    pub iterations: usize,
    pub n_dofs: usize,
    pub mesh_h: f64,
    pub bounds: Vec<SpectralBound>,
    pub convergence_slope: Option<f64>,
}

/// Eigenvalues and `M`-orthonormal eigenvectors, `mu_0` first.
#[derive(Debug, Clone)]
pub struct Eigenpairs {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub iterations: usize,
    pub solver: &'static str,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn relative_residual(s: &CsrMatrix, m: &CsrMatrix, x: &[f64], mu: f64) -> f64 {
    let sx = s.matvec(x);
    let mx = m.matvec(x);
    let r: Vec<f64> = sx.iter().zip(&mx).map(|(a, b)| a - mu * b).collect();
    norm(&r) / (mu.abs().max(f64::MIN_POSITIVE) * norm(&mx))
}

/// The `m` smallest eigenpairs, dense or iterative depending on size.
pub fn neumann_eigenpairs(s: &CsrMatrix, m: &CsrMatrix, opts: &EigenOptions) -> Result<Eigenpairs> {
    if opts.m < 2 {
        return Err(Error::InvalidParams(format!("need at least 2 eigenvalues, got {}", opts.m)));
    }
    if s.n != m.n || s.n < opts.m + 1 {
        return Err(Error::InvalidParams(format!("pencil of size {} too small for m = {}", s.n, opts.m)));
    }
    if s.n < opts.dense_limit {
        dense_eigenpairs(s, m, opts.m)
    } else {
        subspace_iteration(s, m, opts)
    }
}

/// Runs the eigensolver and packs the result into a report.
pub fn neumann_mu1(s: &CsrMatrix, m: &CsrMatrix, opts: &EigenOptions) -> Result<SpectralReport> {
    let e = neumann_eigenpairs(s, m, opts)?;
    Ok(SpectralReport {
        mu1_fem: e.values[1],
        mu_sequence: e.values,
        residuals: e.residuals,
        solver: e.solver.to_string(),
        iterations: e.iterations,
        n_dofs: s.n,
        mesh_h: f64::NAN,
        bounds: Vec::new(),
        convergence_slope: None,
    })
}

fn dense_eigenpairs(s: &CsrMatrix, m: &CsrMatrix, count: usize) -> Result<Eigenpairs> {
    let n = s.n;
    let md = m.to_dense();
    let chol = md.cholesky().ok_or(Error::IndefiniteMass(0))?;
    let l = chol.l();
    // C = L^{-1} S L^{-T}
    let sd = s.to_dense();
    let y = l.solve_lower_triangular(&sd).ok_or(Error::IndefiniteMass(0))?;
    let c = l.solve_lower_triangular(&y.transpose()).ok_or(Error::IndefiniteMass(0))?;
    let c = 0.5 * (&c + c.transpose());
    let eig = SymmetricEigen::new(c);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let lt = l.transpose();
    let mut values = Vec::with_capacity(count);
    let mut vectors = Vec::with_capacity(count);
    for &k in idx.iter().take(count) {
        let z = eig.eigenvectors.column(k).into_owned();
        let x = lt.solve_upper_triangular(&z).ok_or(Error::IndefiniteMass(0))?;
        values.push(eig.eigenvalues[k]);
        vectors.push(x.as_slice().to_vec());
    }
    let residuals = (1..count).map(|k| relative_residual(s, m, &vectors[k], values[k])).collect();
    Ok(Eigenpairs { values, vectors, residuals, iterations: 1, solver: "dense" })
}

struct Deflator {
    m_ones: Vec<f64>,
    total: f64,
}

impl Deflator {
    fn new(m: &CsrMatrix) -> Self {
        let m_ones = m.row_sums();
        let total = crate::quadrature::stable_sum(&m_ones);
        Self { m_ones, total }
    }

    /// Removes the `M`-projection onto the constant vector.
    fn apply(&self, x: &mut [f64]) {
        let c = dot(&self.m_ones, x) / self.total;
        x.iter_mut().for_each(|v| *v -= c);
    }
}

/// `M`-orthonormalises the columns (two passes of Gram–Schmidt), dropping
/// columns that become numerically dependent.
fn m_orthonormalize(m: &CsrMatrix, cols: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    let mut m_basis: Vec<Vec<f64>> = Vec::with_capacity(cols.len());
    for mut v in cols {
        let scale = dot(&v, &m.matvec(&v)).sqrt();
        for _ in 0..2 {
            for (b, mb) in basis.iter().zip(&m_basis) {
                let c = dot(mb, &v);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= c * y);
            }
        }
        let mv = m.matvec(&v);
        let nrm = dot(&v, &mv).sqrt();
        if nrm > 1e-10 * scale && nrm > 0.0 {
            v.iter_mut().for_each(|x| *x /= nrm);
            basis.push(v);
            m_basis.push(mv.into_iter().map(|x| x / nrm).collect());
        }
    }
    basis
}

fn subspace_iteration(s: &CsrMatrix, m: &CsrMatrix, opts: &EigenOptions) -> Result<Eigenpairs> {
    let n = s.n;
    let wanted = opts.m - 1;
    let block = wanted + opts.guard.max(1);
    let deflate = Deflator::new(m);
    let area = deflate.total;
    if !(area > 0.0) {
        return Err(Error::IndefiniteMass(0));
    }
    let tau = 1.0 / area;
    let shifted = s.add_scaled(m, tau);
    let factor = SkylineCholesky::factor(&shifted)?;

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut x: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();
    x.iter_mut().for_each(|v| deflate.apply(v));

    let mut residuals = vec![f64::INFINITY; wanted];
    for it in 1..=opts.max_iter {
        let y: Vec<Vec<f64>> = x
            .par_iter()
            .map(|v| {
                let mut w = factor.solve(&m.matvec(v));
                deflate.apply(&mut w);
                w
            })
            .collect();
        let q = m_orthonormalize(m, y);
        let p = q.len();
        if p < wanted {
            return Err(Error::SolverNoConvergence { iterations: it, residual: f64::INFINITY });
        }
        let sq: Vec<Vec<f64>> = q.par_iter().map(|v| s.matvec(v)).collect();
        let mut small = DMatrix::<f64>::zeros(p, p);
        for i in 0..p {
            for j in 0..=i {
                let v = 0.5 * (dot(&q[i], &sq[j]) + dot(&q[j], &sq[i]));
                small[(i, j)] = v;
                small[(j, i)] = v;
            }
        }
        let eig = SymmetricEigen::new(small);
        let mut order: Vec<usize> = (0..p).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        x = order
            .iter()
            .map(|&k| {
                let mut v = vec![0.0; n];
                for (i, qi) in q.iter().enumerate() {
                    let c = eig.eigenvectors[(i, k)];
                    v.iter_mut().zip(qi).for_each(|(a, b)| *a += c * b);
                }
                v
            })
            .collect();
        let theta: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        residuals = (0..wanted)
            .into_par_iter()
            .map(|k| relative_residual(s, m, &x[k], theta[k]))
            .collect();
        if residuals.iter().all(|&r| r <= opts.tol) {
            return Ok(finish(s, m, x, theta, residuals, it));
        }
    }
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    Err(Error::SolverNoConvergence { iterations: opts.max_iter, residual: worst })
}

fn finish(
    s: &CsrMatrix,
    m: &CsrMatrix,
    x: Vec<Vec<f64>>,
    theta: Vec<f64>,
    residuals: Vec<f64>,
    iterations: usize,
) -> Eigenpairs {
    let wanted = residuals.len();
    let n = s.n;
    let area: f64 = crate::quadrature::stable_sum(&m.row_sums());
    let ones = vec![1.0; n];
    // Rayleigh quotient of the constant vector
    let mu0 = dot(&ones, &s.matvec(&ones)) / area;
    let c = 1.0 / area.sqrt();
    let mut values = vec![mu0];
    let mut vectors = vec![vec![c; n]];
    values.extend_from_slice(&theta[..wanted]);
    vectors.extend(x.into_iter().take(wanted));
    Eigenpairs { values, vectors, residuals, iterations, solver: "shift_invert" }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilatation::MatrixField;
    use crate::fem::assembly::assemble;
    use crate::fem::mesh::mesh_square;
    use std::f64::consts::PI;

    #[test]
    fn square_dense_and_iterative_agree() {
        let mesh = mesh_square(1.0, 24).unwrap();
        let (s, m) = assemble(&mesh, &MatrixField::identity()).unwrap();
        let dense = neumann_eigenpairs(&s, &m, &EigenOptions { m: 4, ..Default::default() }).unwrap();
        let iter = neumann_eigenpairs(&s, &m, &EigenOptions { m: 4, dense_limit: 10, ..Default::default() }).unwrap();
        for k in 1..4 {
            assert!((dense.values[k] - iter.values[k]).abs() < 1e-8 * dense.values[k]);
        }
        assert!(dense.values[0].abs() < 1e-10);
        assert!(iter.values[0].abs() < 1e-10);
        assert!((dense.values[1] / (PI * PI) - 1.0).abs() < 0.01);
        assert!(iter.residuals.iter().all(|&r| r <= 1e-9));
    }
}
