//! Compressed sparse rows, reverse Cuthill–McKee ordering and an envelope
//! (skyline) Cholesky factorisation.

use nalgebra::DMatrix;
use rayon::prelude::*;
use std::collections::VecDeque;

use crate::error::{Error, Result};

/// Square sparse matrix in CSR form with sorted column indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CsrMatrix {
    /// Zero matrix on the pattern given by per-row sorted column lists.
    pub fn from_pattern(rows: &[Vec<usize>]) -> Self {
        let n = rows.len();
        let mut row_ptr = Vec::with_capacity(n + 1);
        row_ptr.push(0);
        let mut col_idx = Vec::new();
        for r in rows {
            debug_assert!(r.windows(2).all(|w| w[0] < w[1]));
            col_idx.extend_from_slice(r);
            row_ptr.push(col_idx.len());
        }
        let nnz = col_idx.len();
        Self { n, row_ptr, col_idx, values: vec![0.0; nnz] }
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[a..b], &self.values[a..b])
    }

    /// Storage slot of entry `(i, j)`, if it is in the pattern.
    pub fn position(&self, i: usize, j: usize) -> Option<usize> {
        let (a, b) = (self.row_ptr[i], self.row_ptr[i + 1]);
        self.col_idx[a..b].binary_search(&j).ok().map(|k| a + k)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.position(i, j).map_or(0.0, |k| self.values[k])
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        let k = self.position(i, j).expect("entry outside sparsity pattern");
        self.values[k] += v;
    }

    /// `y = A x`, rows in parallel.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n)
            .into_par_iter()
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).map(|(&j, &a)| a * x[j]).sum()
            })
            .collect()
    }

    /// `A + alpha B` for matrices on the same pattern.
    pub fn add_scaled(&self, other: &CsrMatrix, alpha: f64) -> CsrMatrix {
        assert!(self.row_ptr == other.row_ptr && self.col_idx == other.col_idx, "pattern mismatch");
        let mut out = self.clone();
        out.values.iter_mut().zip(&other.values).for_each(|(a, b)| *a += alpha * b);
        out
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| crate::quadrature::stable_sum(self.row(i).1)).collect()
    }

    /// Largest absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).1.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        (0..self.n).all(|i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).all(|(&j, &a)| (a - self.get(j, i)).abs() <= tol * a.abs().max(1.0))
        })
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut d = DMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let (c, v) = self.row(i);
            for (&j, &a) in c.iter().zip(v) {
                d[(i, j)] = a;
            }
        }
        d
    }
}

/// Reverse Cuthill–McKee permutation: `perm[new] = old`.
///
/// Each connected component starts from a pseudo-peripheral vertex found by
/// repeated breadth-first sweeps; neighbours are visited by increasing degree,
/// ties by index.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.n;
    let degree: Vec<usize> = (0..n).map(|i| a.row(i).0.len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut next_unvisited = 0;
    while order.len() < n {
        while visited[next_unvisited] {
            next_unvisited += 1;
        }
        let start = pseudo_peripheral(a, next_unvisited, &degree);
        let mut queue = VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = a.row(v).0.iter().copied().filter(|&u| !visited[u]).collect();
            nbrs.sort_by_key(|&u| (degree[u], u));
            for u in nbrs {
                visited[u] = true;
                queue.push_back(u);
            }
        }
    }
    order.reverse();
    order
}

fn bfs_levels(a: &CsrMatrix, start: usize) -> (Vec<usize>, usize) {
    let mut level = vec![usize::MAX; a.n];
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut depth = 0;
    while let Some(v) = queue.pop_front() {
        depth = depth.max(level[v]);
        for &u in a.row(v).0 {
            if level[u] == usize::MAX {
                level[u] = level[v] + 1;
                queue.push_back(u);
            }
        }
    }
    (level, depth)
}

fn pseudo_peripheral(a: &CsrMatrix, seed: usize, degree: &[usize]) -> usize {
    let mut v = seed;
    let (mut level, mut depth) = bfs_levels(a, v);
    for _ in 0..8 {
        let candidate = (0..a.n)
            .filter(|&u| level[u] == depth)
            .min_by_key(|&u| (degree[u], u))
            .unwrap_or(v);
        let (l2, d2) = bfs_levels(a, candidate);
        if d2 <= depth {
            break;
        }
        v = candidate;
        level = l2;
        depth = d2;
    }
    v
}

/// Lower-triangular Cholesky factor in envelope storage, acting on a
/// permuted system.
#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    n: usize,
    perm: Vec<usize>,
    inv_perm: Vec<usize>,
    /// First stored column of each row.
    first: Vec<usize>,
    /// Start of each row's slice in `env`; the row ends at its diagonal.
    start: Vec<usize>,
    env: Vec<f64>,
}

impl SkylineCholesky {
    /// Factorises a symmetric positive-definite matrix after RCM reordering.
    ///
    /// A non-positive pivot yields `IndefiniteMass` with the original index.
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.n;
        let perm = reverse_cuthill_mckee(a);
        let mut inv_perm = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv_perm[old] = new;
        }
        let mut first: Vec<usize> = (0..n).collect();
        for (new_i, &old_i) in perm.iter().enumerate() {
            for &old_j in a.row(old_i).0 {
                let new_j = inv_perm[old_j];
                if new_j < first[new_i] {
                    first[new_i] = new_j;
                }
            }
        }
        let mut start = Vec::with_capacity(n + 1);
        let mut total = 0;
        for i in 0..n {
            start.push(total);
            total += i - first[i] + 1;
        }
        start.push(total);
        let mut env = vec![0.0; total];
        for (new_i, &old_i) in perm.iter().enumerate() {
            let (c, v) = a.row(old_i);
            for (&old_j, &x) in c.iter().zip(v) {
                let new_j = inv_perm[old_j];
                if new_j <= new_i {
                    env[start[new_i] + new_j - first[new_i]] = x;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            let si = start[i];
            for j in fi..i {
                let fj = first[j];
                let sj = start[j];
                let k0 = fi.max(fj);
                let dot = dot(&env[si + k0 - fi..si + j - fi], &env[sj + k0 - fj..sj + j - fj]);
                let ljj = env[sj + j - fj];
                env[si + j - fi] = (env[si + j - fi] - dot) / ljj;
            }
            let row = &env[si..si + i - fi];
            let d = env[si + i - fi] - dot(row, row);
            if !(d > 0.0) {
                return Err(Error::IndefiniteMass(perm[i]));
            }
            env[si + i - fi] = d.sqrt();
        }
        Ok(Self { n, perm, inv_perm, first, start, env })
    }

    /// Number of stored factor entries.
    pub fn envelope_size(&self) -> usize {
        self.env.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y: Vec<f64> = self.perm.iter().map(|&o| b[o]).collect();
        for i in 0..n {
            let fi = self.first[i];
            let si = self.start[i];
            let s = dot(&self.env[si..si + i - fi], &y[fi..i]);
            y[i] = (y[i] - s) / self.env[si + i - fi];
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let si = self.start[i];
            y[i] /= self.env[si + i - fi];
            let xi = y[i];
            for (yk, &l) in y[fi..i].iter_mut().zip(&self.env[si..si + i - fi]) {
                *yk -= l * xi;
            }
        }
        (0..n).map(|o| y[self.inv_perm[o]]).collect()
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    // four accumulators let the compiler vectorise without reordering across calls
    let mut acc = [0.0f64; 4];
    let chunks = a.len() / 4;
    for c in 0..chunks {
        for l in 0..4 {
            acc[l] += a[4 * c + l] * b[4 * c + l];
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for k in 4 * chunks..a.len() {
        s += a[k] * b[k];
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_1d(n: usize, shift: f64) -> CsrMatrix {
        let rows: Vec<Vec<usize>> = (0..n)
            .map(|i| (i.saturating_sub(1)..=(i + 1).min(n - 1)).collect())
            .collect();
        let mut a = CsrMatrix::from_pattern(&rows);
        for i in 0..n {
            a.add_to(i, i, 2.0 + shift);
            if i > 0 {
                a.add_to(i, i - 1, -1.0);
                a.add_to(i - 1, i, -1.0);
            }
        }
        a
    }

    #[test]
    fn solves_tridiagonal() {
        let a = laplacian_1d(50, 0.1);
        let x: Vec<f64> = (0..50).map(|i| (i as f64 * 0.3).sin()).collect();
        let b = a.matvec(&x);
        let f = SkylineCholesky::factor(&a).unwrap();
        let got = f.solve(&b);
        let err = got.iter().zip(&x).map(|(g, w)| (g - w).abs()).fold(0.0, f64::max);
        assert!(err < 1e-12, "{err}");
    }

    #[test]
    fn rcm_is_a_permutation() {
        let a = laplacian_1d(17, 0.0);
        let mut p = reverse_cuthill_mckee(&a);
        p.sort_unstable();
        assert_eq!(p, (0..17).collect::<Vec<_>>());
    }

    #[test]
    fn rejects_indefinite() {
        let a = laplacian_1d(10, -1.0);
        assert!(matches!(SkylineCholesky::factor(&a), Err(Error::IndefiniteMass(_))));
    }
}
