//! Gauss–Legendre rules, the tensor rule on the unit disc and deterministic
//! summation.
//!
//! Every integral in the crate is evaluated as "map the nodes in parallel,
//! collect in node order, sum sequentially with compensation", so results do
//! not depend on the size of the rayon pool.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Sums a slice in index order with compensation.
pub fn stable_sum(values: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for &v in values {
        acc.add(v);
    }
    acc.value()
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes in increasing order.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Gauss–Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| (mid + half * xi, half * wi))
        .collect()
}

/// Weighted point set `(point, weight)` for integration over a planar region.
#[derive(Debug, Clone)]
pub struct PlanarRule {
    pub points: Vec<(Complex64, f64)>,
}

impl PlanarRule {
    /// Integrates `f` over the rule's region.
    pub fn integrate<F>(&self, f: F) -> f64
    where
        F: Fn(Complex64) -> f64 + Sync,
    {
        let terms: Vec<f64> = self
            .points
            .par_iter()
            .map(|&(z, w)| w * f(z))
            .collect();
        stable_sum(&terms)
    }

    /// Evaluates `f` at every node (in node order); pairs with `weights()`.
    pub fn sample<F>(&self, f: F) -> Vec<f64>
    where
        F: Fn(Complex64) -> f64 + Sync,
    {
        self.points.par_iter().map(|&(z, _)| f(z)).collect()
    }

    pub fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        self.points.iter().map(|&(_, w)| w)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Tensor rule on the unit disc: `n_radial` Gauss–Legendre nodes in `r`
/// times `n_angular` equispaced (trapezoid) nodes in the angle.
pub fn disc_rule(n_radial: usize, n_angular: usize) -> PlanarRule {
    let radial = gauss_legendre_on(n_radial, 0.0, 1.0);
    let dtheta = 2.0 * PI / n_angular as f64;
    let mut points = Vec::with_capacity(n_radial * n_angular);
    for &(r, wr) in &radial {
        for j in 0..n_angular {
            let theta = (j as f64 + 0.5) * dtheta;
            points.push((Complex64::from_polar(r, theta), wr * r * dtheta));
        }
    }
    PlanarRule { points }
}

/// Default disc rule used by the bounds module: 64 radial x 256 angular.
pub fn default_disc_rule() -> PlanarRule {
    disc_rule(64, 256)
}
