//! Quadrature checks of the energy isometry `int_Omega <A grad(f o phi), grad(f o phi)>
//! = int_D |grad f|^2` and of the weighted Poincaré–Sobolev inequality.
//!
//! Integrals over `Omega` use the domain's graded polar rule, which follows
//! the exact curved boundary and absorbs the cusp's Jacobian singularity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::poincare_constant_upper;
use crate::dilatation::matrix_from_mu;
use crate::error::{Error, Result};
use crate::qcmaps::AnalyticQCMap;
use crate::quadrature::disc_rule;
use crate::special::{bessel_j1, bessel_j1_prime, J1P_ZERO};

pub const DEFAULT_CHECK_QUAD: usize = 64;

/// Smooth test functions on the closed unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFunction {
    Constant,
    /// `f = u`.
    Linear,
    /// `f = u^2 - 2 u v + 3 v^2 + v`.
    Polynomial,
    /// `f = e^u cos v`.
    ExpCos,
    /// First Neumann mode of the disc, `J_1(j' r) cos(theta)`.
    BesselMode,
}

impl TestFunction {
    pub const ALL: [TestFunction; 5] = [
        TestFunction::Constant,
        TestFunction::Linear,
        TestFunction::Polynomial,
        TestFunction::ExpCos,
        TestFunction::BesselMode,
    ];

    pub fn from_id(id: usize) -> Result<Self> {
        Self::ALL
            .get(id)
            .copied()
            .ok_or_else(|| Error::InvalidParams(format!("unknown test function id {id}")))
    }

    pub fn id(&self) -> usize {
        Self::ALL.iter().position(|t| t == self).unwrap()
    }

    pub fn value(&self, w: Complex64) -> f64 {
        let (u, v) = (w.re, w.im);
        match self {
            TestFunction::Constant => 1.0,
            TestFunction::Linear => u,
            TestFunction::Polynomial => u * u - 2.0 * u * v + 3.0 * v * v + v,
            TestFunction::ExpCos => u.exp() * v.cos(),
            TestFunction::BesselMode => {
                let r = w.norm();
                if r < 1e-14 {
                    0.0
                } else {
                    bessel_j1(J1P_ZERO * r) * u / r
                }
            }
        }
    }

    /// `(f_u, f_v)`.
    pub fn gradient(&self, w: Complex64) -> [f64; 2] {
        let (u, v) = (w.re, w.im);
        match self {
            TestFunction::Constant => [0.0, 0.0],
            TestFunction::Linear => [1.0, 0.0],
            TestFunction::Polynomial => [2.0 * u - 2.0 * v, -2.0 * u + 6.0 * v + 1.0],
            TestFunction::ExpCos => [u.exp() * v.cos(), -u.exp() * v.sin()],
            TestFunction::BesselMode => {
                let k = J1P_ZERO;
                let r = w.norm();
                if r < 1e-12 {
                    return [0.5 * k, 0.0];
                }
                let g = bessel_j1(k * r);
                let gp = k * bessel_j1_prime(k * r);
                let (c, s) = (u / r, v / r);
                [gp * c * c + g * s * s / r, (gp - g / r) * c * s]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub lhs: f64,
    pub rhs: f64,
    pub rel_err: f64,
}

/// `<A grad(f o phi), grad(f o phi)>` at `z`, with `A` built from the map's
/// dilatation and the chain rule `grad(f o phi) = D phi^T (grad f)(phi)`.
fn pulled_back_energy_density(map: &AnalyticQCMap, f: TestFunction, z: Complex64) -> f64 {
    let a = matrix_from_mu(map.mu(z)).expect("example maps have |mu| <= 1/3");
    let d = map.differential(z);
    let g = f.gradient(map.phi(z));
    let grad = [d[0][0] * g[0] + d[1][0] * g[1], d[0][1] * g[0] + d[1][1] * g[1]];
    a.quadratic_form(grad)
}

/// Compares the `A`-energy of `f o phi` on `Omega` with the Dirichlet energy
/// of `f` on the disc, both by tensor quadrature of order `n_quad`.
pub fn isometry_check(map: &AnalyticQCMap, test_fn_id: usize, n_quad: usize) -> Result<IsometryReport> {
    let f = TestFunction::from_id(test_fn_id)?;
    if n_quad < 4 {
        return Err(Error::InvalidParams(format!("n_quad must be >= 4, got {n_quad}")));
    }
    let lhs = map
        .domain()
        .polar_rule(n_quad, 4 * n_quad)
        .integrate(|z| pulled_back_energy_density(map, f, z));
    let rhs = disc_rule(n_quad, 4 * n_quad).integrate(|w| {
        let g = f.gradient(w);
        g[0] * g[0] + g[1] * g[1]
    });
    let rel_err = if rhs == 0.0 { lhs.abs() } else { (lhs - rhs).abs() / rhs };
    Ok(IsometryReport { lhs, rhs, rel_err })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareReport {
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// Minimising constant `c`.
    pub c_opt: f64,
}

/// Golden-section minimum of a convex function on `[a, b]`.
fn golden_min(mut a: f64, mut b: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Checks `inf_c ||f - c | L^r(Omega, h)|| <= B_{r,2}(D) ||f | L^{1,2}_A(Omega)||`
/// for `f = g o phi`, `g` from the test catalog and `h = J(z, phi)`.
pub fn weighted_poincare_check(
    map: &AnalyticQCMap,
    r: f64,
    test_fn_id: usize,
    n_quad: usize,
) -> Result<PoincareReport> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::InvalidParams(format!("exponent r must be >= 1, got {r}")));
    }
    let g = TestFunction::from_id(test_fn_id)?;
    let rule = map.domain().polar_rule(n_quad, 4 * n_quad);
    let values = rule.sample(|z| g.value(map.phi(z)));
    let weights: Vec<f64> = rule
        .points
        .iter()
        .map(|&(z, w)| w * map.jacobian(z))
        .collect();
    let objective = |c: f64| {
        let terms: Vec<f64> = values.iter().zip(&weights).map(|(v, w)| w * (v - c).abs().powf(r)).collect();
        crate::quadrature::stable_sum(&terms)
    };
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let (c_opt, best) = if hi - lo <= 0.0 { (lo, 0.0) } else { golden_min(lo, hi, objective) };
    let lhs = best.max(0.0).powf(1.0 / r);
    let energy = rule.integrate(|z| pulled_back_energy_density(map, g, z));
    let rhs = poincare_constant_upper(r)? * energy.max(0.0).sqrt();
    Ok(PoincareReport { lhs, rhs, margin: rhs - lhs, c_opt })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gradients_match_differences() {
        let h = 1e-6;
        for f in TestFunction::ALL {
            for w in [Complex64::new(0.3, -0.2), Complex64::new(-0.5, 0.6), Complex64::new(0.01, 0.02)] {
                let g = f.gradient(w);
                let fu = (f.value(w + h) - f.value(w - h)) / (2.0 * h);
                let fv = (f.value(w + Complex64::new(0.0, h)) - f.value(w - Complex64::new(0.0, h))) / (2.0 * h);
                assert!((g[0] - fu).abs() < 1e-7 && (g[1] - fv).abs() < 1e-7, "{f:?} at {w}");
            }
        }
    }

    #[test]
    fn golden_finds_median_for_r1() {
        let (c, _) = golden_min(0.0, 10.0, |c| (c - 1.0).abs() + (c - 2.0).abs() + (c - 7.0).abs());
        assert!((c - 2.0).abs() < 1e-9);
    }
}
