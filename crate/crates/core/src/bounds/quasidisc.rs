//! Inverse Hölder constants and `M(K)` for `K`-quasidiscs, in log space.
//!
//! Exponents are parameterised by `delta = beta - 1`. At `K = 1` the feasible
//! interval is `0 < delta < 9e-14`, which a direct `beta` would resolve to a
//! handful of doubles only.

use serde::{Deserialize, Serialize};
use std::f64::consts::{LN_10, PI};

use crate::error::{Error, Result};

/// `pi^2 (2 + pi^2)^2 / (2 ln 3)`, the exponent multiplying `K` in the
/// doubling constant.
pub fn exp_exponent() -> f64 {
    let p2 = PI * PI;
    p2 * (2.0 + p2).powi(2) / (2.0 * 3f64.ln())
}

/// `ln nu` with `nu = 10^{8 beta} (2 beta - 2)/(2 beta - 1) (24 pi^2 K_eff)^{2 beta}`.
pub fn ln_nu(delta: f64, k_eff: f64) -> f64 {
    let beta = 1.0 + delta;
    8.0 * beta * LN_10 + (2.0 * delta).ln() - (2.0 * delta).ln_1p()
        + 2.0 * beta * (24.0 * PI * PI * k_eff).ln()
}

/// Unique `delta > 0` with `nu(1 + delta) = 1`, by bisection on `ln delta`.
pub fn nu_root(k_eff: f64) -> f64 {
    let (mut lo, mut hi) = (-700.0f64, 0.0f64);
    debug_assert!(ln_nu(lo.exp(), k_eff) < 0.0 && ln_nu(hi.exp(), k_eff) > 0.0);
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ln_nu(mid.exp(), k_eff) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo.exp()
}

fn ln_one_minus_nu(delta: f64, k_eff: f64) -> f64 {
    // 1 - nu without cancellation
    (-(ln_nu(delta, k_eff).exp_m1())).ln()
}

fn check_k(k: f64) -> Result<()> {
    if !(k >= 1.0) || !k.is_finite() {
        return Err(Error::InvalidParams(format!("quasiconformality K must be finite and >= 1, got {k}")));
    }
    Ok(())
}

/// `log10` of the inverse Hölder constant
/// `C_kappa^2 K_eff pi^{1/kappa - 1} / 4 * exp(K_eff pi^2 (2 + pi^2)^2 / (2 ln 3))`,
/// with `K_eff = K^2` when `reflected`.
pub fn inverse_holder_constant(kappa: f64, k: f64, reflected: bool) -> Result<f64> {
    check_k(k)?;
    let k_eff = if reflected { k * k } else { k };
    let limit = if k_eff > 1.0 { k_eff / (k_eff - 1.0) } else { f64::INFINITY };
    let delta = kappa - 1.0;
    if !(delta > 0.0) || kappa >= limit {
        return Err(Error::KappaOutOfRange { kappa, limit });
    }
    let lnu = ln_nu(delta, k_eff);
    if lnu >= 0.0 {
        return Err(Error::NuExceedsOne { kappa, nu: lnu.min(700.0).exp() });
    }
    let ln_c = 6.0 * LN_10 - ((2.0 * delta).ln_1p() + ln_one_minus_nu(delta, k_eff)) / (2.0 * kappa);
    let ln = 2.0 * ln_c + k_eff.ln() - delta / kappa * PI.ln() - 4f64.ln() + k_eff * exp_exponent();
    Ok(ln / LN_10)
}

/// Natural log of `((2b-1)/(b-1))^{-(2b-1)/b} C_b^{-2}` at `b = 1 + delta`,
/// the quantity optimised in `M(K)`.
pub fn quasidisc_objective(delta: f64, k_eff: f64) -> f64 {
    let beta = 1.0 + delta;
    let q = 1.0 + 2.0 * delta;
    -(q / beta) * (q / delta).ln() - 12.0 * LN_10
        + ((2.0 * delta).ln_1p() + ln_one_minus_nu(delta, k_eff)) / beta
}

/// `M(K)` with its optimising and limiting exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasidiscConstant {
    pub k: f64,
    pub log10_m: f64,
    /// `beta - 1` at the root of `nu = 1` (with `K^2`).
    pub delta_tilde: f64,
    /// `beta* - 1 = min(1/(K - 1), delta_tilde)`.
    pub delta_star: f64,
    /// `beta - 1` at the optimum.
    pub delta_opt: f64,
    /// `ln nu` at `delta_tilde`; zero up to rounding.
    pub ln_nu_at_root: f64,
}

impl QuasidiscConstant {
    pub fn beta_tilde(&self) -> f64 {
        1.0 + self.delta_tilde
    }

    pub fn beta_star(&self) -> f64 {
        1.0 + self.delta_star
    }

    pub fn beta_opt(&self) -> f64 {
        1.0 + self.delta_opt
    }

    pub fn log10_m_star(&self) -> f64 {
        self.log10_m - PI.log10()
    }
}

fn log10_prefactor(k: f64) -> f64 {
    ((PI / (k * k)).ln() - k * k * exp_exponent()) / LN_10
}

fn feasible_t_range(k: f64) -> Result<(f64, f64, f64)> {
    let k_eff = k * k;
    let delta_tilde = nu_root(k_eff);
    let delta_star = if k > 1.0 { (1.0 / (k - 1.0)).min(delta_tilde) } else { delta_tilde };
    if !(delta_star > 0.0) {
        return Err(Error::NoFeasibleBeta(k));
    }
    Ok((delta_tilde, delta_star, delta_star.ln()))
}

/// `log10 M(K)`, maximising the bracket over `beta in (1, beta*)` by
/// golden-section search in `t = ln(beta - 1)`.
///
/// The objective is concave in `t` and tends to `-inf` at both ends, so the
/// best admissible lower bound is its maximum.
pub fn quasidisc_mk(k: f64) -> Result<QuasidiscConstant> {
    check_k(k)?;
    let k_eff = k * k;
    let (delta_tilde, delta_star, t_hi) = feasible_t_range(k)?;
    let g = |t: f64| quasidisc_objective(t.exp(), k_eff);
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut b) = (t_hi - 40.0, t_hi);
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..300 {
        if b - a <= 1e-13 * (1.0 + a.abs()) {
            break;
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    let (t_opt, g_opt) = if gc >= gd { (c, gc) } else { (d, gd) };
    Ok(QuasidiscConstant {
        k,
        log10_m: log10_prefactor(k) + g_opt / LN_10,
        delta_tilde,
        delta_star,
        delta_opt: t_opt.exp(),
        ln_nu_at_root: ln_nu(delta_tilde, k_eff),
    })
}

/// `log10 M(K)` by a uniform scan of `n` points of `t` over the same window
/// as [`quasidisc_mk`]; an independent check of the search.
pub fn quasidisc_mk_grid(k: f64, n: usize) -> Result<f64> {
    check_k(k)?;
    let k_eff = k * k;
    let (_, _, t_hi) = feasible_t_range(k)?;
    let t_lo = t_hi - 40.0;
    let best = (1..n)
        .map(|i| quasidisc_objective((t_lo + (t_hi - t_lo) * i as f64 / n as f64).exp(), k_eff))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(log10_prefactor(k) + best / LN_10)
}
