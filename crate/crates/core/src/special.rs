//! Bessel functions of the first kind for small arguments and the first
//! positive zero of `J1'`.
//!
//! The power series is used directly; it is accurate to a few ulps for
//! `|x| <= 8`, which covers every use inside the crate (the Neumann mode of
//! the unit disc only needs `x <= j'_{1,1}`).

/// First positive zero of `J1'`, `j'_{1,1}`.
pub const J1P_ZERO: f64 = 1.841_183_781_340_659_3;

/// `(j'_{1,1})^2`, the first non-trivial Neumann eigenvalue of the unit disc.
pub const DISC_MU1: f64 = J1P_ZERO * J1P_ZERO;

fn series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let q = -half * half;
    let mut term = half.powi(order as i32);
    for k in 1..=order {
        term /= k as f64;
    }
    let mut sum = term;
    for k in 1..60u32 {
        term *= q / (k as f64 * (k + order) as f64);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

pub fn bessel_j0(x: f64) -> f64 {
    series(0, x)
}

pub fn bessel_j1(x: f64) -> f64 {
    series(1, x)
}

/// `J1'(x) = J0(x) - J1(x)/x`, with the limit `1/2` at the origin.
pub fn bessel_j1_prime(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        return 0.5 - 3.0 * x * x / 16.0;
    }
    bessel_j0(x) - bessel_j1(x) / x
}

/// Refines `j'_{1,1}` by Newton's method on `J1'`, starting from `x0`.
///
/// Uses `J1'' = -J1'/x - (1 - 1/x^2) J1` from Bessel's equation.
pub fn refine_j1_prime_zero(x0: f64) -> f64 {
    let mut x = x0;
    for _ in 0..50 {
        let d1 = bessel_j1_prime(x);
        let d2 = -d1 / x - (1.0 - 1.0 / (x * x)) * bessel_j1(x);
        let step = d1 / d2;
        x -= step;
        if step.abs() <= 1e-16 * x {
            break;
        }
    }
    x
}
