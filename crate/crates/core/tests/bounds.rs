use proptest::prelude::*;
use qcs::bounds::*;
use qcs::qcmaps::{example_maps, make_cusp_map, make_ellipse_map, make_rose_petal_map, DomainSpec};
use qcs::special::{DISC_MU1, J1P_ZERO};
use qcs::Error;
use std::f64::consts::{LN_10, PI};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// `int_D |1 + w|^{2n} dA = pi sum_k C(n,k)^2 / (k + 1)`, from expanding
/// `(1 + w)^n (1 + conj w)^n` and integrating monomials over the disc.
fn disc_moment(n: u32) -> f64 {
    let mut binom = 1.0;
    let mut sum = 0.0;
    for k in 0..=n {
        sum += binom * binom / (k as f64 + 1.0);
        binom = binom * (n - k) as f64 / (k as f64 + 1.0);
    }
    PI * sum
}

#[test]
fn poincare_constant_values() {
    assert!((poincare_constant_upper(2.0).unwrap() - 4.0).abs() < 1e-15);
    assert!(matches!(poincare_constant_upper(0.5), Err(Error::InvalidParams(_))));
    assert!((disc_poincare_constant_exact() - 0.54313).abs() < 1e-5);
    // dips below 4 just past r = 2, then grows without bound
    let values: Vec<f64> = (0..=980).map(|k| poincare_constant_upper(2.0 + 0.1 * k as f64).unwrap()).collect();
    let argmin = (0..values.len()).min_by(|&i, &j| values[i].total_cmp(&values[j])).unwrap();
    assert!(argmin > 0 && argmin < values.len() - 1);
    assert!(values[..=argmin].windows(2).all(|w| w[1] < w[0]));
    assert!(values[argmin..].windows(2).all(|w| w[1] > w[0]));
    assert!(values[980] > values[0]);
    // growth like sqrt(r + 2) / sqrt(pi / 2)
    let r = 1e6;
    let ratio = poincare_constant_upper(r).unwrap() / ((r + 2.0) / (PI / 2.0)).sqrt();
    assert!((ratio - 1.0).abs() < 1e-4, "{ratio}");
}

#[test]
fn constant_jacobian_beta_norms() {
    for beta in [1.5, 2.0, 3.0, 7.5] {
        let e = beta_norm(&make_ellipse_map(2.0, 1.0).unwrap(), beta, 64).unwrap();
        assert!(rel(e.norm_j_beta, 3.0 * PI.powf(1.0 / beta)) < 1e-10, "ellipse beta = {beta}");
        let p = beta_norm(&make_rose_petal_map(), beta, 64).unwrap();
        assert!(rel(p.norm_j_beta, PI.powf(1.0 / beta)) < 1e-10, "petal beta = {beta}");
    }
}

#[test]
fn cusp_beta_two_integral() {
    // int 4 |z(w)|^3 = 4 int (|1 + w| / 2)^12 = 1716 pi / 7168
    let want = 4.0 / 4096.0 * disc_moment(6);
    assert!(rel(want, 1716.0 * PI / 7168.0) < 1e-15);
    let r = beta_norm(&make_cusp_map(), 2.0, 64).unwrap();
    assert!(rel(r.integral, want) < 1e-12, "{} vs {want}", r.integral);
    assert!(r.quadrature_error_estimate <= 1e-6);
    let coarse = beta_norm(&make_cusp_map(), 2.0, 32).unwrap();
    assert!(rel(coarse.integral, r.integral) <= 1e-6);
}

#[test]
fn jacobian_integral_is_area() {
    for map in example_maps() {
        let r = beta_norm(&map, 1.0, 64).unwrap();
        assert!(rel(r.integral, map.domain().area) < 1e-10, "{map}");
    }
    assert!(rel(2.0 / 64.0 * disc_moment(3), 35.0 * PI / 128.0) < 1e-15);
}

#[test]
fn beta_norm_rejects_bad_input() {
    let m = make_rose_petal_map();
    assert!(beta_norm(&m, 0.5, 64).is_err());
    assert!(beta_norm(&m, 2.0, 8).is_err());
}

#[test]
fn power_mean_monotonicity() {
    let betas = [1.2, 1.5, 2.0, 3.0, 5.0, 8.0];
    for map in example_maps() {
        let norms: Vec<f64> = betas.iter().map(|&b| beta_norm(&map, b, 64).unwrap().norm_j_beta).collect();
        for i in 0..betas.len() {
            for j in i + 1..betas.len() {
                let (b, bp) = (betas[i], betas[j]);
                assert!(norms[i] <= norms[j] * PI.powf(1.0 / b - 1.0 / bp) * (1.0 + 1e-12), "{map}: {b} vs {bp}");
            }
        }
    }
}

#[test]
fn thm51_exact_values() {
    let three_halves = 3f64.powf(1.5);
    let p = lower_bound_thm51(&make_rose_petal_map(), 2.0, 64).unwrap();
    assert!(rel(p.value, 1.0 / (4.0 * three_halves)) < 1e-12, "{}", p.value);
    let e = lower_bound_thm51(&make_ellipse_map(2.0, 1.0).unwrap(), 2.0, 64).unwrap();
    assert!(rel(e.value, 1.0 / (12.0 * three_halves)) < 1e-12, "{}", e.value);
    assert_eq!(p.kind, BoundKind::Thm51Beta);
    assert!(lower_bound_thm51(&make_rose_petal_map(), 1.0, 64).is_err());
}

#[test]
fn thm51_factor_is_poincare_constant_squared() {
    for beta in [1.1, 2.0, 4.0, 10.0] {
        let r = 2.0 * beta / (beta - 1.0);
        let b = poincare_constant_upper(r).unwrap();
        assert!(rel(thm51_factor(beta), b * b) < 1e-12, "beta = {beta}");
    }
}

#[test]
fn thm51_degenerates_near_one() {
    let m = make_rose_petal_map();
    let values: Vec<f64> = [1e-1, 1e-2, 1e-3, 1e-4, 1e-6]
        .iter()
        .map(|d| lower_bound_thm51(&m, 1.0 + d, 32).unwrap().value)
        .collect();
    assert!(values.windows(2).all(|w| w[1] < w[0]), "{values:?}");
    assert!(values[4] < 1e-6);
}

#[test]
fn thm51_large_beta_against_thm47() {
    // constant Jacobian: the ratio settles to a fixed factor as beta grows
    let m = make_ellipse_map(2.0, 1.0).unwrap();
    let t47 = lower_bound_thm47(&m).unwrap().value;
    let ratios: Vec<f64> = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&b| lower_bound_thm51(&m, b, 32).unwrap().value / t47)
        .collect();
    assert!(ratios.iter().all(|r| r.is_finite() && *r > 0.0 && *r < 1.0));
    assert!((ratios[2] - ratios[1]).abs() < (ratios[1] - ratios[0]).abs());
}

#[test]
fn thm47_values() {
    let e = lower_bound_thm47(&make_ellipse_map(2.0, 1.0).unwrap()).unwrap();
    assert!(rel(e.value, J1P_ZERO * J1P_ZERO / 3.0) < 1e-15);
    let p = lower_bound_thm47(&make_rose_petal_map()).unwrap();
    assert!(rel(p.value, DISC_MU1) < 1e-15);
    let c = lower_bound_thm47(&make_cusp_map()).unwrap();
    assert!(c.value >= DISC_MU1 / 2.0 * (1.0 - 1e-15));
    assert!((J1P_ZERO - 1.84118).abs() < 5e-6);
}

#[test]
fn payne_weinberger_values() {
    let e = make_ellipse_map(2.0, 1.0).unwrap();
    let (_, classical) = payne_weinberger(e.domain(), 3.0).unwrap();
    assert!(rel(classical.value, PI * PI / 108.0) < 1e-14);
    assert!(classical.applicable);
    let (pure, _) = payne_weinberger(&DomainSpec::unit_disc(), 1.0).unwrap();
    assert!(rel(pure.value, PI * PI / 4.0) < 1e-15 && pure.applicable);
    assert!(pure.value < DISC_MU1);
    let p = make_rose_petal_map();
    let (_, classical) = payne_weinberger(p.domain(), 2.0).unwrap();
    assert!(rel(classical.value, (PI / 4.0).powi(2)) < 1e-14);
    let c = make_cusp_map();
    let (pure, classical) = payne_weinberger(c.domain(), 2.0).unwrap();
    assert!(!pure.applicable && !classical.applicable);
    assert!(payne_weinberger(c.domain(), 0.5).is_err());
}

#[test]
fn paper_comparisons() {
    let (a, b) = (2.0f64, 1.0f64);
    let classical = PI * PI / (4.0 * (a + b).powi(2)) * (a - b) / (a + b);
    assert!(classical < DISC_MU1 / (a * a - b * b));
    assert!((PI / 4.0).powi(2) < DISC_MU1);
    assert!(PI / 4.0 < J1P_ZERO);
}

#[test]
fn all_bounds_order_and_best() {
    for map in example_maps() {
        let bounds = all_bounds(&map, 2.0, 64).unwrap();
        let kinds: Vec<BoundKind> = bounds.iter().map(|b| b.kind).collect();
        assert_eq!(kinds, BoundKind::ALL.to_vec());
        assert!(bounds.iter().all(|b| b.log10_value.is_finite()));
        let best = best_bound(&bounds).unwrap();
        assert_eq!(bounds[best].kind, BoundKind::Thm47Inf, "{map}");
        assert!(bounds[0].quadrature_error.is_some());
        assert!(bounds[0].param_json().contains("quadrature_error"));
    }
}

#[test]
fn spectral_bound_serde_roundtrip() {
    let b = lower_bound_thm51(&make_cusp_map(), 2.0, 32).unwrap();
    let back: SpectralBound = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
    assert_eq!(back, b);
}

#[test]
fn exponent_oracle() {
    // evaluated term by term so it does not share code with the library
    let p2 = PI * PI;
    let e = p2 * (2.0 + p2) * (2.0 + p2) / 2.0 / 3f64.ln();
    assert!((exp_exponent() - e).abs() < 1e-10);
    assert!((e - 632.845_631_556).abs() < 1e-8);
    assert!((e / LN_10 - 274.84).abs() < 0.01);
}

#[test]
fn holder_constant_near_one() {
    let kappa: f64 = 1.0 + 1e-15;
    let nu = 10f64.powf(8.0 * kappa) * (2.0 * kappa - 2.0) / (2.0 * kappa - 1.0) * (24.0 * PI * PI).powf(2.0 * kappa);
    assert!(nu > 0.0 && nu < 0.02);
    // log10 of C^2 pi^{1/kappa - 1} / 4 e^E with C = 1e6 / ((2 kappa - 1)(1 - nu))^{1/(2 kappa)}
    let want = 12.0 - ((2.0 * kappa - 1.0) * (1.0 - nu)).log10() / kappa + (1.0 / kappa - 1.0) * PI.log10()
        - 4f64.log10()
        + exp_exponent() / LN_10;
    let got = inverse_holder_constant(kappa, 1.0, false).unwrap();
    assert!((got - want).abs() < 1e-9, "{got} vs {want}");
}

#[test]
fn holder_constant_errors() {
    assert!(matches!(inverse_holder_constant(2.5, 2.0, false), Err(Error::KappaOutOfRange { .. })));
    assert!(matches!(inverse_holder_constant(1.5, 2.0, true), Err(Error::KappaOutOfRange { .. })));
    assert!(matches!(inverse_holder_constant(1.0, 1.0, false), Err(Error::KappaOutOfRange { .. })));
    assert!(matches!(inverse_holder_constant(1.1, 1.0, false), Err(Error::NuExceedsOne { .. })));
    assert!(inverse_holder_constant(1.0 + 1e-15, 1.5, true).is_ok());
}

#[test]
fn nu_increasing_and_vanishing() {
    for k_eff in [1.0, 2.25, 4.0, 16.0] {
        let root = nu_root(k_eff);
        let mut prev = f64::NEG_INFINITY;
        for i in 0..200 {
            let delta = root * (1e-30f64).powf(1.0 - i as f64 / 199.0);
            let v = ln_nu(delta, k_eff);
            assert!(v > prev, "K_eff = {k_eff}, delta = {delta}");
            prev = v;
        }
        assert!(ln_nu(1e-300, k_eff) < -600.0);
        assert!(ln_nu(root, k_eff).abs() < 1e-9);
        // the root sits just past the last delta with nu < 1
        assert!(ln_nu(root * (1.0 - 1e-9), k_eff) < 0.0);
    }
}

#[test]
fn nu_root_scale_at_k_one() {
    // nu ~ 1e8 * 2 delta * (24 pi^2)^2 near delta = 0
    let approx = 0.5e-8 / (24.0 * PI * PI).powi(2);
    let root = nu_root(1.0);
    assert!(root < 1e-12 && (root / approx - 1.0).abs() < 1e-6, "{root} vs {approx}");
}

#[test]
fn quasidisc_constant_pipeline() {
    let ks = [1.0, 1.5, 2.0, 4.0];
    let mut prev = f64::INFINITY;
    for k in ks {
        let c = quasidisc_mk(k).unwrap();
        assert!(c.log10_m.is_finite());
        assert!(c.log10_m < prev, "not decreasing at K = {k}");
        prev = c.log10_m;
        assert!(ln_nu(c.delta_tilde, k * k).abs() < 1e-9);
        assert!(c.delta_opt > 0.0 && c.delta_opt < c.delta_star);
        if k > 1.0 {
            assert!(c.beta_star() <= k / (k - 1.0));
        }
        assert_eq!(c.delta_star, c.delta_tilde.min(if k > 1.0 { 1.0 / (k - 1.0) } else { f64::INFINITY }));
        let grid = quasidisc_mk_grid(k, 1_000_000).unwrap();
        assert!((c.log10_m - grid).abs() <= 1e-9 * c.log10_m.abs(), "K = {k}: {} vs {grid}", c.log10_m);
        assert!(c.log10_m >= grid - 1e-12 * grid.abs());
        // reproducible bit for bit
        assert_eq!(quasidisc_mk(k).unwrap(), c);
    }
    assert!(quasidisc_mk(0.9).is_err());
}

#[test]
fn quasidisc_bound_in_log_space() {
    let e = make_ellipse_map(2.0, 1.0).unwrap();
    let b = lower_bound_quasidisc(e.domain(), 3.0, true).unwrap();
    let c = quasidisc_mk(3.0).unwrap();
    assert!((b.log10_value - (c.log10_m - (3.0 * PI).log10())).abs() < 1e-12);
    assert_eq!(b.value, 0.0);
    assert!(b.applicable);
    // M* / R*^2 is the same number written through the equal-area radius
    let r_star = e.domain().equal_area_radius();
    assert!((c.log10_m_star() - 2.0 * r_star.log10() - b.log10_value).abs() < 1e-9);
    assert!(!lower_bound_quasidisc(make_cusp_map().domain(), 2.0, false).unwrap().applicable);
}

#[test]
fn embedding_constant_consistency() {
    // s = 2: r = 2 beta / (beta - 1) and the factor is B_r (int |J|^beta)^{1/(2 beta)}
    let m = make_rose_petal_map();
    let rep = beta_norm(&m, 2.0, 64).unwrap();
    let c = embedding_constant_upper(2.0, 2.0, rep.integral).unwrap();
    assert!(rel(c, poincare_constant_upper(4.0).unwrap() * PI.powf(0.25)) < 1e-12);
    assert!(embedding_constant_upper(0.5, 2.0, 1.0).is_err());
}

proptest! {
    #[test]
    fn log_value_matches_value(beta in 1.05f64..20.0) {
        let b = lower_bound_thm51(&make_rose_petal_map(), beta, 16).unwrap();
        prop_assert!((b.value.log10() - b.log10_value).abs() < 1e-12);
        prop_assert!(b.value > 0.0 && b.value < DISC_MU1);
    }

    #[test]
    fn ellipse_bound_scales_inverse_area(a in 1.0f64..4.0, ratio in 0.0f64..0.99) {
        let b = a * ratio;
        let e = lower_bound_thm47(&make_ellipse_map(a, b).unwrap()).unwrap();
        prop_assert!((e.value * (a * a - b * b) - DISC_MU1).abs() < 1e-12 * DISC_MU1);
    }
}
