use num_complex::Complex64;
use proptest::prelude::*;
use qcs::dilatation::*;
use qcs::qcmaps::make_rose_petal_map;
use qcs::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Example 2's coefficient matrix written directly in terms of `z`.
fn petal_matrix(z: Complex64) -> SymMatrix2 {
    let zb = z.conj();
    let d = 8.0 * zb.norm_sqr();
    SymMatrix2::new((3.0 * zb + z).norm_sqr() / d, 0.75 * (z / zb).im, (3.0 * zb - z).norm_sqr() / d)
}

#[test]
fn ellipse_matrix_gives_minus_half() {
    let mu = mu_from_entries(&SymMatrix2::new(3.0, 0.0, 1.0 / 3.0)).unwrap();
    assert!((mu - c(-0.5, 0.0)).norm() < 1e-15);
}

#[test]
fn identity_is_conformal() {
    assert_eq!(mu_from_entries(&SymMatrix2::IDENTITY).unwrap(), c(0.0, 0.0));
    let m = matrix_from_mu(c(0.0, 0.0)).unwrap();
    assert_eq!((m.a11, m.a12, m.a22), (1.0, 0.0, 1.0));
}

#[test]
fn petal_matrix_at_one_plus_i() {
    let z = c(1.0, 1.0);
    let a = petal_matrix(z);
    assert!((a.a11 - 1.25).abs() < 1e-15 && (a.a12 - 0.75).abs() < 1e-15 && (a.a22 - 1.25).abs() < 1e-15);
    let mu = mu_from_entries(&a).unwrap();
    assert!((mu - c(0.0, -1.0 / 3.0)).norm() < 1e-15);
    let field = MatrixField::from_map(&make_rose_petal_map());
    assert!((mu_from_matrix(&field, z).unwrap() - mu).norm() < 1e-15);
}

#[test]
fn petal_field_matches_closed_form_matrix() {
    let field = MatrixField::from_map(&make_rose_petal_map());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let z = Complex64::from_polar(rng.random_range(0.01..2.0), rng.random_range(-0.7..0.7));
        let (a, b) = (field.eval_checked(z).unwrap(), petal_matrix(z));
        assert!((a.a11 - b.a11).abs() < 1e-13 && (a.a12 - b.a12).abs() < 1e-13 && (a.a22 - b.a22).abs() < 1e-13);
    }
}

#[test]
fn matrix_from_mu_examples() {
    let m = matrix_from_mu(c(-0.5, 0.0)).unwrap();
    assert!((m.a11 - 3.0).abs() < 1e-15 && m.a12.abs() < 1e-15 && (m.a22 - 1.0 / 3.0).abs() < 1e-15);
    let m = matrix_from_mu(c(0.0, -1.0 / 3.0)).unwrap();
    assert!((m.a11 - 1.25).abs() < 1e-15 && (m.a12 - 0.75).abs() < 1e-15 && (m.a22 - 1.25).abs() < 1e-15);
    assert!((m.det() - 1.0).abs() < 1e-15);
}

#[test]
fn ellipticity_values() {
    assert_eq!(ellipticity_from_mu(0.0).unwrap(), 1.0);
    assert!((ellipticity_from_mu(1.0 / 3.0).unwrap() - 2.0).abs() < 1e-15);
    assert!((ellipticity_from_mu(0.5).unwrap() - 3.0).abs() < 1e-15);
    assert!(matches!(ellipticity_from_mu(1.0), Err(Error::DegenerateDilatation(_))));
}

#[test]
fn roundtrip_examples() {
    for mu in [c(0.0, 0.0), c(0.3, 0.4), c(-0.9, 0.0)] {
        assert!(roundtrip_check(mu).unwrap() <= 1e-12);
    }
}

#[test]
fn rejects_degenerate_and_non_elliptic() {
    assert!(matches!(matrix_from_mu(c(1.0 - 1e-10, 0.0)), Err(Error::DegenerateDilatation(_))));
    assert!(matches!(mu_from_entries(&SymMatrix2::new(2.0, 0.0, 1.0)), Err(Error::NonElliptic(_))));
    assert!(matches!(mu_from_entries(&SymMatrix2::new(-1.0, 0.0, -1.0)), Err(Error::NonElliptic(_))));
}

#[test]
fn matrix_field_json() {
    let f = MatrixField::from_json(r#"{"kind":"constant","a11":3.0,"a12":0.0,"a22":0.3333333333333333}"#).unwrap();
    assert!((f.ellipticity_k() - 3.0).abs() < 1e-12);
    let g = MatrixField::from_json(r#"{"kind":"from_map","map":"ellipse:a=2,b=1"}"#).unwrap();
    let a = g.eval(c(0.3, 0.1)).unwrap();
    assert!((a.a11 - 3.0).abs() < 1e-14 && (a.a22 - 1.0 / 3.0).abs() < 1e-14);
    assert_eq!(MatrixField::from_spec(&g.spec()).unwrap(), g);
    assert!(MatrixField::from_json(r#"{"kind":"from_map","map":"nope"}"#).is_err());
}

/// Uniform samples of the closed disc of radius 0.95, 10^3 points.
fn sample_mus(seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..1000)
        .map(|_| Complex64::from_polar(0.95 * rng.random::<f64>().sqrt(), rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)))
        .collect()
}

#[test]
fn sampled_invariants() {
    for mu in sample_mus(11) {
        let a = matrix_from_mu(mu).unwrap();
        assert!((a.det() - 1.0).abs() <= 1e-12, "det at {mu}");
        let m = mu.norm();
        let (lo, hi) = a.eigenvalues();
        assert!(lo >= (1.0 - m) / (1.0 + m) - 1e-10 && hi <= (1.0 + m) / (1.0 - m) + 1e-10);
        assert!(roundtrip_check(mu).unwrap() <= 1e-12, "roundtrip at {mu}");
        let b = matrix_from_mu(mu.conj()).unwrap();
        assert!(a.a11 == b.a11 && a.a22 == b.a22 && a.a12 == -b.a12);
    }
}

proptest! {
    #[test]
    fn roundtrip_property(r in 0.0f64..0.95, t in -3.14159f64..3.14159) {
        let mu = Complex64::from_polar(r, t);
        prop_assert!(roundtrip_check(mu).unwrap() <= 1e-12);
    }

    #[test]
    fn eigenvalues_in_band(r in 0.0f64..0.95, t in -3.14159f64..3.14159) {
        let mu = Complex64::from_polar(r, t);
        let a = matrix_from_mu(mu).unwrap();
        let k = ellipticity_from_mu(r).unwrap();
        let (lo, hi) = a.eigenvalues();
        prop_assert!((lo * hi - 1.0).abs() < 1e-12);
        prop_assert!((hi - k).abs() <= 1e-9 * k);
        prop_assert!(r <= mu_bound_from_ellipticity(k) + 1e-12);
    }
}
