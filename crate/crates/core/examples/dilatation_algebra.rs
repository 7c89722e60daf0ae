// Moving between coefficient matrices and complex dilatations.
//
// Run with `cargo run --example dilatation_algebra`.

use num_complex::Complex64;
use qcs::dilatation::{ellipticity_from_mu, matrix_from_mu, mu_from_entries, roundtrip_check, SymMatrix2};

pub fn run_example() -> qcs::Result<()> {
    // The ellipse matrix for a = 2, b = 1.
    let a = SymMatrix2::new(3.0, 0.0, 1.0 / 3.0);
    let mu = mu_from_entries(&a)?;
    println!("A = diag(3, 1/3)       -> mu = {mu:.6}");

    for mu in [Complex64::new(0.0, 0.0), Complex64::new(-0.5, 0.0), Complex64::new(0.0, -1.0 / 3.0)] {
        let m = matrix_from_mu(mu)?;
        let (lo, hi) = m.eigenvalues();
        println!(
            "mu = {mu:>12.4} -> a11 = {:.6}, a12 = {:.6}, a22 = {:.6}, det = {:.3e}, eig = [{lo:.4}, {hi:.4}]",
            m.a11,
            m.a12,
            m.a22,
            m.det() - 1.0
        );
    }

    for s in [0.0, 1.0 / 3.0, 0.5] {
        println!("|mu| <= {s:.4} -> K = {:.6}", ellipticity_from_mu(s)?);
    }

    let worst = [Complex64::new(0.3, 0.4), Complex64::new(-0.9, 0.0), Complex64::new(0.0, 0.95)]
        .into_iter()
        .map(roundtrip_check)
        .collect::<qcs::Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!("largest round-trip residual: {worst:.2e}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcs::Result<()> {
    run_example()
}
