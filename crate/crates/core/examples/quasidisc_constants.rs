// The quasidisc constant `M(K)` lives far below `f64::MIN_POSITIVE`, so it is
// only ever handled through its base-10 logarithm.

use qcs::bounds::{exp_exponent, ln_nu, quasidisc_mk, quasidisc_mk_grid};

pub fn run_example() -> qcs::Result<()> {
    println!("exponential factor: e^{:.9}", exp_exponent());
    println!("{:>5} {:>20} {:>14} {:>14} {:>12}", "K", "log10 M(K)", "beta~ - 1", "beta_opt - 1", "grid diff");
    for k in [1.0, 1.5, 2.0, 4.0] {
        let c = quasidisc_mk(k)?;
        let grid = quasidisc_mk_grid(k, 20_000)?;
        println!(
            "{k:>5} {:>20.12} {:>14.4e} {:>14.4e} {:>12.1e}",
            c.log10_m,
            c.delta_tilde,
            c.delta_opt,
            c.log10_m - grid
        );
        // nu(beta~) = 1 means ln nu vanishes at the root
        assert!(ln_nu(c.delta_tilde, k * k).abs() < 1e-9);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcs::Result<()> {
    run_example()
}
