// Thin ellipses with `a + b = 3`: the quasiconformal bound blows up like
// `1/(a^2 - b^2)` while the classical one shrinks like `a - b`.

use qcs::cli::thin_ellipse_sweep;

pub fn run_example() -> qcs::Result<()> {
    let gaps = [1.0, 0.3, 0.1, 0.03, 0.01];
    let rows = thin_ellipse_sweep(&gaps)?;
    println!("{:>8} {:>10} {:>14} {:>14}", "a - b", "a^2 - b^2", "thm47", "classical");
    for r in &rows {
        println!("{:>8} {:>10.4} {:>14.6e} {:>14.6e}", r.a_minus_b, r.jacobian_inverse, r.thm47, r.classical);
    }
    let (first, last) = (&rows[0], &rows[rows.len() - 1]);
    let slope = (last.thm47 / first.thm47).ln() / (last.jacobian_inverse / first.jacobian_inverse).ln();
    println!("log-log slope of thm47 against a^2 - b^2: {slope:.6}");
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcs::Result<()> {
    run_example()
}
