// First Neumann eigenvalue of the unit disc under mesh refinement,
// against `(j'_{1,1})^2`.

use qcs::fem::{convergence_slope, solve_laplacian, EigenOptions};
use qcs::qcmaps::DomainSpec;
use qcs::special::DISC_MU1;

pub fn run_example() -> qcs::Result<()> {
    let opts = EigenOptions::default();
    let (mut hs, mut errs) = (Vec::new(), Vec::new());
    println!("{:>4} {:>6} {:>8} {:>10} {:>14} {:>10}", "nr", "na", "dofs", "h", "mu_1", "rel err");
    for n in [8, 16, 32, 64] {
        let r = solve_laplacian(&DomainSpec::unit_disc(), n, 4 * n, &opts)?;
        let err = r.mu1_fem - DISC_MU1;
        println!("{n:>4} {:>6} {:>8} {:>10.5} {:>14.10} {:>10.2e}", 4 * n, r.n_dofs, r.mesh_h, r.mu1_fem, err / DISC_MU1);
        hs.push(r.mesh_h);
        errs.push(err);
    }
    println!("observed order: {:.3}", convergence_slope(&hs, &errs));
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcs::Result<()> {
    run_example()
}
