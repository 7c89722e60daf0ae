// FEM eigenvalues of `-div(A grad u)` on the example domains, next to the
// bounds they should dominate.

use qcs::bounds::{all_bounds, DEFAULT_N_QUAD};
use qcs::fem::{solve_map, solve_pulled_back_to_disc, EigenOptions, Mesher};
use qcs::qcmaps::example_maps;

pub fn run_example() -> qcs::Result<()> {
    let opts = EigenOptions::default();
    for map in example_maps() {
        let fem = solve_map(&map, Mesher::Pullback, 32, 128, &opts)?;
        let oracle = solve_pulled_back_to_disc(&map, 32, 128, &opts)?;
        println!("{map}: mu = {:?}", fem.mu_sequence);
        println!("  weighted disc problem: mu_1 = {:.6}", oracle.mu1_fem);
        for b in all_bounds(&map, 2.0, DEFAULT_N_QUAD)? {
            let ok = b.holds_for(fem.mu1_fem, 0.02);
            println!("  {:<20} {:>12.6e} {}", b.kind.as_str(), b.value, if ok { "ok" } else { "VIOLATED" });
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcs::Result<()> {
    run_example()
}
