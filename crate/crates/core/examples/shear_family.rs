// Area-preserving shears `(a x + f(y), y / a)`: unit Jacobian with
// arbitrarily large distortion, so the `L^infinity` bound stays at
// `(j'_{1,1})^2` however large `K` gets.

use qcs::bounds::lower_bound_thm47;
use qcs::fem::{solve_map, EigenOptions, Mesher};
use qcs::qcmaps::{make_shear_map, ShearProfile};

pub fn run_example() -> qcs::Result<()> {
    let opts = EigenOptions::default();
    for (profile, a) in [
        (ShearProfile::Linear { slope: 1.0 }, 1.0),
        (ShearProfile::Linear { slope: 3.0 }, 1.0),
        (ShearProfile::Cosine { amplitude: 0.8 }, 1.3),
    ] {
        let map = make_shear_map(profile, a)?;
        let fem = solve_map(&map, Mesher::Pullback, 24, 96, &opts)?;
        println!(
            "{map}: K = {:.6}, thm47 = {:.6}, FEM mu_1 = {:.6}",
            map.ellipticity_k(),
            lower_bound_thm47(&map)?.value,
            fem.mu1_fem
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcs::Result<()> {
    run_example()
}
