// Energy isometry and weighted Poincaré checks over the test-function catalog.

use qcs::fem::{isometry_check, weighted_poincare_check, TestFunction};
use qcs::qcmaps::example_maps;

pub fn run_example() -> qcs::Result<()> {
    for map in example_maps() {
        println!("{map}");
        for f in TestFunction::ALL {
            let iso = isometry_check(&map, f.id(), 64)?;
            let margins = [1.0, 2.0, 4.0]
                .into_iter()
                .map(|r| weighted_poincare_check(&map, r, f.id(), 48).map(|p| p.margin))
                .collect::<qcs::Result<Vec<_>>>()?;
            println!(
                "  {:<12} energy {:>12.8}  rel err {:>8.1e}  Poincare margins r=1,2,4: {:.3} {:.3} {:.3}",
                format!("{f:?}"),
                iso.rhs,
                iso.rel_err,
                margins[0],
                margins[1],
                margins[2]
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcs::Result<()> {
    run_example()
}
