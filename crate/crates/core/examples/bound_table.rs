// Every lower bound on `mu_1` for each example map, best applicable bound marked.

use qcs::bounds::{all_bounds, best_bound, DEFAULT_N_QUAD};
use qcs::qcmaps::AnalyticQCMap;

pub fn run_example() -> qcs::Result<()> {
    for id in ["ellipse:a=2,b=1", "rose_petal", "cusp", "shear:fprime=const1,a=1", "disc"] {
        let map: AnalyticQCMap = id.parse()?;
        let bounds = all_bounds(&map, 2.0, DEFAULT_N_QUAD)?;
        let best = best_bound(&bounds);
        println!("{map}");
        for (i, b) in bounds.iter().enumerate() {
            println!(
                "  {:<20} {:>14.6e}  log10 {:>12.4}  {}{}",
                b.kind.as_str(),
                b.value,
                b.log10_value,
                if b.applicable { "" } else { "(inapplicable) " },
                if Some(i) == best { "<- best" } else { "" }
            );
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcs::Result<()> {
    run_example()
}
