// The closed-form maps onto the unit disc: boundary behaviour, Jacobians,
// dilatations and inverses.

use num_complex::Complex64;
use qcs::qcmaps::{bilipschitz_check, example_maps, inverse_dilatation};
use std::f64::consts::PI;

pub fn run_example() -> qcs::Result<()> {
    for map in example_maps() {
        let d = map.domain();
        let (t0, t1) = d.theta_range();
        let worst_boundary = (1..200)
            .map(|k| {
                let t = t0 + (t1 - t0) * k as f64 / 200.0;
                (map.phi(d.boundary_point(t)).norm() - 1.0).abs()
            })
            .fold(0.0, f64::max);
        let z = d.boundary_point(0.5 * (t0 + t1) + 0.1) * 0.5;
        let w = map.phi(z);
        let back = map.inverse(w)?;
        println!("{map}");
        println!("  area {:.6}, diameter {:.6}, K = {}", d.area, d.diameter, map.ellipticity_k());
        println!("  max ||phi(boundary)| - 1| = {worst_boundary:.2e}");
        println!("  at z = {z:.4}: mu = {:.4}, J = {:.6}, |phi^-1(phi(z)) - z| = {:.1e}", map.mu(z), map.jacobian(z), (back - z).norm());
        println!("  inverse dilatation at w = 1/2: {:.6}", inverse_dilatation(&map, Complex64::new(0.5, 0.0))?);
        if map.is_measure_preserving() {
            let samples: Vec<Complex64> = (0..64).map(|k| Complex64::from_polar(0.5, PI * k as f64 / 128.0 - PI / 8.0)).collect();
            println!("  max stretch {:.12} (sqrt K = {:.12})", bilipschitz_check(&map, &samples)?, map.ellipticity_k().sqrt());
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcs::Result<()> {
    run_example()
}
