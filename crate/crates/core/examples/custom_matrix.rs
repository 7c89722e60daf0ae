// A constant coefficient matrix given as JSON, solved on the unit square
// and checked against separation of variables.
//
// For constant diagonal `A = diag(k, 1/k)` on `[0,1]^2` the Neumann
// eigenvalues are `pi^2 (k m^2 + n^2 / k)`.

use qcs::dilatation::MatrixField;
use qcs::fem::{mesh_square, solve_on_mesh, EigenOptions};
use std::f64::consts::PI;

pub fn run_example() -> qcs::Result<()> {
    let field = MatrixField::from_json(r#"{"kind":"constant","a11":2.0,"a12":0.0,"a22":0.5}"#)?;
    let mesh = mesh_square(1.0, 40)?;
    let report = solve_on_mesh(&mesh, &field, &EigenOptions { m: 4, ..Default::default() })?;
    let exact = [0.0, 0.5 * PI * PI, 2.0 * PI * PI, 2.0 * PI * PI];
    for (k, (got, want)) in report.mu_sequence.iter().zip(exact).enumerate() {
        println!("mu_{k} = {got:.6} (exact {want:.6})");
    }
    println!("solver {}, {} dofs", report.solver, report.n_dofs);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcs::Result<()> {
    run_example()
}
