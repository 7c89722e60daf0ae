// Writes the cusp mesh in the plain-text format and reads it back.

use qcs::fem::{mesh_pullback, Mesh};
use qcs::qcmaps::make_cusp_map;

pub fn run_example() -> qcs::Result<()> {
    let mesh = mesh_pullback(&make_cusp_map(), 16, 64)?;
    let path = std::env::temp_dir().join("qcs_cusp_mesh.txt");
    mesh.write_text(std::fs::File::create(&path)?)?;
    let back = Mesh::read_text(std::fs::File::open(&path)?)?;
    println!(
        "{}: {} vertices, {} triangles, {} boundary vertices, V - E + F = {}, area {:.6}",
        path.display(),
        back.n_vertices(),
        back.n_triangles(),
        back.boundary.iter().filter(|b| **b).count(),
        back.euler_characteristic(),
        back.area()
    );
    assert_eq!(back.triangles, mesh.triangles);
    Ok(())
}

#[allow(dead_code)]
fn main() -> qcs::Result<()> {
    run_example()
}
