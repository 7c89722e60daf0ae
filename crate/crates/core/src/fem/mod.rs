//! P1 finite elements for the Neumann problem `-div(A grad u) = mu u`.

pub mod assembly;
pub mod checks;
pub mod eigen;
pub mod mesh;
pub mod sparse;

pub use assembly::{assemble, assemble_mass, assemble_stiffness, assemble_weighted_mass};
pub use checks::{isometry_check, weighted_poincare_check, IsometryReport, PoincareReport, TestFunction};
pub use eigen::{neumann_eigenpairs, neumann_mu1, EigenOptions, Eigenpairs, SpectralReport};
pub use mesh::{mesh_pullback, mesh_square, mesh_star_domain, Mesh};
pub use sparse::{CsrMatrix, SkylineCholesky};

use serde::{Deserialize, Serialize};
use std::str::FromStr;

use crate::dilatation::MatrixField;
use crate::error::{Error, Result};
use crate::qcmaps::{AnalyticQCMap, DomainSpec};

/// How a map's domain is triangulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mesher {
    /// Radial blending of a polar grid over the domain's boundary curve.
    Star,
    /// Image of a structured disc mesh under the closed-form inverse map.
    Pullback,
}

impl FromStr for Mesher {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(Mesher::Star),
            "pullback" => Ok(Mesher::Pullback),
            _ => Err(Error::Parse(format!("unknown mesher `{s}` (expected star or pullback)"))),
        }
    }
}

pub fn mesh_for_map(map: &AnalyticQCMap, mesher: Mesher, n_radial: usize, n_angular: usize) -> Result<Mesh> {
    match mesher {
        Mesher::Star => mesh_star_domain(map.domain(), n_radial, n_angular),
        Mesher::Pullback => mesh_pullback(map, n_radial, n_angular),
    }
}

/// Assembles and solves on an existing mesh.
pub fn solve_on_mesh(mesh: &Mesh, field: &MatrixField, opts: &EigenOptions) -> Result<SpectralReport> {
    let (s, m) = assemble(mesh, field)?;
    let mut report = neumann_mu1(&s, &m, opts)?;
    report.mesh_h = mesh.h_max;
    Ok(report)
}

/// FEM spectrum of `-div(A grad u)` on the map's domain, `A` from its dilatation.
pub fn solve_map(
    map: &AnalyticQCMap,
    mesher: Mesher,
    n_radial: usize,
    n_angular: usize,
    opts: &EigenOptions,
) -> Result<SpectralReport> {
    let mesh = mesh_for_map(map, mesher, n_radial, n_angular)?;
    solve_on_mesh(&mesh, &MatrixField::from_map(map), opts)
}

/// FEM spectrum of the Laplacian on a domain.
pub fn solve_laplacian(domain: &DomainSpec, n_radial: usize, n_angular: usize, opts: &EigenOptions) -> Result<SpectralReport> {
    let mesh = mesh_star_domain(domain, n_radial, n_angular)?;
    solve_on_mesh(&mesh, &MatrixField::identity(), opts)
}

/// Same spectrum computed on the disc: `-Delta g = mu |J(w, phi^{-1})| g`.
///
/// Independent of the map's domain mesh, which makes it an oracle for maps
/// with a non-constant Jacobian.
pub fn solve_pulled_back_to_disc(
    map: &AnalyticQCMap,
    n_radial: usize,
    n_angular: usize,
    opts: &EigenOptions,
) -> Result<SpectralReport> {
    let mesh = mesh_star_domain(&DomainSpec::unit_disc(), n_radial, n_angular)?;
    let s = assemble_stiffness(&mesh, &MatrixField::identity())?;
    let m = assemble_weighted_mass(&mesh, |w| map.inverse_jacobian_abs(w));
    let mut report = neumann_mu1(&s, &m, opts)?;
    report.mesh_h = mesh.h_max;
    Ok(report)
}

/// Least-squares slope of `ln(err)` against `ln(h)`.
pub fn convergence_slope(h: &[f64], err: &[f64]) -> f64 {
    let n = h.len() as f64;
    let x: Vec<f64> = h.iter().map(|v| v.ln()).collect();
    let y: Vec<f64> = err.iter().map(|v| v.abs().ln()).collect();
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}
