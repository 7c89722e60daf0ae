//! Algebra between unit-determinant elliptic matrices and complex dilatations.
//!
//! ```text
//! mu  = (a22 - a11 - 2i a12) / det(I + A)
//! a11 = |1 - mu|^2 / (1 - |mu|^2)
//! a12 = -2 Im(mu) / (1 - |mu|^2)
//! a22 = |1 + mu|^2 / (1 - |mu|^2)
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcmaps::{AnalyticQCMap, DomainSpec};

/// Absolute band allowed around `det A = 1`.
pub const DET_TOLERANCE: f64 = 1e-12;

/// Dilatations with `|mu| >= 1 - DEGENERACY_GAP` are rejected.
pub const DEGENERACY_GAP: f64 = 1e-9;

/// Symmetric 2x2 matrix stored by its three free entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymMatrix2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl SymMatrix2 {
    pub const IDENTITY: SymMatrix2 = SymMatrix2 { a11: 1.0, a12: 0.0, a22: 1.0 };

    pub fn new(a11: f64, a12: f64, a22: f64) -> Self {
        Self { a11, a12, a22 }
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    /// Eigenvalues in increasing order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let m = 0.5 * self.trace();
        let r = (0.25 * (self.a11 - self.a22).powi(2) + self.a12 * self.a12).sqrt();
        let hi = m + r;
        // the small one via det/hi avoids cancellation
        let lo = if hi != 0.0 { self.det() / hi } else { m - r };
        (lo, hi)
    }

    pub fn inverse(&self) -> Self {
        let d = self.det();
        Self::new(self.a22 / d, -self.a12 / d, self.a11 / d)
    }

    pub fn apply(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a12 * v[0] + self.a22 * v[1],
        ]
    }

    /// `<A v, v>`.
    pub fn quadratic_form(&self, v: [f64; 2]) -> f64 {
        self.a11 * v[0] * v[0] + 2.0 * self.a12 * v[0] * v[1] + self.a22 * v[1] * v[1]
    }

    /// Largest eigenvalue for a unit-determinant matrix, i.e. the metric `K`.
    pub fn ellipticity(&self) -> f64 {
        self.eigenvalues().1
    }

    fn check_unit_det(&self) -> Result<()> {
        let d = self.det();
        if !d.is_finite() || (d - 1.0).abs() > DET_TOLERANCE {
            return Err(Error::NonElliptic(format!("det A = {d:.17}")));
        }
        if self.a11 <= 0.0 || self.a22 <= 0.0 {
            return Err(Error::NonElliptic(format!("non-positive diagonal in {self:?}")));
        }
        Ok(())
    }
}

/// `mu = (a22 - a11 - 2i a12) / det(I + A)` for a single matrix.
pub fn mu_from_entries(a: &SymMatrix2) -> Result<Complex64> {
    a.check_unit_det()?;
    let d = (1.0 + a.a11) * (1.0 + a.a22) - a.a12 * a.a12;
    if d <= 0.0 {
        return Err(Error::NonElliptic(format!("det(I + A) = {d}")));
    }
    Ok(Complex64::new(a.a22 - a.a11, -2.0 * a.a12) / d)
}

/// Complex dilatation of the field `a` at `z`.
pub fn mu_from_matrix(a: &MatrixField, z: Complex64) -> Result<Complex64> {
    mu_from_entries(&a.eval(z)?)
}

pub fn matrix_from_mu(mu: Complex64) -> Result<SymMatrix2> {
    let m2 = mu.norm_sqr();
    if !m2.is_finite() || m2.sqrt() >= 1.0 - DEGENERACY_GAP {
        return Err(Error::DegenerateDilatation(mu.norm()));
    }
    let s = 1.0 - m2;
    Ok(SymMatrix2 {
        a11: (1.0 - mu).norm_sqr() / s,
        a12: -2.0 * mu.im / s,
        a22: (1.0 + mu).norm_sqr() / s,
    })
}

/// `K = (1 + |mu|) / (1 - |mu|)`.
pub fn ellipticity_from_mu(sup_abs: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&sup_abs) {
        return Err(Error::DegenerateDilatation(sup_abs));
    }
    Ok((1.0 + sup_abs) / (1.0 - sup_abs))
}

/// Inverse of [`ellipticity_from_mu`].
pub fn mu_bound_from_ellipticity(k: f64) -> f64 {
    (k - 1.0) / (k + 1.0)
}

/// `|mu_from_entries(matrix_from_mu(mu)) - mu|`.
pub fn roundtrip_check(mu: Complex64) -> Result<f64> {
    let a = matrix_from_mu(mu)?;
    Ok((mu_from_entries(&a)? - mu).norm())
}

/// A pointwise matrix field with a declared ellipticity bound.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixField {
    Constant { matrix: SymMatrix2, domain: Option<DomainSpec> },
    FromMap(AnalyticQCMap),
}

/// JSON description of a [`MatrixField`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatrixFieldSpec {
    Constant { a11: f64, a12: f64, a22: f64 },
    FromMap { map: String },
}

impl MatrixField {
    pub fn constant(matrix: SymMatrix2) -> Result<Self> {
        matrix.check_unit_det()?;
        Ok(MatrixField::Constant { matrix, domain: None })
    }

    pub fn identity() -> Self {
        MatrixField::Constant { matrix: SymMatrix2::IDENTITY, domain: None }
    }

    pub fn with_domain(self, domain: DomainSpec) -> Self {
        match self {
            MatrixField::Constant { matrix, .. } => MatrixField::Constant { matrix, domain: Some(domain) },
            other => other,
        }
    }

    pub fn from_map(map: &AnalyticQCMap) -> Self {
        MatrixField::FromMap(map.clone())
    }

    pub fn from_spec(spec: &MatrixFieldSpec) -> Result<Self> {
        match spec {
            MatrixFieldSpec::Constant { a11, a12, a22 } => Self::constant(SymMatrix2::new(*a11, *a12, *a22)),
            MatrixFieldSpec::FromMap { map } => Ok(Self::FromMap(map.parse()?)),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_spec(&serde_json::from_str(text)?)
    }

    pub fn spec(&self) -> MatrixFieldSpec {
        match self {
            MatrixField::Constant { matrix, .. } => MatrixFieldSpec::Constant {
                a11: matrix.a11,
                a12: matrix.a12,
                a22: matrix.a22,
            },
            MatrixField::FromMap(m) => MatrixFieldSpec::FromMap { map: m.id() },
        }
    }

    pub fn eval(&self, z: Complex64) -> Result<SymMatrix2> {
        match self {
            MatrixField::Constant { matrix, .. } => Ok(*matrix),
            MatrixField::FromMap(m) => matrix_from_mu(m.mu(z)),
        }
    }

    /// Declared uniform ellipticity bound `K`.
    pub fn ellipticity_k(&self) -> f64 {
        match self {
            MatrixField::Constant { matrix, .. } => matrix.ellipticity(),
            MatrixField::FromMap(m) => m.ellipticity_k(),
        }
    }

    pub fn domain_hint(&self) -> Option<&DomainSpec> {
        match self {
            MatrixField::Constant { domain, .. } => domain.as_ref(),
            MatrixField::FromMap(m) => Some(m.domain()),
        }
    }

    /// Evaluates and checks `det A = 1` and the eigenvalue band `[1/K, K]`.
    pub fn eval_checked(&self, z: Complex64) -> Result<SymMatrix2> {
        let a = self.eval(z)?;
        a.check_unit_det()?;
        let k = self.ellipticity_k();
        let (lo, hi) = a.eigenvalues();
        let slack = 1e-10 * k;
        if lo < 1.0 / k - slack || hi > k + slack {
            return Err(Error::NonElliptic(format!("eigenvalues ({lo}, {hi}) outside [1/{k}, {k}]")));
        }
        Ok(a)
    }
}

/// A pointwise complex dilatation with a declared bound on `|mu|`.
#[derive(Debug, Clone, PartialEq)]
pub enum DilatationField {
    Constant(Complex64),
    FromMap(AnalyticQCMap),
}

impl DilatationField {
    pub fn constant(mu: Complex64) -> Result<Self> {
        if mu.norm() >= 1.0 - DEGENERACY_GAP {
            return Err(Error::DegenerateDilatation(mu.norm()));
        }
        Ok(DilatationField::Constant(mu))
    }

    pub fn value(&self, z: Complex64) -> Complex64 {
        match self {
            DilatationField::Constant(mu) => *mu,
            DilatationField::FromMap(m) => m.mu(z),
        }
    }

    pub fn sup_abs(&self) -> f64 {
        match self {
            DilatationField::Constant(mu) => mu.norm(),
            DilatationField::FromMap(m) => m.sup_abs_mu(),
        }
    }

    pub fn ellipticity_k(&self) -> Result<f64> {
        ellipticity_from_mu(self.sup_abs())
    }

    /// The matrix field this dilatation encodes.
    pub fn matrix_field(&self) -> Result<MatrixField> {
        match self {
            DilatationField::Constant(mu) => MatrixField::constant(matrix_from_mu(*mu)?),
            DilatationField::FromMap(m) => Ok(MatrixField::from_map(m)),
        }
    }
}
