//! Lower bounds on the first non-trivial Neumann eigenvalue `mu_1(A, Omega)`.
//!
//! Each bound is reported as a [`SpectralBound`] carrying both the linear
//! value and its base-10 logarithm, so that bounds far below the smallest
//! double stay comparable.

mod quasidisc;

pub use quasidisc::{
    exp_exponent, inverse_holder_constant, ln_nu, nu_root, quasidisc_mk, quasidisc_mk_grid,
    quasidisc_objective, QuasidiscConstant,
};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::f64::consts::{LN_10, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::qcmaps::{AnalyticQCMap, DomainSpec, MapFamily};
use crate::quadrature::disc_rule;
use crate::special::{DISC_MU1, J1P_ZERO};

/// Default radial node count of the disc rule; the angular count is four times it.
pub const DEFAULT_N_QUAD: usize = 64;

/// Allowed growth of the beta integral under refinement before it is
/// declared divergent.
pub const DIVERGENCE_RATIO: f64 = 1.1;

/// Largest argument passed to `exp` anywhere in the bounds code.
pub const EXP_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    Thm51Beta,
    Thm47Inf,
    PayneWeinberger,
    ClassicalElliptic,
    QuasidiscMk,
}

impl BoundKind {
    pub const ALL: [BoundKind; 5] = [
        BoundKind::Thm51Beta,
        BoundKind::Thm47Inf,
        BoundKind::PayneWeinberger,
        BoundKind::ClassicalElliptic,
        BoundKind::QuasidiscMk,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::Thm51Beta => "thm51_beta",
            BoundKind::Thm47Inf => "thm47_inf",
            BoundKind::PayneWeinberger => "payne_weinberger",
            BoundKind::ClassicalElliptic => "classical_elliptic",
            BoundKind::QuasidiscMk => "quasidisc_MK",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A lower bound `mu_1 >= value`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralBound {
    pub kind: BoundKind,
    /// Linear value; zero when it underflows.
    pub value: f64,
    pub log10_value: f64,
    /// False when a hypothesis of the bound fails for this domain.
    pub applicable: bool,
    pub params: BTreeMap<String, Value>,
    pub quadrature_error: Option<f64>,
}

impl SpectralBound {
    fn from_value(kind: BoundKind, value: f64) -> Self {
        Self {
            kind,
            value,
            log10_value: value.log10(),
            applicable: true,
            params: BTreeMap::new(),
            quadrature_error: None,
        }
    }

    fn from_log10(kind: BoundKind, log10_value: f64) -> Self {
        let ln = log10_value * LN_10;
        let value = if ln.abs() <= EXP_LIMIT { ln.exp() } else if ln < 0.0 { 0.0 } else { f64::INFINITY };
        Self {
            kind,
            value,
            log10_value,
            applicable: true,
            params: BTreeMap::new(),
            quadrature_error: None,
        }
    }

    fn with(mut self, key: &str, v: Value) -> Self {
        self.params.insert(key.to_string(), v);
        self
    }

    /// The parameter record as a compact JSON object.
    pub fn param_json(&self) -> String {
        let mut p = self.params.clone();
        p.insert("applicable".into(), json!(self.applicable));
        if let Some(e) = self.quadrature_error {
            p.insert("quadrature_error".into(), json!(e));
        }
        serde_json::to_string(&p).expect("parameter map serializes")
    }

    /// True when the bound is consistent with an eigenvalue `mu1`, allowing a
    /// relative budget `slack`.
    pub fn holds_for(&self, mu1: f64, slack: f64) -> bool {
        self.log10_value <= (mu1 * (1.0 + slack)).log10()
    }
}

/// Upper estimate of the `(r, 2)`-Poincaré constant of the unit disc,
/// `(pi/2)^{(2-r)/(2r)} (r+2)^{(r+2)/(2r)}`.
pub fn poincare_constant_upper(r: f64) -> Result<f64> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(Error::InvalidParams(format!("Poincare exponent r must be >= 1, got {r}")));
    }
    let ln = (2.0 - r) / (2.0 * r) * (0.5 * PI).ln() + (r + 2.0) / (2.0 * r) * (r + 2.0).ln();
    Ok(ln.exp())
}

/// Exact `B_{2,2}(D) = 1 / j'_{1,1}`.
pub fn disc_poincare_constant_exact() -> f64 {
    1.0 / J1P_ZERO
}

/// Upper bound on the `(s, 2)` embedding constant of a `beta`-regular domain,
/// `B_{r,2}(D) (int |J|^beta)^{1/(beta s)}` with `r = beta s / (beta - 1)`.
pub fn embedding_constant_upper(s: f64, beta: f64, jacobian_beta_integral: f64) -> Result<f64> {
    if !(s >= 1.0) || !(beta > 1.0) {
        return Err(Error::InvalidParams(format!("need s >= 1 and beta > 1, got s={s}, beta={beta}")));
    }
    let r = beta * s / (beta - 1.0);
    Ok(poincare_constant_upper(r)? * jacobian_beta_integral.powf(1.0 / (beta * s)))
}

/// Result of integrating `|J(w, phi^{-1})|^beta` over the disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BetaRegularityReport {
    pub beta: f64,
    /// `int_D |J(w, phi^{-1})|^beta du dv` at the refined resolution.
    pub integral: f64,
    /// `integral^{1/beta}`.
    pub norm_j_beta: f64,
    /// `|I(2n) - I(n)|`, relative to `I(2n)`.
    pub quadrature_error_estimate: f64,
}

/// `int_D (|J| / scale)^beta`, which stays finite for large `beta`.
fn scaled_beta_integral(map: &AnalyticQCMap, beta: f64, n: usize, scale: f64) -> f64 {
    disc_rule(n, 4 * n).integrate(|w| (map.inverse_jacobian_abs(w) / scale).powf(beta))
}

/// `L^beta` norm of the inverse Jacobian on the disc.
///
/// Evaluated on the `n_quad x 4 n_quad` disc rule and on its doubling; the
/// finer value is returned with the relative difference as error estimate.
/// The integrand is divided by the sup of `|J|` first, so `beta` in the
/// hundreds does not overflow; `integral` itself may still be infinite.
pub fn beta_norm(map: &AnalyticQCMap, beta: f64, n_quad: usize) -> Result<BetaRegularityReport> {
    if !(beta >= 1.0) || !beta.is_finite() {
        return Err(Error::InvalidParams(format!("beta must be finite and >= 1, got {beta}")));
    }
    if n_quad < 16 {
        return Err(Error::InvalidParams(format!("n_quad must be >= 16, got {n_quad}")));
    }
    let scale = map.inverse_jacobian_sup().filter(|s| s.is_finite() && *s > 0.0).unwrap_or(1.0);
    let coarse = scaled_beta_integral(map, beta, n_quad, scale);
    let fine = scaled_beta_integral(map, beta, 2 * n_quad, scale);
    if !fine.is_finite() || fine > DIVERGENCE_RATIO * coarse {
        let s = scale.powf(beta);
        return Err(Error::QuadratureDivergence { coarse: coarse * s, fine: fine * s });
    }
    Ok(BetaRegularityReport {
        beta,
        integral: fine * scale.powf(beta),
        norm_j_beta: scale * fine.powf(1.0 / beta),
        quadrature_error_estimate: (fine - coarse).abs() / fine,
    })
}

/// Constant factor of the `beta`-regular bound,
/// `(4 / pi^{1/beta}) ((2 beta - 1)/(beta - 1))^{(2 beta - 1)/beta}`.
pub fn thm51_factor(beta: f64) -> f64 {
    let ln = 4f64.ln() - PI.ln() / beta
        + (2.0 * beta - 1.0) / beta * ((2.0 * beta - 1.0) / (beta - 1.0)).ln();
    ln.exp()
}

/// `mu_1 >= 1 / [thm51_factor(beta) ||J_{phi^{-1}}||_beta]`.
pub fn lower_bound_thm51(map: &AnalyticQCMap, beta: f64, n_quad: usize) -> Result<SpectralBound> {
    if !(beta > 1.0) {
        return Err(Error::InvalidParams(format!("beta must exceed 1, got {beta}")));
    }
    let rep = beta_norm(map, beta, n_quad)?;
    let value = 1.0 / (thm51_factor(beta) * rep.norm_j_beta);
    let mut b = SpectralBound::from_value(BoundKind::Thm51Beta, value)
        .with("map", json!(map.id()))
        .with("beta", json!(beta))
        .with("norm_j_beta", json!(rep.norm_j_beta))
        .with("n_quad", json!(n_quad));
    b.quadrature_error = Some(rep.quadrature_error_estimate);
    Ok(b)
}

/// `mu_1 >= (j'_{1,1})^2 / ess sup |J(w, phi^{-1})|`.
pub fn lower_bound_thm47(map: &AnalyticQCMap) -> Result<SpectralBound> {
    let sup = map
        .inverse_jacobian_sup()
        .filter(|s| s.is_finite() && *s > 0.0)
        .ok_or_else(|| Error::NotInfRegular(map.id()))?;
    Ok(SpectralBound::from_value(BoundKind::Thm47Inf, DISC_MU1 / sup)
        .with("map", json!(map.id()))
        .with("esssup_inverse_jacobian", json!(sup)))
}

/// The Payne–Weinberger bound `pi^2/d^2` and its elliptic variant
/// `pi^2/(K d^2)`, returned in that order.
///
/// Both are flagged inapplicable on non-convex domains; the pure bound is
/// also flagged when `K > 1`, since it concerns the Laplacian.
pub fn payne_weinberger(domain: &DomainSpec, k: f64) -> Result<(SpectralBound, SpectralBound)> {
    if !(k >= 1.0) {
        return Err(Error::InvalidParams(format!("ellipticity K must be >= 1, got {k}")));
    }
    let d = domain.diameter;
    let convex = domain.is_convex();
    let base = PI * PI / (d * d);
    let mut pure = SpectralBound::from_value(BoundKind::PayneWeinberger, base)
        .with("diameter", json!(d))
        .with("convex", json!(convex));
    pure.applicable = convex && k == 1.0;
    let mut elliptic = SpectralBound::from_value(BoundKind::ClassicalElliptic, base / k)
        .with("diameter", json!(d))
        .with("K", json!(k))
        .with("convex", json!(convex));
    elliptic.applicable = convex;
    Ok((pure, elliptic))
}

/// True when the map extends to a quasiconformal homeomorphism of the plane,
/// so that its domain is a `K`-quasidisc with the map's own `K`.
pub fn is_global_quasidisc_map(map: &AnalyticQCMap) -> bool {
    matches!(map.family(), MapFamily::Ellipse { .. } | MapFamily::Shear { .. })
}

/// `log10 mu_1 >= log10 M(K) - log10 |Omega|` for a `K`-quasidisc.
pub fn lower_bound_quasidisc(domain: &DomainSpec, k: f64, global_map: bool) -> Result<SpectralBound> {
    let c = quasidisc_mk(k)?;
    let mut b = SpectralBound::from_log10(BoundKind::QuasidiscMk, c.log10_m - domain.area.log10())
        .with("K", json!(k))
        .with("log10_M", json!(c.log10_m))
        .with("log10_M_star", json!(c.log10_m - PI.log10()))
        .with("beta_opt_minus_one", json!(c.delta_opt))
        .with("beta_tilde_minus_one", json!(c.delta_tilde))
        .with("area", json!(domain.area));
    b.applicable = global_map;
    Ok(b)
}

/// Every bound for `map`, in [`BoundKind::ALL`] order.
pub fn all_bounds(map: &AnalyticQCMap, beta: f64, n_quad: usize) -> Result<Vec<SpectralBound>> {
    let k = map.ellipticity_k();
    let (pw, classical) = payne_weinberger(map.domain(), k)?;
    Ok(vec![
        lower_bound_thm51(map, beta, n_quad)?,
        lower_bound_thm47(map)?,
        pw,
        classical,
        lower_bound_quasidisc(map.domain(), k, is_global_quasidisc_map(map))?,
    ])
}

/// Index of the largest applicable bound.
pub fn best_bound(bounds: &[SpectralBound]) -> Option<usize> {
    bounds
        .iter()
        .enumerate()
        .filter(|(_, b)| b.applicable)
        .max_by(|a, b| a.1.log10_value.total_cmp(&b.1.log10_value))
        .map(|(i, _)| i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcmaps::{make_ellipse_map, make_rose_petal_map};

    #[test]
    fn poincare_upper_at_two() {
        assert!((poincare_constant_upper(2.0).unwrap() - 4.0).abs() < 1e-14);
        assert!(poincare_constant_upper(0.5).is_err());
    }

    #[test]
    fn thm51_factor_is_squared_poincare_constant() {
        for beta in [1.5, 2.0, 3.0, 10.0] {
            let r = 2.0 * beta / (beta - 1.0);
            let b = poincare_constant_upper(r).unwrap();
            assert!((thm51_factor(beta) / (b * b) - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn classical_values() {
        let e = make_ellipse_map(2.0, 1.0).unwrap();
        let (_, c) = payne_weinberger(e.domain(), e.ellipticity_k()).unwrap();
        assert!((c.value - PI * PI / 108.0).abs() < 1e-14);
        let p = make_rose_petal_map();
        let (_, c) = payne_weinberger(p.domain(), 2.0).unwrap();
        assert!((c.value - (PI / 4.0).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn rejects_coarse_rule() {
        assert!(beta_norm(&make_rose_petal_map(), 2.0, 8).is_err());
    }

    #[test]
    fn underflowing_bounds_keep_their_log() {
        let b = SpectralBound::from_log10(BoundKind::QuasidiscMk, -5000.0);
        assert_eq!(b.value, 0.0);
        assert_eq!(b.log10_value, -5000.0);
        assert!(b.holds_for(1e-300, 0.0));
    }
}
