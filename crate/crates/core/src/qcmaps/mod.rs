//! Closed-form A-quasiconformal maps onto the unit disc.
//!
//! Every family carries exact Wirtinger derivatives, its Jacobian, a
//! closed-form inverse and the domain it maps onto the disc:
//!
//! | family       | `phi(z)`                               | `mu(z)`          | `J(z, phi)`          |
//! |--------------|----------------------------------------|------------------|----------------------|
//! | `ellipse`    | `(a z - b conj(z)) / (a^2 - b^2)`      | `-b/a`           | `1/(a^2 - b^2)`      |
//! | `rose_petal` | `z^{3/2} / (sqrt(2) conj(z)^{1/2}) - 1` | `-z/(3 conj(z))` | `1`                  |
//! | `cusp`       | `2 z^{3/8} / conj(z)^{1/8} - 1`        | `-z/(3 conj(z))` | `1/(2 abs(z)^{3/2})` |
//! | `shear`      | `(a x + f(y), y/a)`                    | from `f'`        | `1`                  |
//!
//! Fractional powers use the principal branch (argument in `(-pi, pi]`);
//! neither polar domain meets the cut away from its tip.

mod domain;

pub use domain::{DomainShape, DomainSpec, PolarCurve};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::dilatation::ellipticity_from_mu;
use crate::error::{Error, Result};

/// Points closer than this to a branch point are excluded from sampling.
pub const BRANCH_GUARD: f64 = 1e-8;

/// Derivative profile `f'` of a shear map `(x, y) -> (a x + f(y), y / a)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ShearProfile {
    /// `f(y) = slope * y`.
    Linear { slope: f64 },
    /// `f(y) = amplitude * sin(y)`, so `f'(y) = amplitude * cos(y)`.
    Cosine { amplitude: f64 },
}

impl ShearProfile {
    pub fn f(&self, y: f64) -> f64 {
        match *self {
            ShearProfile::Linear { slope } => slope * y,
            ShearProfile::Cosine { amplitude } => amplitude * y.sin(),
        }
    }

    pub fn f_prime(&self, y: f64) -> f64 {
        match *self {
            ShearProfile::Linear { slope } => slope,
            ShearProfile::Cosine { amplitude } => amplitude * y.cos(),
        }
    }

    pub fn sup_abs_f_prime(&self) -> f64 {
        match *self {
            ShearProfile::Linear { slope } => slope.abs(),
            ShearProfile::Cosine { amplitude } => amplitude.abs(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum MapFamily {
    Ellipse { a: f64, b: f64 },
    RosePetal,
    Cusp,
    Shear { profile: ShearProfile, a_scale: f64 },
}

/// A closed-form quasiconformal map `phi: Omega -> D`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticQCMap {
    family: MapFamily,
    domain: DomainSpec,
    ellipticity_k: f64,
}

/// Largest singular value squared of the shear differential.
///
/// For `a = 1` this reduces to `(1 + f'^2/2)(1 + sqrt(1 - 4/(2 + f'^2)^2))`.
pub fn shear_stretch(f_prime: f64, a_scale: f64) -> f64 {
    let t = a_scale * a_scale + 1.0 / (a_scale * a_scale) + f_prime * f_prime;
    0.5 * t + (0.25 * t * t - 1.0).max(0.0).sqrt()
}

/// The printed form of the shear stretch for `a = 1`.
pub fn shear_stretch_unit_scale(f_prime: f64) -> f64 {
    let q = 2.0 + f_prime * f_prime;
    (1.0 + 0.5 * f_prime * f_prime) * (1.0 + (1.0 - 4.0 / (q * q)).sqrt())
}

pub fn make_ellipse_map(a: f64, b: f64) -> Result<AnalyticQCMap> {
    if !(a > b && b >= 0.0) {
        return Err(Error::InvalidParams(format!("ellipse map needs a > b >= 0, got a={a}, b={b}")));
    }
    Ok(AnalyticQCMap {
        family: MapFamily::Ellipse { a, b },
        domain: DomainSpec::ellipse(a + b, a - b)?,
        ellipticity_k: ellipticity_from_mu(b / a)?,
    })
}

pub fn make_rose_petal_map() -> AnalyticQCMap {
    AnalyticQCMap {
        family: MapFamily::RosePetal,
        domain: DomainSpec::rose_petal(),
        ellipticity_k: 2.0,
    }
}

pub fn make_cusp_map() -> AnalyticQCMap {
    AnalyticQCMap {
        family: MapFamily::Cusp,
        domain: DomainSpec::cusp(),
        ellipticity_k: 2.0,
    }
}

pub fn make_shear_map(profile: ShearProfile, a_scale: f64) -> Result<AnalyticQCMap> {
    if !(a_scale > 0.0) || !a_scale.is_finite() {
        return Err(Error::InvalidParams(format!("shear scale a must be positive, got {a_scale}")));
    }
    if !profile.sup_abs_f_prime().is_finite() {
        return Err(Error::InvalidParams("shear profile must have bounded derivative".into()));
    }
    Ok(AnalyticQCMap {
        family: MapFamily::Shear { profile, a_scale },
        domain: DomainSpec::sheared(a_scale, profile)?,
        // J = 1, so K = lambda; the sup of |f'| gives the worst point
        ellipticity_k: shear_stretch(profile.sup_abs_f_prime(), a_scale),
    })
}

impl AnalyticQCMap {
    pub fn family(&self) -> MapFamily {
        self.family
    }

    pub fn domain(&self) -> &DomainSpec {
        &self.domain
    }

    pub fn ellipticity_k(&self) -> f64 {
        self.ellipticity_k
    }

    /// Upper bound on `|mu|`, `(K - 1)/(K + 1)`.
    pub fn sup_abs_mu(&self) -> f64 {
        (self.ellipticity_k - 1.0) / (self.ellipticity_k + 1.0)
    }

    /// Canonical string id, parseable by [`FromStr`].
    pub fn id(&self) -> String {
        match self.family {
            MapFamily::Ellipse { a, b } => format!("ellipse:a={a},b={b}"),
            MapFamily::RosePetal => "rose_petal".into(),
            MapFamily::Cusp => "cusp".into(),
            MapFamily::Shear { profile, a_scale } => match profile {
                ShearProfile::Linear { slope } => format!("shear:fprime=const{slope},a={a_scale}"),
                ShearProfile::Cosine { amplitude } => format!("shear:fprime=cos{amplitude},a={a_scale}"),
            },
        }
    }

    /// True when `J(z, phi) = 1` identically.
    pub fn is_measure_preserving(&self) -> bool {
        match self.family {
            MapFamily::Ellipse { a, b } => (a * a - b * b - 1.0).abs() <= 1e-15,
            MapFamily::RosePetal | MapFamily::Shear { .. } => true,
            MapFamily::Cusp => false,
        }
    }

    pub fn phi(&self, z: Complex64) -> Complex64 {
        match self.family {
            MapFamily::Ellipse { a, b } => (a * z - b * z.conj()) / (a * a - b * b),
            MapFamily::RosePetal => {
                let (r, t) = z.to_polar();
                Complex64::from_polar(r / SQRT_2, 2.0 * t) - 1.0
            }
            MapFamily::Cusp => {
                let (r, t) = z.to_polar();
                Complex64::from_polar(2.0 * r.powf(0.25), 0.5 * t) - 1.0
            }
            MapFamily::Shear { profile, a_scale } => {
                Complex64::new(a_scale * z.re + profile.f(z.im), z.im / a_scale)
            }
        }
    }

    /// `phi_z = (phi_x - i phi_y) / 2`.
    pub fn phi_z(&self, z: Complex64) -> Complex64 {
        match self.family {
            MapFamily::Ellipse { a, b } => Complex64::new(a / (a * a - b * b), 0.0),
            MapFamily::RosePetal => {
                // (3/2) z^{1/2} conj(z)^{-1/2} / sqrt(2)
                let t = z.arg();
                Complex64::from_polar(1.5 / SQRT_2, t)
            }
            MapFamily::Cusp => {
                // (3/4) z^{-5/8} conj(z)^{-1/8}
                let (r, t) = z.to_polar();
                Complex64::from_polar(0.75 * r.powf(-0.75), -0.5 * t)
            }
            MapFamily::Shear { profile, a_scale } => Complex64::new(
                0.5 * (a_scale + 1.0 / a_scale),
                -0.5 * profile.f_prime(z.im),
            ),
        }
    }

    /// `phi_zbar = (phi_x + i phi_y) / 2`.
    pub fn phi_zbar(&self, z: Complex64) -> Complex64 {
        match self.family {
            MapFamily::Ellipse { a, b } => Complex64::new(-b / (a * a - b * b), 0.0),
            MapFamily::RosePetal => {
                // -(1/2) z^{3/2} conj(z)^{-3/2} / sqrt(2)
                let t = z.arg();
                Complex64::from_polar(-0.5 / SQRT_2, 3.0 * t)
            }
            MapFamily::Cusp => {
                // -(1/4) z^{3/8} conj(z)^{-9/8}
                let (r, t) = z.to_polar();
                Complex64::from_polar(-0.25 * r.powf(-0.75), 1.5 * t)
            }
            MapFamily::Shear { profile, a_scale } => Complex64::new(
                0.5 * (a_scale - 1.0 / a_scale),
                0.5 * profile.f_prime(z.im),
            ),
        }
    }

    /// Stored closed form of `J(z, phi)`.
    pub fn jacobian(&self, z: Complex64) -> f64 {
        match self.family {
            MapFamily::Ellipse { a, b } => 1.0 / (a * a - b * b),
            MapFamily::RosePetal | MapFamily::Shear { .. } => 1.0,
            MapFamily::Cusp => 0.5 * z.norm().powf(-1.5),
        }
    }

    /// Complex dilatation `mu = phi_zbar / phi_z`.
    pub fn mu(&self, z: Complex64) -> Complex64 {
        match self.family {
            MapFamily::Ellipse { a, b } => Complex64::new(-b / a, 0.0),
            MapFamily::RosePetal | MapFamily::Cusp => {
                // -(1/3) z / conj(z)
                Complex64::from_polar(-1.0 / 3.0, 2.0 * z.arg())
            }
            MapFamily::Shear { .. } => self.phi_zbar(z) / self.phi_z(z),
        }
    }

    /// Second complex dilatation `nu = phi_zbar / conj(phi_z)`.
    pub fn second_dilatation(&self, z: Complex64) -> Complex64 {
        self.phi_zbar(z) / self.phi_z(z).conj()
    }

    /// Real differential `[[u_x, u_y], [v_x, v_y]]`.
    pub fn differential(&self, z: Complex64) -> [[f64; 2]; 2] {
        let p = self.phi_z(z);
        let q = self.phi_zbar(z);
        let phi_x = p + q;
        let phi_y = Complex64::i() * (p - q);
        [[phi_x.re, phi_y.re], [phi_x.im, phi_y.im]]
    }

    /// Largest singular value of the differential, `|phi_z| + |phi_zbar|`.
    pub fn max_stretch(&self, z: Complex64) -> f64 {
        self.phi_z(z).norm() + self.phi_zbar(z).norm()
    }

    /// Local distortion `(|phi_z| + |phi_zbar|)^2 / J`.
    pub fn local_distortion(&self, z: Complex64) -> f64 {
        let s = self.max_stretch(z);
        s * s / self.jacobian(z)
    }

    /// Closed-form inverse `phi^{-1}: D -> Omega`.
    pub fn inverse(&self, w: Complex64) -> Result<Complex64> {
        if w.norm() >= 1.0 {
            return Err(Error::OutsideDisc(format!("{w}")));
        }
        Ok(self.inverse_unchecked(w))
    }

    /// Inverse without the disc check; valid on the closed disc.
    pub fn inverse_unchecked(&self, w: Complex64) -> Complex64 {
        match self.family {
            MapFamily::Ellipse { a, b } => a * w + b * w.conj(),
            MapFamily::RosePetal => {
                let (r, alpha) = (w + 1.0).to_polar();
                Complex64::from_polar(SQRT_2 * r, 0.5 * alpha)
            }
            MapFamily::Cusp => {
                let (s, alpha) = (w + 1.0).to_polar();
                Complex64::from_polar((0.5 * s).powi(4), 2.0 * alpha)
            }
            MapFamily::Shear { profile, a_scale } => {
                let y = a_scale * w.im;
                Complex64::new((w.re - profile.f(y)) / a_scale, y)
            }
        }
    }

    /// `|J(w, phi^{-1})| = 1 / J(phi^{-1}(w), phi)` in closed form.
    pub fn inverse_jacobian_abs(&self, w: Complex64) -> f64 {
        match self.family {
            MapFamily::Ellipse { a, b } => a * a - b * b,
            MapFamily::RosePetal | MapFamily::Shear { .. } => 1.0,
            MapFamily::Cusp => {
                // 2 |z|^{3/2} with |z| = (|w + 1| / 2)^4
                let s = 0.5 * (w + 1.0).norm();
                2.0 * s.powi(6)
            }
        }
    }

    /// `ess sup_{|w| < 1} |J(w, phi^{-1})|`, closed form per family.
    pub fn inverse_jacobian_sup(&self) -> Option<f64> {
        match self.family {
            MapFamily::Ellipse { a, b } => Some(a * a - b * b),
            MapFamily::RosePetal | MapFamily::Shear { .. } => Some(1.0),
            // 2 sup |z|^{3/2} over the cusp domain, attained at z = 1
            MapFamily::Cusp => Some(2.0),
        }
    }
}

/// Dilatation of the inverse map, `mu_{phi^{-1}}(w) = -nu_phi(phi^{-1}(w))`.
pub fn inverse_dilatation(map: &AnalyticQCMap, w: Complex64) -> Result<Complex64> {
    let z = map.inverse(w)?;
    Ok(-map.second_dilatation(z))
}

/// Max of `|phi_z| + |phi_zbar|` over `samples`, for area-preserving maps.
pub fn bilipschitz_check(map: &AnalyticQCMap, samples: &[Complex64]) -> Result<f64> {
    if !map.is_measure_preserving() {
        return Err(Error::NotMeasurePreserving(map.id()));
    }
    Ok(samples
        .iter()
        .map(|&z| map.max_stretch(z))
        .fold(0.0, f64::max))
}

impl fmt::Display for AnalyticQCMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for AnalyticQCMap {
    type Err = Error;

    /// Parses `ellipse:a=2,b=1`, `rose_petal`, `cusp`, `disc`,
    /// `shear:fprime=const1,a=1` or `shear:fprime=cos0.5,a=1`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, args) = match s.split_once(':') {
            Some((h, a)) => (h, a),
            None => (s, ""),
        };
        let mut params: Vec<(&str, &str)> = Vec::new();
        for kv in args.split(',').filter(|p| !p.is_empty()) {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::UnknownMap(format!("{s}: malformed parameter `{kv}`")))?;
            params.push((k.trim(), v.trim()));
        }
        let get = |key: &str| params.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
        let num = |key: &str, default: Option<f64>| -> Result<f64> {
            match get(key) {
                Some(v) => v
                    .parse::<f64>()
                    .map_err(|_| Error::UnknownMap(format!("{s}: `{key}` is not a number"))),
                None => default.ok_or_else(|| Error::UnknownMap(format!("{s}: missing `{key}`"))),
            }
        };
        match head {
            "ellipse" => make_ellipse_map(num("a", None)?, num("b", None)?),
            "disc" | "identity" if args.is_empty() => make_ellipse_map(1.0, 0.0),
            "rose_petal" if args.is_empty() => Ok(make_rose_petal_map()),
            "cusp" if args.is_empty() => Ok(make_cusp_map()),
            "shear" => {
                let a = num("a", Some(1.0))?;
                let fp = get("fprime").unwrap_or("const0");
                let profile = if let Some(v) = fp.strip_prefix("const") {
                    ShearProfile::Linear {
                        slope: v.parse().map_err(|_| Error::UnknownMap(s.to_string()))?,
                    }
                } else if let Some(v) = fp.strip_prefix("cos") {
                    ShearProfile::Cosine {
                        amplitude: v.parse().map_err(|_| Error::UnknownMap(s.to_string()))?,
                    }
                } else {
                    return Err(Error::UnknownMap(format!("{s}: unknown shear profile `{fp}`")));
                };
                make_shear_map(profile, a)
            }
            _ => Err(Error::UnknownMap(s.to_string())),
        }
    }
}

/// The three worked examples: ellipse `(2, 1)`, rose petal and cusp.
pub fn example_maps() -> Vec<AnalyticQCMap> {
    vec![
        make_ellipse_map(2.0, 1.0).expect("valid ellipse"),
        make_rose_petal_map(),
        make_cusp_map(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8};

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn ellipse_example_values() {
        let m = make_ellipse_map(2.0, 1.0).unwrap();
        assert!((m.jacobian(Complex64::new(0.3, -0.2)) - 1.0 / 3.0).abs() < 1e-15);
        assert!(close(m.phi(Complex64::new(3.0, 0.0)), Complex64::new(1.0, 0.0), 1e-15));
        assert!(close(m.mu(Complex64::new(0.1, 0.1)), Complex64::new(-0.5, 0.0), 0.0));
        assert!((m.ellipticity_k() - 3.0).abs() < 1e-15);
    }

    #[test]
    fn identity_ellipse() {
        let m = make_ellipse_map(1.0, 0.0).unwrap();
        let z = Complex64::new(0.3, 0.4);
        assert_eq!(m.phi(z), z);
        assert_eq!(m.jacobian(z), 1.0);
        assert_eq!(m.ellipticity_k(), 1.0);
    }

    #[test]
    fn ellipse_rejects_bad_params() {
        assert!(matches!(make_ellipse_map(1.0, 1.0), Err(Error::InvalidParams(_))));
        assert!(matches!(make_ellipse_map(1.0, -0.5), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn rose_petal_boundary_points() {
        let m = make_rose_petal_map();
        let tip = Complex64::new(2.0 * SQRT_2, 0.0);
        assert!(close(m.phi(tip), Complex64::new(1.0, 0.0), 1e-15));
        let z = Complex64::from_polar(2.0, FRAC_PI_8);
        assert!(close(m.phi(z), Complex64::new(0.0, 1.0), 1e-15));
        assert!((m.jacobian(z) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cusp_values() {
        let m = make_cusp_map();
        assert!((m.jacobian(Complex64::new(0.0, 1.0)) - 0.5).abs() < 1e-15);
        let z = Complex64::from_polar(0.25, FRAC_PI_2);
        assert!(close(m.phi(z), Complex64::new(0.0, 1.0), 1e-15));
        assert_eq!(m.inverse_jacobian_sup(), Some(2.0));
    }

    #[test]
    fn shear_stretch_matches_printed_formula() {
        let lam = shear_stretch(1.0, 1.0);
        let want = 1.5 * (1.0 + 5f64.sqrt() / 3.0);
        assert!((lam - want).abs() < 1e-14);
        assert!((shear_stretch_unit_scale(1.0) - want).abs() < 1e-14);
        for fp in [-3.0, -0.2, 0.0, 0.7, 5.0] {
            assert!((shear_stretch(fp, 1.0) - shear_stretch_unit_scale(fp)).abs() < 1e-12);
        }
        let id = make_shear_map(ShearProfile::Linear { slope: 0.0 }, 1.0).unwrap();
        assert!((id.ellipticity_k() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inverse_dilatation_examples() {
        let m = make_ellipse_map(2.0, 1.0).unwrap();
        let mu = inverse_dilatation(&m, Complex64::new(0.2, 0.3)).unwrap();
        assert!(close(mu, Complex64::new(0.5, 0.0), 1e-15));
        let id = make_ellipse_map(1.0, 0.0).unwrap();
        assert_eq!(inverse_dilatation(&id, Complex64::new(0.1, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
        let p = make_rose_petal_map();
        let mu = inverse_dilatation(&p, Complex64::new(0.5, 0.0)).unwrap();
        assert!((mu.norm() - 1.0 / 3.0).abs() < 1e-15);
        assert!(matches!(
            inverse_dilatation(&p, Complex64::new(1.0, 0.0)),
            Err(Error::OutsideDisc(_))
        ));
    }

    #[test]
    fn bilipschitz_examples() {
        let p = make_rose_petal_map();
        let pts: Vec<Complex64> = (1..20).map(|k| Complex64::from_polar(0.1 * k as f64, 0.03 * k as f64)).collect();
        let r = bilipschitz_check(&p, &pts).unwrap();
        assert!((r - SQRT_2).abs() < 1e-15);
        let s = make_shear_map(ShearProfile::Linear { slope: 1.0 }, 1.0).unwrap();
        let r = bilipschitz_check(&s, &pts).unwrap();
        assert!((r - shear_stretch(1.0, 1.0).sqrt()).abs() < 1e-14);
        assert!(matches!(
            bilipschitz_check(&make_cusp_map(), &pts),
            Err(Error::NotMeasurePreserving(_))
        ));
    }

    #[test]
    fn id_roundtrip() {
        for id in ["ellipse:a=2,b=1", "rose_petal", "cusp", "shear:fprime=const1,a=1", "shear:fprime=cos0.5,a=1.5"] {
            let m: AnalyticQCMap = id.parse().unwrap();
            assert_eq!(m.id(), id);
        }
        assert!(matches!("moebius".parse::<AnalyticQCMap>(), Err(Error::UnknownMap(_))));
        assert!(matches!("ellipse:a=2".parse::<AnalyticQCMap>(), Err(Error::UnknownMap(_))));
    }

    #[test]
    fn inverse_composes_to_identity() {
        for m in example_maps() {
            for k in 0..50 {
                let w = Complex64::from_polar(0.02 * k as f64 + 0.01, 0.37 * k as f64 - FRAC_PI_4);
                let z = m.inverse(w).unwrap();
                assert!(close(m.phi(z), w, 1e-10), "{}: {w}", m.id());
            }
        }
    }
}
