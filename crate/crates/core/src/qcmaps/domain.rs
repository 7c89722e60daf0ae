//! Star-shaped planar domains described by a polar boundary `theta -> rho(theta)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI, SQRT_2};

use super::ShearProfile;
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre_on, PlanarRule};

/// Number of Simpson intervals used for the boundary area integral.
const AREA_INTERVALS: usize = 10_000;
/// Number of boundary samples used for the diameter and convexity scans.
const SCAN_SAMPLES: usize = 2048;

/// Boundary curve in polar form about the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "curve", rename_all = "snake_case")]
pub enum PolarCurve {
    /// `rho = 2*sqrt(2)*cos(2 theta)`, `|theta| <= pi/4`.
    RosePetal,
    /// `rho = cos^4(theta/2)`, `|theta| <= pi`.
    Cusp,
    /// Axis-aligned square of the given half side centred at the origin.
    Square { half_side: f64 },
    /// Preimage of the unit disc under a shear map.
    Sheared { a_scale: f64, profile: ShearProfile },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum DomainShape {
    /// Ellipse centred at the origin with semi-axes along x and y.
    Ellipse { semi_x: f64, semi_y: f64 },
    Polar(PolarCurve),
}

/// A planar domain together with its area `|Omega|` and diameter `d(Omega)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub shape: DomainShape,
    pub area: f64,
    pub diameter: f64,
}

impl DomainSpec {
    pub fn ellipse(semi_x: f64, semi_y: f64) -> Result<Self> {
        if !(semi_x > 0.0 && semi_y > 0.0) {
            return Err(Error::InvalidParams(format!(
                "ellipse semi-axes must be positive, got ({semi_x}, {semi_y})"
            )));
        }
        Ok(Self {
            shape: DomainShape::Ellipse { semi_x, semi_y },
            area: PI * semi_x * semi_y,
            diameter: 2.0 * semi_x.max(semi_y),
        })
    }

    pub fn unit_disc() -> Self {
        Self::ellipse(1.0, 1.0).expect("unit disc")
    }

    pub fn rose_petal() -> Self {
        Self::from_polar(PolarCurve::RosePetal)
    }

    pub fn cusp() -> Self {
        Self::from_polar(PolarCurve::Cusp)
    }

    pub fn square(side: f64) -> Result<Self> {
        if side <= 0.0 {
            return Err(Error::InvalidParams(format!("square side {side} must be positive")));
        }
        Ok(Self::from_polar(PolarCurve::Square { half_side: 0.5 * side }))
    }

    pub fn sheared(a_scale: f64, profile: ShearProfile) -> Result<Self> {
        let curve = PolarCurve::Sheared { a_scale, profile };
        // the level set must be reachable along every ray exactly once
        let (lo, hi) = curve.theta_range();
        for k in 0..256 {
            let theta = lo + (hi - lo) * (k as f64 + 0.5) / 256.0;
            sheared_radius(a_scale, profile, theta)?;
        }
        Ok(Self::from_polar(curve))
    }

    fn from_polar(curve: PolarCurve) -> Self {
        let mut spec = Self {
            shape: DomainShape::Polar(curve),
            area: 0.0,
            diameter: 0.0,
        };
        spec.area = spec.simpson_area(AREA_INTERVALS);
        spec.diameter = spec.scan_diameter(SCAN_SAMPLES);
        spec
    }

    /// Short human-readable name.
    pub fn name(&self) -> String {
        match &self.shape {
            DomainShape::Ellipse { semi_x, semi_y } if semi_x == semi_y => {
                format!("disc(r={semi_x})")
            }
            DomainShape::Ellipse { semi_x, semi_y } => format!("ellipse({semi_x},{semi_y})"),
            DomainShape::Polar(PolarCurve::RosePetal) => "rose_petal".into(),
            DomainShape::Polar(PolarCurve::Cusp) => "cusp".into(),
            DomainShape::Polar(PolarCurve::Square { half_side }) => {
                format!("square({})", 2.0 * half_side)
            }
            DomainShape::Polar(PolarCurve::Sheared { .. }) => "sheared_disc".into(),
        }
    }

    /// Angular parameter range of the boundary.
    pub fn theta_range(&self) -> (f64, f64) {
        match &self.shape {
            DomainShape::Ellipse { .. } => (-PI, PI),
            DomainShape::Polar(c) => c.theta_range(),
        }
    }

    /// True when the angular range wraps the full circle around an interior pole.
    pub fn is_periodic(&self) -> bool {
        !self.pole_on_boundary()
    }

    /// True when the polar origin is itself a boundary point (petal tip, cusp).
    pub fn pole_on_boundary(&self) -> bool {
        matches!(
            self.shape,
            DomainShape::Polar(PolarCurve::RosePetal) | DomainShape::Polar(PolarCurve::Cusp)
        )
    }

    /// Exponent `p` of the radial parametrisation `r = s^p rho(theta)` used for
    /// quadrature and meshing. Only the cusp needs grading towards its tip.
    pub fn radial_grading(&self) -> f64 {
        match self.shape {
            DomainShape::Polar(PolarCurve::Cusp) => 4.0,
            _ => 1.0,
        }
    }

    /// Boundary radius in direction `theta`.
    pub fn rho(&self, theta: f64) -> f64 {
        match &self.shape {
            DomainShape::Ellipse { semi_x, semi_y } => {
                let (s, c) = theta.sin_cos();
                1.0 / ((c / semi_x).powi(2) + (s / semi_y).powi(2)).sqrt()
            }
            DomainShape::Polar(curve) => curve.rho(theta),
        }
    }

    pub fn boundary_point(&self, theta: f64) -> Complex64 {
        Complex64::from_polar(self.rho(theta), theta)
    }

    /// Point-in-domain test through the polar description.
    pub fn contains(&self, z: Complex64) -> bool {
        let r = z.norm();
        if r == 0.0 {
            return !self.pole_on_boundary();
        }
        let theta = z.arg();
        let (lo, hi) = self.theta_range();
        if theta < lo || theta > hi {
            return false;
        }
        r < self.rho(theta)
    }

    /// Composite Simpson evaluation of `1/2 int rho^2 dtheta`.
    pub fn simpson_area(&self, intervals: usize) -> f64 {
        let n = intervals + intervals % 2;
        let (lo, hi) = self.theta_range();
        let h = (hi - lo) / n as f64;
        let mut acc = crate::quadrature::CompensatedSum::new();
        for k in 0..=n {
            let w = if k == 0 || k == n {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let r = self.rho(lo + k as f64 * h);
            acc.add(w * r * r);
        }
        0.5 * acc.value() * h / 3.0
    }

    fn boundary_samples(&self, n: usize) -> Vec<Complex64> {
        let (lo, hi) = self.theta_range();
        let mut pts: Vec<Complex64> = (0..n)
            .map(|k| self.boundary_point(lo + (hi - lo) * k as f64 / n as f64))
            .collect();
        if self.pole_on_boundary() {
            pts.push(self.boundary_point(hi));
            pts.push(Complex64::new(0.0, 0.0));
        }
        pts
    }

    fn scan_diameter(&self, n: usize) -> f64 {
        let pts = self.boundary_samples(n);
        let mut best = 0.0f64;
        for (i, p) in pts.iter().enumerate() {
            for q in &pts[i + 1..] {
                best = best.max((p - q).norm());
            }
        }
        best
    }

    /// Convexity test on a boundary polygon of `SCAN_SAMPLES` vertices: the
    /// total absolute turning of a convex polygon is exactly `2 pi`.
    ///
    /// Turning angles are scale free, so a cusp at a vertex of vanishing edge
    /// length is still seen.
    pub fn is_convex(&self) -> bool {
        let mut pts = self.boundary_samples(SCAN_SAMPLES);
        pts.dedup_by(|a, b| (*a - *b).norm() == 0.0);
        let n = pts.len();
        let mut total = 0.0;
        for i in 0..n {
            let a = pts[i];
            let b = pts[(i + 1) % n];
            let c = pts[(i + 2) % n];
            let u = b - a;
            let v = c - b;
            let cross = u.re * v.im - u.im * v.re;
            let dot = u.re * v.re + u.im * v.im;
            total += cross.atan2(dot).abs();
        }
        total <= 2.0 * PI * (1.0 + 1e-6)
    }

    /// Radius of the disc with the same area, `R_*`.
    pub fn equal_area_radius(&self) -> f64 {
        (self.area / PI).sqrt()
    }

    /// Tensor Gauss–Legendre rule on the domain in graded polar coordinates
    /// `z = s^p rho(theta) e^{i theta}`, `n_radial` nodes in `s`, `n_angular`
    /// nodes in `theta` (trapezoid for periodic domains).
    ///
    /// The boundary is exact; no polygonal approximation is involved.
    pub fn polar_rule(&self, n_radial: usize, n_angular: usize) -> PlanarRule {
        let p = self.radial_grading();
        let radial = gauss_legendre_on(n_radial, 0.0, 1.0);
        let (lo, hi) = self.theta_range();
        let angular: Vec<(f64, f64)> = if self.is_periodic() {
            let h = (hi - lo) / n_angular as f64;
            (0..n_angular).map(|j| (lo + (j as f64 + 0.5) * h, h)).collect()
        } else {
            gauss_legendre_on(n_angular, lo, hi)
        };
        let mut points = Vec::with_capacity(n_radial * n_angular);
        for &(theta, wt) in &angular {
            let rho = self.rho(theta);
            let e = Complex64::from_polar(1.0, theta);
            for &(s, ws) in &radial {
                let sp = s.powf(p);
                // d(area) = r dr dtheta, r = s^p rho, dr = p s^{p-1} rho ds
                let jac = p * sp * sp / s * rho * rho;
                points.push((e * (sp * rho), ws * wt * jac));
            }
        }
        PlanarRule { points }
    }
}

impl PolarCurve {
    pub fn theta_range(&self) -> (f64, f64) {
        match self {
            PolarCurve::RosePetal => (-FRAC_PI_4, FRAC_PI_4),
            _ => (-PI, PI),
        }
    }

    pub fn rho(&self, theta: f64) -> f64 {
        match *self {
            PolarCurve::RosePetal => (2.0 * SQRT_2 * (2.0 * theta).cos()).max(0.0),
            PolarCurve::Cusp => (0.5 * theta).cos().powi(4),
            PolarCurve::Square { half_side } => {
                let (s, c) = theta.sin_cos();
                half_side / c.abs().max(s.abs())
            }
            PolarCurve::Sheared { a_scale, profile } => {
                sheared_radius(a_scale, profile, theta).unwrap_or(f64::NAN)
            }
        }
    }
}

/// Distance from the origin to `{|phi| = 1}` along the ray at angle `theta`,
/// where `phi(x, y) = (a x + f(y), y / a)`.
fn sheared_radius(a: f64, profile: ShearProfile, theta: f64) -> Result<f64> {
    let (s, c) = theta.sin_cos();
    if let ShearProfile::Linear { slope } = profile {
        let u = a * c + slope * s;
        let v = s / a;
        return Ok(1.0 / (u * u + v * v).sqrt());
    }
    let modulus = |r: f64| {
        let (x, y) = (r * c, r * s);
        let u = a * x + profile.f(y);
        let v = y / a;
        (u * u + v * v).sqrt()
    };
    // bracket the first crossing, then make sure the ray never re-enters
    let step = 1e-2 * a.min(1.0 / a);
    let mut r0 = 0.0;
    let mut r1 = step;
    while modulus(r1) < 1.0 {
        r0 = r1;
        r1 += step;
        if r1 > 1e3 {
            return Err(Error::DegenerateBoundary("shear level set is unbounded".into()));
        }
    }
    for k in 1..=200 {
        if modulus(r1 + k as f64 * step) < 1.0 {
            return Err(Error::DegenerateBoundary(format!(
                "sheared disc is not star-shaped about the origin (theta = {theta})"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (r0 + r1);
        if modulus(mid) < 1.0 {
            r0 = mid;
        } else {
            r1 = mid;
        }
        if r1 - r0 <= 1e-15 * r1 {
            break;
        }
    }
    Ok(0.5 * (r0 + r1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ellipse_exact_measures() {
        let d = DomainSpec::ellipse(3.0, 1.0).unwrap();
        assert!((d.area - 3.0 * PI).abs() < 1e-14);
        assert_eq!(d.diameter, 6.0);
        assert!((d.simpson_area(AREA_INTERVALS) / d.area - 1.0).abs() < 1e-8);
        assert!(d.is_convex());
    }

    #[test]
    fn petal_area_and_diameter() {
        // 1/2 int_{-pi/4}^{pi/4} 8 cos^2(2 theta) = pi
        let d = DomainSpec::rose_petal();
        assert!((d.area / PI - 1.0).abs() < 1e-8, "{}", d.area);
        assert!((d.diameter - 2.0 * SQRT_2).abs() < 1e-12);
        assert!(d.is_convex());
    }

    #[test]
    fn cusp_area_matches_cos8_mean() {
        // mean of cos^8 over a period is 35/128
        let d = DomainSpec::cusp();
        assert!((d.area / (35.0 * PI / 128.0) - 1.0).abs() < 1e-8);
        assert!(!d.is_convex());
    }

    #[test]
    fn square_measures() {
        let d = DomainSpec::square(1.0).unwrap();
        assert!((d.area - 1.0).abs() < 1e-8);
        assert!((d.diameter - SQRT_2).abs() < 1e-12);
        assert!(d.is_convex());
    }

    #[test]
    fn polar_rule_reproduces_area() {
        for d in [DomainSpec::rose_petal(), DomainSpec::cusp(), DomainSpec::ellipse(3.0, 1.0).unwrap()] {
            let a = d.polar_rule(24, 96).integrate(|_| 1.0);
            assert!((a / d.area - 1.0).abs() < 1e-8, "{}: {a} vs {}", d.name(), d.area);
        }
    }

    #[test]
    fn contains_matches_boundary() {
        let d = DomainSpec::cusp();
        assert!(d.contains(Complex64::new(0.5, 0.0)));
        assert!(!d.contains(Complex64::new(-0.01, 0.0)));
        assert!(!d.contains(Complex64::new(1.01, 0.0)));
    }

    #[test]
    fn sheared_linear_is_ellipse_of_area_pi() {
        let d = DomainSpec::sheared(1.0, ShearProfile::Linear { slope: 1.0 }).unwrap();
        assert!((d.area / PI - 1.0).abs() < 1e-8);
        assert!(d.is_convex());
    }
}
