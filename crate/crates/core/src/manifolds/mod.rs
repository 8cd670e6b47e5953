//! Closed-form spectral models: the circle, the flat square torus and the
//! round 2-sphere.

mod basis;
mod cosphere;
mod geodesic;
mod grid;
mod harmonics;
mod levels;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

pub use basis::{BasisEntry, Cutoff, BasisFunction, BasisSample, EigenBasis};
pub use cosphere::{cosphere_quadrature, fiber_nodes, CospherePoint, CosphereQuadrature, FiberNode};
pub use geodesic::{from_ambient, geodesic_flow_sphere, to_ambient};
pub use grid::Grid;
pub use harmonics::LegendreTable;
pub use levels::{basis_dimension, enumerate_levels, levels_through_mu_sq, torus_representatives, SpectralLevel};

use crate::error::{Error, Result};
use crate::tensor::PointTensor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ManifoldKind {
    Circle,
    Torus2,
    Sphere2,
}

impl ManifoldKind {
    pub fn name(self) -> &'static str {
        match self {
            ManifoldKind::Circle => "circle",
            ManifoldKind::Torus2 => "torus2",
            ManifoldKind::Sphere2 => "sphere2",
        }
    }
}

impl fmt::Display for ManifoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ManifoldKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle" | "s1" => Ok(ManifoldKind::Circle),
            "torus2" | "torus" | "t2" => Ok(ManifoldKind::Torus2),
            "sphere2" | "sphere" | "s2" => Ok(ManifoldKind::Sphere2),
            other => Err(Error::Input(format!("unknown model '{other}' (expected circle, torus2 or sphere2)"))),
        }
    }
}

/// A model manifold with its reference metric `g₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ManifoldModel {
    kind: ManifoldKind,
}

impl ManifoldModel {
    pub const CIRCLE: ManifoldModel = ManifoldModel { kind: ManifoldKind::Circle };
    pub const TORUS2: ManifoldModel = ManifoldModel { kind: ManifoldKind::Torus2 };
    pub const SPHERE2: ManifoldModel = ManifoldModel { kind: ManifoldKind::Sphere2 };

    pub fn new(kind: ManifoldKind) -> Self {
        Self { kind }
    }

    pub fn kind(&self) -> ManifoldKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            ManifoldKind::Circle => 1,
            ManifoldKind::Torus2 | ManifoldKind::Sphere2 => 2,
        }
    }

    pub fn volume(&self) -> f64 {
        match self.kind {
            ManifoldKind::Circle => 2.0 * PI,
            ManifoldKind::Torus2 => 4.0 * PI * PI,
            ManifoldKind::Sphere2 => 4.0 * PI,
        }
    }

    /// `Vol(S^{n-1})`: 2 for the circle, 2π in dimension two.
    pub fn fiber_volume(&self) -> f64 {
        match self.dim() {
            1 => 2.0,
            _ => 2.0 * PI,
        }
    }

    /// Total `dS_{g₀}` mass of the unit cosphere bundle.
    pub fn cosphere_volume(&self) -> f64 {
        self.fiber_volume() * self.volume()
    }

    /// Injectivity radius of `g₀` (π for all three models).
    pub fn injectivity_radius(&self) -> f64 {
        PI
    }

    /// `Vol(S^{n-1}) / (n (n+2) (2π)^n)`, the leading coefficient of the
    /// isometry asymptotics.
    pub fn isometry_coefficient(&self) -> f64 {
        let n = self.dim() as f64;
        self.fiber_volume() / (n * (n + 2.0) * (2.0 * PI).powi(self.dim() as i32))
    }

    /// Weyl-law prediction for `d_{≤N}` at frequency `mu`.
    pub fn weyl_count(&self, mu: f64) -> f64 {
        let n = self.dim() as i32;
        let omega = self.fiber_volume() / n as f64;
        omega * self.volume() * mu.powi(n) / (2.0 * PI).powi(n)
    }

    pub fn ensure(&self, kind: ManifoldKind) -> Result<()> {
        if self.kind == kind {
            Ok(())
        } else {
            Err(Error::Unsupported(format!("operation requires {kind}, got {}", self.kind)))
        }
    }
}

impl From<ManifoldKind> for ManifoldModel {
    fn from(kind: ManifoldKind) -> Self {
        Self { kind }
    }
}

/// A point in the model's chart together with `g₀` there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldPoint {
    kind: ManifoldKind,
    coords: [f64; 2],
    g0: PointTensor,
}

impl ManifoldPoint {
    pub fn circle(theta: f64) -> Self {
        Self { kind: ManifoldKind::Circle, coords: [theta, 0.0], g0: PointTensor::identity(1) }
    }

    pub fn torus(x1: f64, x2: f64) -> Self {
        Self { kind: ManifoldKind::Torus2, coords: [x1, x2], g0: PointTensor::identity(2) }
    }

    /// Colatitude `theta ∈ (0, π)`, longitude `phi`.
    pub fn sphere(theta: f64, phi: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < PI) || !phi.is_finite() {
            return Err(Error::Chart(format!("colatitude {theta} outside the open chart (0, π)")));
        }
        let s = theta.sin();
        if s <= 0.0 {
            return Err(Error::Chart(format!("colatitude {theta} is numerically at a pole")));
        }
        Ok(Self { kind: ManifoldKind::Sphere2, coords: [theta, phi], g0: PointTensor::diagonal(2, [1.0, s * s]) })
    }

    pub fn kind(&self) -> ManifoldKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.g0.dim()
    }

    pub fn coords(&self) -> [f64; 2] {
        self.coords
    }

    pub fn g0(&self) -> &PointTensor {
        &self.g0
    }

    /// Unit position vector in R³ (sphere only).
    pub fn ambient(&self) -> Option<[f64; 3]> {
        if self.kind != ManifoldKind::Sphere2 {
            return None;
        }
        let [theta, phi] = self.coords;
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Some([st * cp, st * sp, ct])
    }

    /// Antipodal point on the sphere, `(π − θ, φ + π)`.
    pub fn antipode(&self) -> Option<ManifoldPoint> {
        if self.kind != ManifoldKind::Sphere2 {
            return None;
        }
        ManifoldPoint::sphere(PI - self.coords[0], self.coords[1] + PI).ok()
    }

    /// Chart distance used by the injectivity diagnostic: periodic on the
    /// circle and torus, great-circle distance on the sphere.
    pub fn chart_distance(&self, other: &ManifoldPoint) -> f64 {
        fn wrap(d: f64) -> f64 {
            let r = d.rem_euclid(2.0 * PI);
            r.min(2.0 * PI - r)
        }
        match self.kind {
            ManifoldKind::Circle => wrap(self.coords[0] - other.coords[0]),
            ManifoldKind::Torus2 => {
                wrap(self.coords[0] - other.coords[0]).hypot(wrap(self.coords[1] - other.coords[1]))
            }
            ManifoldKind::Sphere2 => {
                let a = self.ambient().unwrap_or([0.0; 3]);
                let b = other.ambient().unwrap_or([0.0; 3]);
                let dot: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
                let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
                let c = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
                c.atan2(dot)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn volumes() {
        assert_eq!(ManifoldModel::CIRCLE.volume(), 2.0 * PI);
        assert_eq!(ManifoldModel::TORUS2.volume(), 4.0 * PI * PI);
        assert_eq!(ManifoldModel::SPHERE2.volume(), 4.0 * PI);
    }

    #[test]
    fn isometry_coefficients() {
        assert!((ManifoldModel::CIRCLE.isometry_coefficient() - 1.0 / (3.0 * PI)).abs() < 1e-16);
        assert!((ManifoldModel::TORUS2.isometry_coefficient() - 1.0 / (16.0 * PI)).abs() < 1e-16);
        assert!((ManifoldModel::SPHERE2.isometry_coefficient() - 1.0 / (16.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn poles_are_chart_errors() {
        assert!(matches!(ManifoldPoint::sphere(0.0, 1.0), Err(Error::Chart(_))));
        assert!(matches!(ManifoldPoint::sphere(PI, 1.0), Err(Error::Chart(_))));
        assert!(ManifoldPoint::sphere(1e-3, 0.0).is_ok());
    }

    #[test]
    fn parse_kind() {
        assert_eq!("torus2".parse::<ManifoldKind>().unwrap(), ManifoldKind::Torus2);
        assert!("klein".parse::<ManifoldKind>().is_err());
    }

    #[test]
    fn chart_distance_wraps() {
        let a = ManifoldPoint::circle(0.1);
        let b = ManifoldPoint::circle(2.0 * PI - 0.1);
        assert!((a.chart_distance(&b) - 0.2).abs() < 1e-12);
        let n = ManifoldPoint::sphere(0.5, 0.0).unwrap();
        assert!((n.chart_distance(&n.antipode().unwrap()) - PI).abs() < 1e-12);
    }
}
