use super::{ManifoldKind, ManifoldModel, ManifoldPoint};
use crate::error::{Error, Result};
use crate::numerics::{make_quadrature, QuadratureKind};

/// Chart point set with quadrature weights for `dV_{g₀}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    model: ManifoldModel,
    points: Vec<ManifoldPoint>,
    weights: Vec<f64>,
    exact_degree: Option<usize>,
}

impl Grid {
    /// Product rule with `res` nodes per periodic direction (`2·res` in φ
    /// and `res` Gauss–Legendre nodes in `cos θ` on the sphere).
    pub fn product(model: ManifoldModel, res: usize) -> Result<Self> {
        match model.kind() {
            ManifoldKind::Sphere2 => Self::tensor(model, [res, 2 * res], 0.0),
            _ => Self::tensor(model, [res, res], 0.0),
        }
    }

    /// Like [`Grid::product`] with the periodic coordinates shifted by `shift`.
    pub fn product_shifted(model: ManifoldModel, res: usize, shift: f64) -> Result<Self> {
        match model.kind() {
            ManifoldKind::Sphere2 => Self::tensor(model, [res, 2 * res], shift),
            _ => Self::tensor(model, [res, res], shift),
        }
    }

    /// `res[0]` nodes in the first chart direction, `res[1]` in the second
    /// (ignored on the circle).
    pub fn tensor(model: ManifoldModel, res: [usize; 2], shift: f64) -> Result<Self> {
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let exact = match model.kind() {
            ManifoldKind::Circle => {
                let q = make_quadrature(QuadratureKind::PeriodicTrapezoid, res[0])?;
                for (t, w) in q.nodes.iter().zip(&q.weights) {
                    points.push(ManifoldPoint::circle(t + shift));
                    weights.push(*w);
                }
                q.exact_degree()
            }
            ManifoldKind::Torus2 => {
                let q1 = make_quadrature(QuadratureKind::PeriodicTrapezoid, res[0])?;
                let q2 = make_quadrature(QuadratureKind::PeriodicTrapezoid, res[1])?;
                for (a, wa) in q1.nodes.iter().zip(&q1.weights) {
                    for (b, wb) in q2.nodes.iter().zip(&q2.weights) {
                        points.push(ManifoldPoint::torus(a + shift, b + shift));
                        weights.push(wa * wb);
                    }
                }
                q1.exact_degree().min(q2.exact_degree())
            }
            ManifoldKind::Sphere2 => {
                let qz = make_quadrature(QuadratureKind::GaussLegendre, res[0])?;
                let qp = make_quadrature(QuadratureKind::PeriodicTrapezoid, res[1])?;
                for (z, wz) in qz.nodes.iter().zip(&qz.weights) {
                    let theta = z.acos();
                    for (phi, wp) in qp.nodes.iter().zip(&qp.weights) {
                        points.push(ManifoldPoint::sphere(theta, phi + shift)?);
                        weights.push(wz * wp);
                    }
                }
                qz.exact_degree().min(qp.exact_degree())
            }
        };
        Ok(Self { model, points, weights, exact_degree: Some(exact) })
    }

    /// Arbitrary sample points with equal weights summing to the volume.
    pub fn from_points(model: ManifoldModel, points: Vec<ManifoldPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("grid needs at least one point".into()));
        }
        if let Some(p) = points.iter().find(|p| p.kind() != model.kind()) {
            return Err(Error::Chart(format!("{} point in a {} grid", p.kind(), model.kind())));
        }
        let w = model.volume() / points.len() as f64;
        let weights = vec![w; points.len()];
        Ok(Self { model, points, weights, exact_degree: None })
    }

    pub fn model(&self) -> ManifoldModel {
        self.model
    }

    pub fn points(&self) -> &[ManifoldPoint] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Exactness degree: trigonometric degree per coordinate on the circle
    /// and torus, polynomial degree in the ambient coordinates on the sphere.
    /// `None` for unstructured point sets.
    pub fn exact_degree(&self) -> Option<usize> {
        self.exact_degree
    }

    pub fn integrate(&self, f: impl Fn(&ManifoldPoint) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(p, w)| w * f(p)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_volume() {
        for model in [ManifoldModel::CIRCLE, ManifoldModel::TORUS2, ManifoldModel::SPHERE2] {
            let g = Grid::product(model, 12).unwrap();
            let s: f64 = g.weights().iter().sum();
            assert!((s - model.volume()).abs() < 1e-12 * model.volume());
        }
    }

    #[test]
    fn sphere_grid_integrates_z_squared() {
        let g = Grid::product(ManifoldModel::SPHERE2, 4).unwrap();
        let v = g.integrate(|p| p.ambient().unwrap()[2].powi(2));
        assert!((v - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-13);
    }
}
