use crate::error::{Error, Result};
use crate::manifolds::ManifoldPoint;
use crate::tensor::PointTensor;

/// A symmetric covariant 2-tensor sampled on a list of points.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor2Field {
    points: Vec<ManifoldPoint>,
    values: Vec<PointTensor>,
}

impl Tensor2Field {
    /// Values are symmetrized; non-finite values are rejected.
    pub fn new(points: Vec<ManifoldPoint>, values: Vec<PointTensor>) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::Dimension { expected: points.len(), got: values.len() });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("tensor field has non-finite values".into()));
        }
        let values = values.iter().map(PointTensor::symmetrized).collect();
        Ok(Self { points, values })
    }

    pub fn from_fn(points: &[ManifoldPoint], f: impl Fn(&ManifoldPoint) -> PointTensor) -> Result<Self> {
        let values = points.iter().map(&f).collect();
        Self::new(points.to_vec(), values)
    }

    pub fn zeros(points: &[ManifoldPoint]) -> Self {
        let values = points.iter().map(|p| PointTensor::zero(p.dim())).collect();
        Self { points: points.to_vec(), values }
    }

    pub fn points(&self) -> &[ManifoldPoint] {
        &self.points
    }

    pub fn values(&self) -> &[PointTensor] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { points: self.points.clone(), values: self.values.iter().map(|v| *v * c).collect() }
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.points != other.points {
            return Err(Error::Input("tensor fields live on different grids".into()));
        }
        Ok(())
    }

    /// `α·self + β·other`.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| *a * alpha + *b * beta).collect();
        Ok(Self { points: self.points.clone(), values })
    }

    /// Pointwise `g₀`-operator norms.
    pub fn norms(&self) -> Vec<f64> {
        self.points.iter().zip(&self.values).map(|(p, v)| v.norm_wrt(p.g0())).collect()
    }

    /// `sup_p ‖T(p)‖_{g₀}`.
    pub fn sup_norm(&self) -> f64 {
        self.norms().into_iter().fold(0.0, f64::max)
    }

    /// `sup_p ‖T(p) − R(p)‖ / ‖R(p)‖`.
    pub fn sup_relative_error(&self, reference: &Self) -> Result<f64> {
        self.check_same_grid(reference)?;
        let mut worst = 0.0f64;
        for ((p, a), b) in self.points.iter().zip(&self.values).zip(&reference.values) {
            let denom = b.norm_wrt(p.g0());
            if !(denom > 0.0) {
                return Err(Error::Input("reference field vanishes at a grid point".into()));
            }
            worst = worst.max((*a - *b).norm_wrt(p.g0()) / denom);
        }
        Ok(worst)
    }

    /// `sup_p ‖T(p) − R(p)‖ / sup_p ‖R(p)‖`; usable where `R` vanishes somewhere.
    pub fn sup_normalized_error(&self, reference: &Self) -> Result<f64> {
        self.check_same_grid(reference)?;
        let diff = self.combine(1.0, reference, -1.0)?;
        let denom = reference.sup_norm();
        if !(denom > 0.0) {
            return Err(Error::Input("reference field vanishes at a grid point".into()));
        }
        Ok(diff.sup_norm() / denom)
    }

    /// Weighted L² relative error `(Σ w‖T−R‖²)^{1/2} / (Σ w‖R‖²)^{1/2}`.
    pub fn l2_relative_error(&self, reference: &Self, weights: &[f64]) -> Result<f64> {
        self.check_same_grid(reference)?;
        if weights.len() != self.len() {
            return Err(Error::Dimension { expected: self.len(), got: weights.len() });
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for (((p, a), b), w) in self.points.iter().zip(&self.values).zip(&reference.values).zip(weights) {
            num += w * (*a - *b).norm_wrt(p.g0()).powi(2);
            den += w * b.norm_wrt(p.g0()).powi(2);
        }
        if !(den > 0.0) {
            return Err(Error::Input("reference field is identically zero".into()));
        }
        Ok((num / den).sqrt())
    }

    /// Smallest eigenvalue relative to `g₀` over all points.
    pub fn min_eigenvalue(&self) -> f64 {
        self.points
            .iter()
            .zip(&self.values)
            .map(|(p, v)| v.min_eigenvalue_wrt(p.g0()).unwrap_or(f64::NAN))
            .fold(f64::INFINITY, f64::min)
    }
}
