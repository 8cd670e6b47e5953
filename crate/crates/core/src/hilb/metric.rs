use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::manifolds::ManifoldPoint;
use crate::operators::ScalarField;
use crate::tensor::PointTensor;

#[derive(Clone, Debug)]
pub enum MetricKind {
    Reference,
    /// `g = e^u g₀`.
    Conformal(ScalarField),
    General,
}

/// A Riemannian metric given by its chart matrix at each point.
#[derive(Clone)]
pub struct MetricField {
    eval: Arc<dyn Fn(&ManifoldPoint) -> PointTensor + Send + Sync>,
    kind: MetricKind,
    label: String,
}

impl MetricField {
    pub fn reference() -> Self {
        Self { eval: Arc::new(|p: &ManifoldPoint| *p.g0()), kind: MetricKind::Reference, label: "reference".into() }
    }

    pub fn conformal(u: ScalarField) -> Self {
        let uu = u.clone();
        let label = format!("conformal:u={}", u.label());
        Self { eval: Arc::new(move |p: &ManifoldPoint| *p.g0() * uu.eval(p).exp()), kind: MetricKind::Conformal(u), label }
    }

    /// `diag(e^{a(x)}, e^{b(x)})` in the torus chart.
    pub fn diagonal_exponential(label: impl Into<String>, a: ScalarField, b: ScalarField) -> Self {
        Self::general(label, move |p: &ManifoldPoint| {
            PointTensor::diagonal(p.dim(), [a.eval(p).exp(), b.eval(p).exp()])
        })
    }

    pub fn general(label: impl Into<String>, f: impl Fn(&ManifoldPoint) -> PointTensor + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(f), kind: MetricKind::General, label: label.into() }
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Fiber-independent Hilb symbol: reference, conformal, or any metric on the circle.
    pub fn is_conformal_on(&self, dim: usize) -> bool {
        dim == 1 || matches!(self.kind, MetricKind::Reference | MetricKind::Conformal(_))
    }

    /// `g(x)`; fails if it is not positive-definite.
    pub fn eval(&self, p: &ManifoldPoint) -> Result<PointTensor> {
        let g = (self.eval)(p).symmetrized();
        if g.dim() != p.dim() {
            return Err(Error::Dimension { expected: p.dim(), got: g.dim() });
        }
        match g.min_eigenvalue_wrt(p.g0()) {
            Some(m) if m > 0.0 && g.is_finite() => Ok(g),
            m => Err(Error::NotSpd { min_eigenvalue: m.unwrap_or(f64::NAN) }),
        }
    }

    /// `dV_{g₀}/dV_g = √(det g₀ / det g)`.
    pub fn det_ratio(&self, p: &ManifoldPoint) -> Result<f64> {
        let g = self.eval(p)?;
        Ok((p.g0().det() / g.det()).sqrt())
    }

    pub fn inverse(&self, p: &ManifoldPoint) -> Result<PointTensor> {
        let g = self.eval(p)?;
        g.inverse().ok_or(Error::Singular(g.det()))
    }
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField").field("label", &self.label).field("kind", &self.kind).finish()
    }
}
