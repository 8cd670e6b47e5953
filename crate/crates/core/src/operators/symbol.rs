use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::manifolds::{fiber_nodes, ManifoldPoint};

/// A real function on the manifold.
#[derive(Clone)]
pub struct ScalarField {
    f: Arc<dyn Fn(&ManifoldPoint) -> f64 + Send + Sync>,
    bandwidth: Option<usize>,
    label: String,
}

impl ScalarField {
    /// A smooth field that is not band-limited.
    pub fn new(label: impl Into<String>, f: impl Fn(&ManifoldPoint) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), bandwidth: None, label: label.into() }
    }

    /// A trigonometric (circle, torus) or ambient polynomial (sphere) field of
    /// the given degree; products with it are then integrated exactly.
    pub fn band_limited(
        label: impl Into<String>,
        degree: usize,
        f: impl Fn(&ManifoldPoint) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { f: Arc::new(f), bandwidth: Some(degree), label: label.into() }
    }

    pub fn constant(c: f64) -> Self {
        Self::band_limited(format!("{c}"), 0, move |_| c)
    }

    #[inline]
    pub fn eval(&self, p: &ManifoldPoint) -> f64 {
        (self.f)(p)
    }

    pub fn bandwidth(&self) -> Option<usize> {
        self.bandwidth
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ScalarField").field("label", &self.label).field("bandwidth", &self.bandwidth).finish()
    }
}

/// An order-zero symbol `b(x, ξ)` on the unit cosphere bundle.
///
/// `eval` receives a `g₀`-unit covector; [`Symbol::eval_homogeneous`] extends
/// 0-homogeneously to nonzero covectors.
pub trait Symbol: Send + Sync {
    fn eval(&self, p: &ManifoldPoint, xi: [f64; 2]) -> f64;

    /// Batch evaluation at many base points for one covector `xi` (unit at
    /// every point, which holds on the flat models).
    fn eval_positions(&self, points: &[ManifoldPoint], xi: [f64; 2], out: &mut [f64]) {
        for (o, p) in out.iter_mut().zip(points) {
            *o = self.eval(p, xi);
        }
    }

    fn is_fiber_independent(&self) -> bool {
        false
    }

    fn is_position_independent(&self) -> bool {
        false
    }

    /// `(1/Vol(S^{n-1})) ∫_{S*_x} b dS`, with `res` fiber nodes in dimension two.
    fn fiber_average(&self, p: &ManifoldPoint, res: usize) -> Result<f64> {
        let nodes = fiber_nodes(p, res)?;
        let total: f64 = nodes.iter().map(|n| n.weight).sum();
        Ok(nodes.iter().map(|n| n.weight * self.eval(p, n.xi)).sum::<f64>() / total)
    }

    fn eval_homogeneous(&self, p: &ManifoldPoint, xi: [f64; 2]) -> Result<f64> {
        let inv = p.g0().inverse().expect("g0 is invertible");
        let norm = inv.quad_form(&xi[..p.dim()]).sqrt();
        if !(norm > 0.0) {
            return Err(Error::Input("symbol evaluated at the zero covector".into()));
        }
        Ok(self.eval(p, [xi[0] / norm, xi[1] / norm]))
    }
}

/// `b(x, ξ) = a(x)`.
#[derive(Debug, Clone)]
pub struct MultiplicationSymbol(pub ScalarField);

impl Symbol for MultiplicationSymbol {
    fn eval(&self, p: &ManifoldPoint, _xi: [f64; 2]) -> f64 {
        self.0.eval(p)
    }

    fn is_fiber_independent(&self) -> bool {
        true
    }

    fn is_position_independent(&self) -> bool {
        self.0.bandwidth() == Some(0)
    }

    fn fiber_average(&self, p: &ManifoldPoint, _res: usize) -> Result<f64> {
        Ok(self.0.eval(p))
    }
}

/// A symbol given by a closure, with optional structure flags.
#[derive(Clone)]
pub struct FnSymbol {
    f: Arc<dyn Fn(&ManifoldPoint, [f64; 2]) -> f64 + Send + Sync>,
    fiber_independent: bool,
    position_independent: bool,
}

impl FnSymbol {
    pub fn new(f: impl Fn(&ManifoldPoint, [f64; 2]) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f), fiber_independent: false, position_independent: false }
    }

    /// A Fourier multiplier `b(ξ)`.
    pub fn multiplier(f: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(move |_, xi| f(xi)), fiber_independent: false, position_independent: true }
    }
}

impl fmt::Debug for FnSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnSymbol")
            .field("fiber_independent", &self.fiber_independent)
            .field("position_independent", &self.position_independent)
            .finish()
    }
}

impl Symbol for FnSymbol {
    fn eval(&self, p: &ManifoldPoint, xi: [f64; 2]) -> f64 {
        (self.f)(p, xi)
    }

    fn is_fiber_independent(&self) -> bool {
        self.fiber_independent
    }

    fn is_position_independent(&self) -> bool {
        self.position_independent
    }
}

/// Pointwise product of symbols.
pub struct ProductSymbol<'a>(pub Vec<&'a dyn Symbol>);

impl Symbol for ProductSymbol<'_> {
    fn eval(&self, p: &ManifoldPoint, xi: [f64; 2]) -> f64 {
        self.0.iter().map(|s| s.eval(p, xi)).product()
    }

    fn is_fiber_independent(&self) -> bool {
        self.0.iter().all(|s| s.is_fiber_independent())
    }

    fn is_position_independent(&self) -> bool {
        self.0.iter().all(|s| s.is_position_independent())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_extension() {
        let s = FnSymbol::multiplier(|xi| xi[0] * xi[0]);
        let p = ManifoldPoint::torus(0.0, 0.0);
        assert!((s.eval_homogeneous(&p, [3.0, 4.0]).unwrap() - 9.0 / 25.0).abs() < 1e-15);
        assert!(s.eval_homogeneous(&p, [0.0, 0.0]).is_err());
    }

    #[test]
    fn fiber_average_of_xi1_squared() {
        let s = FnSymbol::multiplier(|xi| xi[0] * xi[0]);
        let avg = s.fiber_average(&ManifoldPoint::torus(1.0, 2.0), 16).unwrap();
        assert!((avg - 0.5).abs() < 1e-15);
    }
}
