//! The metric induced on the space of metrics by `Hilb_N`: the finite-N
//! symmetric-space norm, its closed-form limit, and Szegő traces.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::hilb::{hilb_constant, hilb_n, hilb_symbol, MetricField};
use crate::manifolds::{CosphereQuadrature, EigenBasis, ManifoldKind, ManifoldModel, ManifoldPoint};
use crate::numerics::{Cholesky, DenseMatrix};
use crate::operators::{assemble_symbol, KnOptions, OperatorMatrix, Provenance, Symbol};
use crate::tensor::PointTensor;

/// A tangent vector `ġ` to the space of metrics: a symmetric 2-tensor field.
#[derive(Clone)]
pub struct MetricPerturbation {
    eval: Arc<dyn Fn(&ManifoldPoint) -> PointTensor + Send + Sync>,
    label: String,
}

impl MetricPerturbation {
    pub fn new(label: impl Into<String>, f: impl Fn(&ManifoldPoint) -> PointTensor + Send + Sync + 'static) -> Self {
        Self { eval: Arc::new(f), label: label.into() }
    }

    pub fn zero() -> Self {
        Self::new("zero", |p: &ManifoldPoint| PointTensor::zero(p.dim()))
    }

    /// `φ(x)·g₀`.
    pub fn conformal(label: impl Into<String>, phi: impl Fn(&ManifoldPoint) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(label, move |p: &ManifoldPoint| *p.g0() * phi(p))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, p: &ManifoldPoint) -> PointTensor {
        (self.eval)(p).symmetrized()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let inner = self.clone();
        Self::new(format!("{alpha}*{}", self.label), move |p: &ManifoldPoint| inner.eval(p) * alpha)
    }

    /// `g + εġ` as a metric field.
    pub fn perturb(&self, g: &MetricField, eps: f64) -> MetricField {
        let (g, gdot) = (g.clone(), self.clone());
        MetricField::general(format!("{}+{eps}*{}", g.label(), self.label), move |p: &ManifoldPoint| {
            (g.eval(p).unwrap_or_else(|_| PointTensor::zero(p.dim()))) + gdot.eval(p) * eps
        })
    }
}

impl fmt::Debug for MetricPerturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricPerturbation").field("label", &self.label).finish()
    }
}

/// `−Tr(g⁻¹ġ) + (n+2)⟨g⁻¹ġg⁻¹ξ, ξ⟩ / ⟨g⁻¹ξ, ξ⟩`, twice the logarithmic
/// derivative of the Hilb symbol.
fn variation_factor(g: &PointTensor, gdot: &PointTensor, xi: &[f64]) -> Result<f64> {
    let n = g.dim();
    let ginv = g.inverse().ok_or(Error::Singular(g.det()))?;
    let a = ginv.matmul(gdot);
    let w = ginv.matmul(gdot).matmul(&ginv);
    Ok(-a.trace() + (n as f64 + 2.0) * w.quad_form(xi) / ginv.quad_form(xi))
}

/// The derivative of the Hilb symbol at `g` in the direction `ġ`.
#[derive(Debug, Clone)]
pub struct DHilbSymbol {
    metric: MetricField,
    gdot: MetricPerturbation,
    c_n: f64,
    dim: usize,
}

impl DHilbSymbol {
    fn try_eval(&self, p: &ManifoldPoint, xi: [f64; 2]) -> Result<f64> {
        let g = self.metric.eval(p)?;
        let ginv = g.inverse().ok_or(Error::Singular(g.det()))?;
        let xi = &xi[..self.dim];
        let b = self.c_n * (p.g0().det() / g.det()).sqrt() * ginv.quad_form(xi).powf(-(self.dim as f64 + 2.0) / 2.0);
        Ok(0.5 * b * variation_factor(&g, &self.gdot.eval(p), xi)?)
    }
}

impl Symbol for DHilbSymbol {
    fn eval(&self, p: &ManifoldPoint, xi: [f64; 2]) -> f64 {
        self.try_eval(p, xi).unwrap_or(f64::NAN)
    }

    fn is_fiber_independent(&self) -> bool {
        self.dim == 1
    }
}

/// `D_g b(ġ) = (b/2)(−Tr g⁻¹ġ + (n+2)⟨g⁻¹ġg⁻¹ξ,ξ⟩/‖ξ‖²_g)` with `b` the Hilb symbol of `g`.
///
/// The trace term enters with a minus sign: it comes from `(det g)^{-1/2}`.
pub fn dhilb_symbol(g: &MetricField, gdot: &MetricPerturbation, model: ManifoldModel) -> Result<DHilbSymbol> {
    hilb_symbol(g, model)?;
    Ok(DHilbSymbol { metric: g.clone(), gdot: gdot.clone(), c_n: hilb_constant(model), dim: model.dim() })
}

/// `|dhilb(x,ξ) − (b_{g+εġ} − b_{g−εġ})(x,ξ)/(2ε)|` at one cosphere point.
pub fn dhilb_fd_error(
    g: &MetricField,
    gdot: &MetricPerturbation,
    model: ManifoldModel,
    p: &ManifoldPoint,
    xi: [f64; 2],
    eps: f64,
) -> Result<f64> {
    let exact = dhilb_symbol(g, gdot, model)?.try_eval(p, xi)?;
    let plus = hilb_symbol(&gdot.perturb(g, eps), model)?;
    let minus = hilb_symbol(&gdot.perturb(g, -eps), model)?;
    let fd = (plus.eval(p, xi) - minus.eval(p, xi)) / (2.0 * eps);
    if !fd.is_finite() {
        return Err(Error::NotSpd { min_eigenvalue: f64::NAN });
    }
    Ok((exact - fd).abs())
}

fn check_model(model: ManifoldModel) -> Result<()> {
    match model.kind() {
        ManifoldKind::Circle | ManifoldKind::Torus2 => Ok(()),
        ManifoldKind::Sphere2 => Err(Error::Unsupported("metspace runs on circle and torus2 only".into())),
    }
}

/// `Ṙ`: the quantized derivative symbol, symmetrized and not repaired.
pub fn dhilb_operator(g: &MetricField, gdot: &MetricPerturbation, basis: &EigenBasis, opts: &KnOptions) -> Result<OperatorMatrix> {
    check_model(basis.model())?;
    let symbol = dhilb_symbol(g, gdot, basis.model())?;
    Ok(assemble_symbol(&symbol, basis, opts)?.with_provenance(Provenance::DerivativeHilb))
}

/// `μ_N^{-n} Tr(R⁻¹ṘR⁻¹Ṙ)` with `R = Hilb_N(g)` and `Ṙ = D Hilb_N(ġ)`.
pub fn induced_norm_trace(g: &MetricField, gdot: &MetricPerturbation, basis: &EigenBasis, opts: &KnOptions) -> Result<f64> {
    check_model(basis.model())?;
    let r = hilb_n(g, basis, opts)?;
    let rdot = dhilb_operator(g, gdot, basis, opts)?;
    trace_norm(&Cholesky::factor(r.inner_product.matrix())?, rdot.matrix().to_dense(), basis)
}

fn trace_norm(chol: &Cholesky, rdot: DenseMatrix, basis: &EigenBasis) -> Result<f64> {
    let x = chol.solve_matrix(&rdot)?;
    let d = x.rows();
    let mut tr = 0.0;
    for i in 0..d {
        for j in 0..d {
            tr += x.get(i, j) * x.get(j, i);
        }
    }
    Ok(tr / basis.mu_top().powi(basis.model().dim() as i32))
}

/// `1/(4n(2π)^n) ∫_{S*M} (−Tr g⁻¹ġ + (n+2)⟨g⁻¹ġg⁻¹ξ,ξ⟩/‖ξ‖²_g)² dS`.
pub fn induced_norm_closed(g: &MetricField, gdot: &MetricPerturbation, quad: &CosphereQuadrature) -> Result<f64> {
    let n = match quad.nodes.first() {
        Some(c) => c.base().dim(),
        None => return Err(Error::Input("empty cosphere quadrature".into())),
    };
    let mut sum = 0.0;
    for (c, w) in quad.nodes.iter().zip(&quad.weights) {
        let f = variation_factor(&g.eval(c.base())?, &gdot.eval(c.base()), c.xi_slice())?;
        sum += w * f * f;
    }
    Ok(sum / (4.0 * n as f64 * (2.0 * std::f64::consts::PI).powi(n as i32)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SzegoTrace {
    pub measured: f64,
    pub predicted: f64,
    pub ratio: f64,
}

/// `Tr(B₁⋯B_k)` for the compressions of `symbols` against
/// `μ_N^n/(n(2π)^n) ∫ b₁⋯b_k dS`.
pub fn szego_trace(symbols: &[&dyn Symbol], basis: &EigenBasis, opts: &KnOptions, quad: &CosphereQuadrature) -> Result<SzegoTrace> {
    check_model(basis.model())?;
    if symbols.is_empty() || symbols.len() > 3 {
        return Err(Error::Input(format!("szego_trace takes 1 to 3 symbols, got {}", symbols.len())));
    }
    let mats: Vec<OperatorMatrix> = symbols.iter().map(|s| assemble_symbol(*s, basis, opts)).collect::<Result<_>>()?;
    let measured = match mats.as_slice() {
        [a] => a.matrix().trace(),
        [a, b] => a.matrix().trace_product(b.matrix())?,
        [a, b, c] => {
            let ab = a.matrix().matmul(b.matrix())?;
            let cm = c.matrix();
            (0..ab.rows()).map(|i| ab.row(i).iter().zip(cm.row(i)).map(|(x, y)| x * y).sum::<f64>()).sum()
        }
        _ => unreachable!(),
    };
    let integral = quad.integrate(|c| symbols.iter().map(|s| s.eval(c.base(), c.xi())).product());
    let n = basis.model().dim();
    let predicted = basis.mu_top().powi(n as i32) / (n as f64 * (2.0 * std::f64::consts::PI).powi(n as i32)) * integral;
    Ok(SzegoTrace { measured, predicted, ratio: measured / predicted })
}
