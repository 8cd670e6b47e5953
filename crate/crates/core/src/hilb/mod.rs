//! The Hilb map `g ↦ ⟨Hilb(g)·,·⟩` and the approximation `E_N ∘ Hilb_N(g) → g`.

mod metric;

pub use metric::{MetricField, MetricKind};

use crate::bergman::{dd_identity, dd_kernel, Tensor2Field};
use crate::error::{Error, Result};
use crate::manifolds::{EigenBasis, Grid, ManifoldKind, ManifoldModel, ManifoldPoint};
use crate::numerics::SpdMatrix;
use crate::operators::{assemble_symbol, default_floor, positivity_repair, KnOptions, OperatorMatrix, Provenance, Symbol};

/// `c_n = n(n+2)(2π)^n / Vol(S^{n-1})`.
pub fn hilb_constant(model: ManifoldModel) -> f64 {
    1.0 / model.isometry_coefficient()
}

/// `b(x, ξ) = c_n (dV_{g₀}/dV_g)(x) ⟨g⁻¹ξ, ξ⟩^{-(n+2)/2}` on the unit cosphere.
#[derive(Debug, Clone)]
pub struct HilbSymbol {
    metric: MetricField,
    c_n: f64,
    dim: usize,
}

impl HilbSymbol {
    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn constant(&self) -> f64 {
        self.c_n
    }

    fn try_eval(&self, p: &ManifoldPoint, xi: [f64; 2]) -> Result<f64> {
        let g = self.metric.eval(p)?;
        let ginv = g.inverse().ok_or(Error::Singular(g.det()))?;
        let ratio = (p.g0().det() / g.det()).sqrt();
        let q = ginv.quad_form(&xi[..self.dim]);
        Ok(self.c_n * ratio * q.powf(-(self.dim as f64 + 2.0) / 2.0))
    }
}

impl Symbol for HilbSymbol {
    /// NaN where the metric is not positive-definite.
    fn eval(&self, p: &ManifoldPoint, xi: [f64; 2]) -> f64 {
        self.try_eval(p, xi).unwrap_or(f64::NAN)
    }

    fn is_fiber_independent(&self) -> bool {
        self.metric.is_conformal_on(self.dim)
    }

    fn is_position_independent(&self) -> bool {
        matches!(self.metric.kind(), MetricKind::Reference)
    }
}

/// Builds the Hilb symbol after checking `g` on a probe grid.
pub fn hilb_symbol(g: &MetricField, model: ManifoldModel) -> Result<HilbSymbol> {
    let probe = Grid::product(model, 12)?;
    for p in probe.points() {
        g.eval(p)?;
    }
    Ok(HilbSymbol { metric: g.clone(), c_n: hilb_constant(model), dim: model.dim() })
}

fn check_supported(g: &MetricField, model: ManifoldModel) -> Result<()> {
    if model.kind() == ManifoldKind::Sphere2 && !g.is_conformal_on(2) {
        return Err(Error::Unsupported(format!(
            "sphere2 supports conformal metrics only, got '{}'",
            g.label()
        )));
    }
    Ok(())
}

/// Hilb compression before positivity repair.
pub fn hilb_operator(g: &MetricField, basis: &EigenBasis, opts: &KnOptions) -> Result<OperatorMatrix> {
    check_supported(g, basis.model())?;
    let symbol = hilb_symbol(g, basis.model())?;
    Ok(assemble_symbol(&symbol, basis, opts)?.with_provenance(Provenance::Hilb))
}

#[derive(Debug, Clone)]
pub struct HilbMatrix {
    pub inner_product: SpdMatrix,
    /// Positivity shift added to the raw compression.
    pub shift: f64,
    /// `shift / ‖raw‖`.
    pub relative_shift: f64,
}

fn repair(raw: &OperatorMatrix) -> Result<HilbMatrix> {
    let (inner_product, shift) = positivity_repair(raw, default_floor(raw)?)?;
    Ok(HilbMatrix { inner_product, shift, relative_shift: shift / raw.norm()? })
}

/// `Hilb_N(g)`: the repaired, SPD inner product on `H_{≤N}`.
pub fn hilb_n(g: &MetricField, basis: &EigenBasis, opts: &KnOptions) -> Result<HilbMatrix> {
    repair(&hilb_operator(g, basis, opts)?)
}

#[derive(Debug, Clone)]
pub struct Approximation {
    /// `μ_N^{-(n+2)} E_N(Hilb_N(g))` with the repair shift removed.
    pub field: Tensor2Field,
    pub shift: f64,
    pub relative_shift: f64,
}

fn approximate_from(h: &HilbMatrix, basis: &EigenBasis, points: &[ManifoldPoint]) -> Result<Approximation> {
    let mut field = dd_kernel(h.inner_product.matrix(), basis, points)?;
    if h.shift != 0.0 {
        field = field.combine(1.0, &dd_identity(basis, points)?, -h.shift)?;
    }
    let scale = basis.mu_top().powi(basis.model().dim() as i32 + 2);
    Ok(Approximation { field: field.scaled(1.0 / scale), shift: h.shift, relative_shift: h.relative_shift })
}

/// `μ_N^{-(n+2)} · E_N ∘ Hilb_N(g)` on `points`.
pub fn approximate(g: &MetricField, basis: &EigenBasis, points: &[ManifoldPoint], opts: &KnOptions) -> Result<Approximation> {
    approximate_from(&hilb_n(g, basis, opts)?, basis, points)
}

/// `(sup relative error, L² relative error)` of an approximation against `g`
/// on `grid`, in the `g₀`-operator norm.
pub fn approx_error(g: &MetricField, approx: &Tensor2Field, grid: &Grid) -> Result<(f64, f64)> {
    if approx.points() != grid.points() {
        return Err(Error::Input("approximation and grid use different points".into()));
    }
    let target = Tensor2Field::new(
        grid.points().to_vec(),
        grid.points().iter().map(|p| g.eval(p)).collect::<Result<Vec<_>>>()?,
    )?;
    Ok((approx.sup_relative_error(&target)?, approx.l2_relative_error(&target, grid.weights())?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HilbRow {
    pub level: usize,
    pub mu_sq: u64,
    pub sup_rel_err: f64,
    pub l2_rel_err: f64,
    pub shift: f64,
    pub relative_shift: f64,
    /// Smallest `g₀`-eigenvalue of the approximation over the grid.
    pub min_eigenvalue: f64,
}

/// Runs [`approximate`] for each level in `levels`, assembling once over
/// `basis` and slicing leading blocks.
pub fn hilb_sweep(
    g: &MetricField,
    basis: &EigenBasis,
    levels: &[usize],
    grid: &Grid,
    opts: &KnOptions,
) -> Result<Vec<HilbRow>> {
    let raw = hilb_operator(g, basis, opts)?;
    let mut rows = Vec::with_capacity(levels.len());
    for &level in levels {
        let sub = basis.truncate(level)?;
        if sub.top_level().index != level {
            return Err(Error::Input(format!("level {level} is outside the assembled basis")));
        }
        let h = repair(&raw.leading_block(sub.len())?)?;
        let a = approximate_from(&h, &sub, grid.points())?;
        let (sup, l2) = approx_error(g, &a.field, grid)?;
        rows.push(HilbRow {
            level,
            mu_sq: sub.top_level().mu_sq,
            sup_rel_err: sup,
            l2_rel_err: l2,
            shift: a.shift,
            relative_shift: a.relative_shift,
            min_eigenvalue: a.field.min_eigenvalue(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::ScalarField;
    use crate::tensor::PointTensor;
    use std::f64::consts::PI;

    #[test]
    fn constants() {
        assert!((hilb_constant(ManifoldModel::CIRCLE) - 3.0 * PI).abs() < 1e-13);
        assert!((hilb_constant(ManifoldModel::TORUS2) - 16.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn reference_symbol_is_constant() {
        let s = hilb_symbol(&MetricField::reference(), ManifoldModel::SPHERE2).unwrap();
        let p = ManifoldPoint::sphere(0.7, 1.0).unwrap();
        let v = s.eval(&p, [0.6, 0.8 * 0.7f64.sin()]);
        assert!((v - 16.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn circle_conformal_symbol() {
        let u = ScalarField::new("cos", |p: &ManifoldPoint| p.coords()[0].cos());
        let s = hilb_symbol(&MetricField::conformal(u), ManifoldModel::CIRCLE).unwrap();
        let p = ManifoldPoint::circle(0.4);
        assert!((s.eval(&p, [1.0, 0.0]) - 3.0 * PI * 0.4f64.cos().exp()).abs() < 1e-12);
    }

    #[test]
    fn torus_constant_anisotropic_symbol() {
        let g = MetricField::general("diag(4,1)", |_| PointTensor::diagonal(2, [4.0, 1.0]));
        let s = hilb_symbol(&g, ManifoldModel::TORUS2).unwrap();
        let p = ManifoldPoint::torus(0.0, 0.0);
        let (x1, x2) = (0.6f64, 0.8f64);
        let expect = 16.0 * PI * 0.5 * (x1 * x1 / 4.0 + x2 * x2).powi(-2);
        assert!((s.eval(&p, [x1, x2]) - expect).abs() < 1e-12 * expect);
    }

    #[test]
    fn indefinite_metric_rejected() {
        let g = MetricField::general("bad", |_| PointTensor::diagonal(2, [1.0, -1.0]));
        assert!(matches!(hilb_symbol(&g, ManifoldModel::TORUS2), Err(Error::NotSpd { .. })));
    }

    #[test]
    fn anisotropic_sphere_unsupported() {
        let g = MetricField::general("aniso", |p| *p.g0() * 2.0);
        let basis = EigenBasis::new(ManifoldModel::SPHERE2, 2);
        assert!(matches!(hilb_n(&g, &basis, &KnOptions::default()), Err(Error::Unsupported(_))));
    }

    #[test]
    fn reference_metric_gives_scaled_identity() {
        let basis = EigenBasis::new(ManifoldModel::CIRCLE, 6);
        let h = hilb_n(&MetricField::reference(), &basis, &KnOptions::default()).unwrap();
        let m = h.inner_product.matrix();
        for i in 0..m.dim() {
            for j in 0..m.dim() {
                let t = if i == j { 3.0 * PI } else { 0.0 };
                assert!((m.get(i, j) - t).abs() < 1e-10);
            }
        }
    }
}
