use std::f64::consts::PI;

use super::{
    assemble_kohn_nirenberg_block, assemble_multiplication_block, basis_bandwidth, default_floor, grid_for_degree,
    positivity_repair, KnOptions, MultiplicationSymbol, OperatorMatrix, ScalarField, Symbol, SMOOTH_MARGIN,
};
use crate::bergman::{dd_identity, dd_kernel, dd_mixed, Tensor2Field};
use crate::error::{Error, Result};
use crate::manifolds::{fiber_nodes, EigenBasis, Grid, ManifoldKind, ManifoldModel, ManifoldPoint};
use crate::numerics::DenseMatrix;
use crate::tensor::PointTensor;

/// Leading term `μ^{n+2} / ((2π)^n (n+2)) ∫_{S*_x} b(x, ξ) ξ⊗ξ dS(ξ)`.
pub fn theorem_a_predict(symbol: &dyn Symbol, point: &ManifoldPoint, fiber_res: usize, mu: f64) -> Result<PointTensor> {
    let n = point.dim();
    if n == 2 && fiber_res < 16 {
        return Err(Error::Resolution(format!("fiber resolution {fiber_res} is below 16")));
    }
    let mut integral = PointTensor::zero(n);
    for node in fiber_nodes(point, fiber_res)? {
        let b = symbol.eval(point, node.xi);
        integral = integral + PointTensor::outer(n, &node.xi, &node.xi) * (node.weight * b);
    }
    let nf = n as f64;
    Ok(integral * (mu.powi(n as i32 + 2) / ((2.0 * PI).powi(n as i32) * (nf + 2.0))))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremARow {
    pub level: usize,
    pub mu_sq: u64,
    pub mu: f64,
    pub dim: usize,
    pub sup_rel_err: f64,
    pub l2_rel_err: f64,
    /// Positivity shift applied before forming the Bergman metric.
    pub shift: f64,
}

/// Compares `E_N(⟨B·,·⟩)` against [`theorem_a_predict`] for each level in
/// `levels`, slicing leading blocks out of `b_top` (assembled over `basis`).
/// A positivity shift `s` contributes exactly `s·dd_kernel(I)`, which is
/// subtracted again.
pub fn theorem_a_check(
    b_top: &OperatorMatrix,
    basis: &EigenBasis,
    symbol: &dyn Symbol,
    levels: &[usize],
    grid: &Grid,
    fiber_res: usize,
) -> Result<Vec<TheoremARow>> {
    if b_top.dim() != basis.len() {
        return Err(Error::Dimension { expected: basis.len(), got: b_top.dim() });
    }
    let mut rows = Vec::with_capacity(levels.len());
    for &level in levels {
        let sub_basis = basis.truncate(level)?;
        if sub_basis.top_level().index != level {
            return Err(Error::Input(format!("level {level} is outside the assembled basis")));
        }
        let b = b_top.leading_block(sub_basis.len())?;
        let (r, shift) = positivity_repair(&b, default_floor(&b)?)?;
        let mut measured = dd_kernel(r.matrix(), &sub_basis, grid.points())?;
        if shift != 0.0 {
            measured = measured.combine(1.0, &dd_identity(&sub_basis, grid.points())?, -shift)?;
        }
        let mu = sub_basis.mu_top();
        let predicted = Tensor2Field::new(
            grid.points().to_vec(),
            grid.points()
                .iter()
                .map(|p| theorem_a_predict(symbol, p, fiber_res, mu))
                .collect::<Result<Vec<_>>>()?,
        )?;
        rows.push(TheoremARow {
            level,
            mu_sq: sub_basis.top_level().mu_sq,
            mu,
            dim: sub_basis.len(),
            sup_rel_err: measured.sup_relative_error(&predicted)?,
            l2_rel_err: measured.l2_relative_error(&predicted, grid.weights())?,
            shift,
        });
    }
    Ok(rows)
}

/// `μ_N^{-(n+2)} sup_x ‖Σ A_{jk} dφ_j ⊗ dψ_k‖` for the coupling block `A`
/// between `inner = H_{≤N}` (rows) and `outer = H_{N+1} ⊕ … ⊕ H_{N′}` (cols).
/// The raw tensor is not symmetric; its norm is the largest `g₀`-singular value.
pub fn tail_defect(block: &DenseMatrix, inner: &EigenBasis, outer: &EigenBasis, points: &[ManifoldPoint]) -> Result<f64> {
    let n_in = inner.top_level().index;
    let lo = outer.bottom_level().index;
    let hi = outer.top_level().index;
    if n_in == 0 {
        return Err(Error::Input("inner window must reach level 1 or higher".into()));
    }
    if lo != n_in + 1 {
        return Err(Error::Input(format!("outer window must start at level {}, starts at {lo}", n_in + 1)));
    }
    if hi < 2 * n_in {
        return Err(Error::Input(format!("outer level {hi} is below 2N = {}", 2 * n_in)));
    }
    let raw = dd_mixed(block, inner, outer, points)?;
    let sup = raw.iter().zip(points).map(|(t, p)| t.norm_wrt(p.g0())).fold(0.0, f64::max);
    Ok(sup / inner.mu_top().powi(inner.model().dim() as i32 + 2))
}

/// [`tail_defect`] for multiplication by `f` with inner window `H_{≤N}` and
/// outer window `H_{N+1} ⊕ … ⊕ H_{2N}`. Torus blocks go through the Fourier
/// route, the other models through exact quadrature.
pub fn multiplication_tail_defect(
    f: &ScalarField,
    model: ManifoldModel,
    level: usize,
    points: &[ManifoldPoint],
) -> Result<f64> {
    let inner = EigenBasis::new(model, level);
    let outer = EigenBasis::window(model, level + 1, 2 * level)?;
    let block = match model.kind() {
        ManifoldKind::Torus2 => {
            assemble_kohn_nirenberg_block(&MultiplicationSymbol(f.clone()), &inner, &outer, &KnOptions::default())?
        }
        _ => {
            let degree = basis_bandwidth(&inner) + basis_bandwidth(&outer) + f.bandwidth().unwrap_or(SMOOTH_MARGIN);
            assemble_multiplication_block(f, &inner, &outer, &grid_for_degree(model, degree)?)?
        }
    };
    tail_defect(&block, &inner, &outer, points)
}
