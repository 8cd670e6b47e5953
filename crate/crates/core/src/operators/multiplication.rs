use super::{OperatorMatrix, Provenance, ScalarField};
use crate::error::{Error, Result};
use crate::manifolds::{EigenBasis, Grid, ManifoldKind, ManifoldModel};
use crate::numerics::{DenseMatrix, SymMatrix};

/// Extra degree budget assumed for fields that are smooth but not
/// band-limited; their coefficients past this degree must be negligible.
pub const SMOOTH_MARGIN: usize = 16;

/// Highest frequency of the basis: trigonometric degree per coordinate on
/// the circle and torus, polynomial degree on the sphere.
pub fn basis_bandwidth(basis: &EigenBasis) -> usize {
    let top = basis.top_level();
    match basis.model().kind() {
        ManifoldKind::Circle | ManifoldKind::Sphere2 => top.index,
        ManifoldKind::Torus2 => (top.mu_sq as f64).sqrt().floor() as usize,
    }
}

/// The smallest product grid whose exactness degree is at least `degree`.
pub fn grid_for_degree(model: ManifoldModel, degree: usize) -> Result<Grid> {
    let res = match model.kind() {
        ManifoldKind::Sphere2 => (degree + 2).div_ceil(2),
        _ => degree + 1,
    };
    Grid::product(model, res.max(2))
}

fn required_degree(rows: &EigenBasis, cols: &EigenBasis, f: &ScalarField) -> usize {
    basis_bandwidth(rows) + basis_bandwidth(cols) + f.bandwidth().unwrap_or(SMOOTH_MARGIN)
}

pub(crate) fn check_resolution(rows: &EigenBasis, cols: &EigenBasis, f: &ScalarField, grid: &Grid) -> Result<()> {
    if grid.model() != rows.model() || grid.model() != cols.model() {
        return Err(Error::Input("grid and basis belong to different models".into()));
    }
    match grid.exact_degree() {
        Some(e) => {
            let need = required_degree(rows, cols, f);
            if e < need {
                return Err(Error::Resolution(format!(
                    "grid is exact to degree {e}, products with '{}' need {need}",
                    f.label()
                )));
            }
        }
        None => {
            let residual = gram_residual(rows, grid)?;
            if residual > 1e-10 {
                return Err(Error::Resolution(format!("Gram residual {residual:e} on an unstructured grid")));
            }
        }
    }
    Ok(())
}

fn value_tables(basis: &EigenBasis, grid: &Grid, weight: impl Fn(usize) -> f64) -> Result<DenseMatrix> {
    let d = basis.len();
    let mut t = DenseMatrix::zeros(grid.len(), d);
    for (i, p) in grid.points().iter().enumerate() {
        let w = weight(i);
        let row = t.row_mut(i);
        basis.eval_into(p, row, None)?;
        row.iter_mut().for_each(|v| *v *= w);
    }
    Ok(t)
}

fn gram_residual(basis: &EigenBasis, grid: &Grid) -> Result<f64> {
    let v = value_tables(basis, grid, |i| grid.weights()[i].sqrt())?;
    let g = v.gram();
    let mut worst = 0.0f64;
    for i in 0..g.dim() {
        for j in 0..g.dim() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g.get(i, j) - target).abs());
        }
    }
    Ok(worst)
}

/// `⟨f φ_k, ψ_j⟩` for `φ` in `cols`, `ψ` in `rows`, by quadrature.
pub fn assemble_multiplication_block(
    f: &ScalarField,
    rows: &EigenBasis,
    cols: &EigenBasis,
    grid: &Grid,
) -> Result<DenseMatrix> {
    check_resolution(rows, cols, f, grid)?;
    let values: Vec<f64> = grid.points().iter().map(|p| f.eval(p)).collect();
    weighted_block(&values, rows, cols, grid)
}

/// `Σ_p w_p f_p ψ_j(p) φ_k(p)` from precomputed samples `f_p` on `grid`.
pub(crate) fn weighted_block(values: &[f64], rows: &EigenBasis, cols: &EigenBasis, grid: &Grid) -> Result<DenseMatrix> {
    if values.len() != grid.len() {
        return Err(Error::Dimension { expected: grid.len(), got: values.len() });
    }
    let fw: Vec<f64> = values.iter().zip(grid.weights()).map(|(v, w)| w * v).collect();
    let weighted = value_tables(rows, grid, |i| fw[i])?.transpose();
    let plain = value_tables(cols, grid, |_| 1.0)?;
    weighted.matmul(&plain)
}

/// `Π_{≤N} M_f Π_{≤N}`.
pub fn assemble_multiplication(f: &ScalarField, basis: &EigenBasis, grid: &Grid) -> Result<OperatorMatrix> {
    let block = assemble_multiplication_block(f, basis, basis, grid)?;
    Ok(OperatorMatrix::new(SymMatrix::from_dense(&block)?, Provenance::Multiplication))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::BasisFunction;
    use crate::manifolds::ManifoldPoint;

    #[test]
    fn constant_one_is_identity() {
        let basis = EigenBasis::new(ManifoldModel::SPHERE2, 6);
        let grid = grid_for_degree(ManifoldModel::SPHERE2, 12).unwrap();
        let a = assemble_multiplication(&ScalarField::constant(1.0), &basis, &grid).unwrap();
        let id = SymMatrix::identity(basis.len());
        assert!(a.matrix().combine(1.0, &id, -1.0).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn circle_cos_product_to_sum() {
        let basis = EigenBasis::new(ManifoldModel::CIRCLE, 5);
        let f = ScalarField::band_limited("cos", 1, |p: &ManifoldPoint| p.coords()[0].cos());
        let grid = grid_for_degree(ManifoldModel::CIRCLE, 11).unwrap();
        let a = assemble_multiplication(&f, &basis, &grid).unwrap();
        let idx = |func| basis.entries().iter().position(|e| e.function == func).unwrap();
        let v = a.matrix().get(idx(BasisFunction::CircleCos(2)), idx(BasisFunction::CircleCos(3)));
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn under_resolved_grid() {
        let basis = EigenBasis::new(ManifoldModel::CIRCLE, 5);
        let grid = Grid::product(ManifoldModel::CIRCLE, 8).unwrap();
        let err = assemble_multiplication(&ScalarField::constant(1.0), &basis, &grid).unwrap_err();
        assert!(matches!(err, Error::Resolution(_)));
    }
}
