use super::kn::assemble_kohn_nirenberg;
use super::multiplication::{basis_bandwidth, check_resolution, grid_for_degree, weighted_block, SMOOTH_MARGIN};
use super::{KnOptions, OperatorMatrix, Provenance, ScalarField, Symbol};
use crate::error::{Error, Result};
use crate::manifolds::{CospherePoint, EigenBasis, Grid, ManifoldKind, ManifoldPoint};
use crate::numerics::SymMatrix;

/// Quantizes `symbol` over `basis` with the rule available on the model:
/// Kohn–Nirenberg on the torus, multiplication by the fiber value on the
/// circle (the symbol must be even in `ξ`) and on the sphere (the symbol must
/// be fiber-independent).
pub fn assemble_symbol(symbol: &dyn Symbol, basis: &EigenBasis, opts: &KnOptions) -> Result<OperatorMatrix> {
    let model = basis.model();
    match model.kind() {
        ManifoldKind::Torus2 => assemble_kohn_nirenberg(symbol, basis, opts),
        ManifoldKind::Circle | ManifoldKind::Sphere2 => {
            let degree = 2 * basis_bandwidth(basis) + SMOOTH_MARGIN;
            let grid = grid_for_degree(model, degree)?;
            let values = fiber_values(symbol, model.kind(), &grid)?;
            let probe = ScalarField::new("symbol", |_: &ManifoldPoint| 0.0);
            check_resolution(basis, basis, &probe, &grid)?;
            let block = weighted_block(&values, basis, basis, &grid)?;
            Ok(OperatorMatrix::new(SymMatrix::from_dense(&block)?, Provenance::Multiplication))
        }
    }
}

fn fiber_values(symbol: &dyn Symbol, kind: ManifoldKind, grid: &Grid) -> Result<Vec<f64>> {
    if kind == ManifoldKind::Sphere2 && !symbol.is_fiber_independent() {
        return Err(Error::Unsupported(
            "sphere2 quantization is limited to fiber-independent (multiplication) symbols".into(),
        ));
    }
    let mut out = Vec::with_capacity(grid.len());
    for p in grid.points() {
        let plus = symbol.eval(p, CospherePoint::from_angle(*p, 0.0).xi());
        if kind == ManifoldKind::Circle && !symbol.is_fiber_independent() {
            let minus = symbol.eval(p, CospherePoint::from_angle(*p, std::f64::consts::PI).xi());
            if (plus - minus).abs() > 1e-12 * (1.0 + plus.abs()) {
                return Err(Error::Unsupported("circle quantization needs a symbol even in ξ".into()));
            }
        }
        if !plus.is_finite() {
            return Err(Error::Input("symbol returned a non-finite value".into()));
        }
        out.push(plus);
    }
    Ok(out)
}
