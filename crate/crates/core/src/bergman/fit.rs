use crate::error::{Error, Result};
use crate::manifolds::{Cutoff, EigenBasis, Grid, ManifoldModel};

use super::dd_identity;

#[derive(Debug, Clone, PartialEq)]
pub struct IsometrySample {
    pub level: usize,
    pub mu: f64,
    /// `sup_x ‖dd_kernel(I)(x)‖_{g₀}`.
    pub measured: f64,
    /// `measured / μ^{n+2}`.
    pub scaled: f64,
    /// Relative residual of the two-term fit at this level.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IsometryFit {
    /// Fitted coefficient of `μ^{n+2}`.
    pub coefficient: f64,
    /// Fitted coefficient of the `μ^{n+1}` nuisance term.
    pub subleading: f64,
    pub theory: f64,
    pub rel_err: f64,
    pub samples: Vec<IsometrySample>,
}

/// Least squares of `‖dd_kernel(I)‖` against `c μ^{n+2} + c' μ^{n+1}`.
pub fn isometry_fit(model: ManifoldModel, cutoffs: &[Cutoff], grid_res: usize) -> Result<IsometryFit> {
    if cutoffs.len() < 3 {
        return Err(Error::Input(format!("isometry fit needs at least 3 levels, got {}", cutoffs.len())));
    }
    let grid = Grid::product(model, grid_res)?;
    let n = model.dim() as i32;
    let mut rows = Vec::with_capacity(cutoffs.len());
    for &c in cutoffs {
        let basis = EigenBasis::with_cutoff(model, c);
        let field = dd_identity(&basis, grid.points())?;
        rows.push((basis.top_level().index, basis.mu_top(), field.sup_norm()));
    }
    // Normalize by the largest μ^{n+2} so the 2×2 normal equations stay well scaled.
    let mu_max = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    if !(mu_max > 0.0) {
        return Err(Error::Input("isometry fit needs a positive frequency".into()));
    }
    let (mut s11, mut s12, mut s22, mut b1, mut b2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(_, mu, v) in &rows {
        let x1 = (mu / mu_max).powi(n + 2);
        let x2 = (mu / mu_max).powi(n + 1);
        let y = v / mu_max.powi(n + 2);
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        b1 += x1 * y;
        b2 += x2 * y;
    }
    let det = s11 * s22 - s12 * s12;
    if !(det.abs() > 1e-300) {
        return Err(Error::Singular(det));
    }
    let c1 = (b1 * s22 - b2 * s12) / det;
    let c2 = (s11 * b2 - s12 * b1) / det;
    let coefficient = c1;
    let subleading = c2 * mu_max;
    let samples = rows
        .iter()
        .map(|&(level, mu, v)| {
            let fit = coefficient * mu.powi(n + 2) + subleading * mu.powi(n + 1);
            IsometrySample { level, mu, measured: v, scaled: v / mu.powi(n + 2), residual: (v - fit) / v }
        })
        .collect();
    let theory = model.isometry_coefficient();
    Ok(IsometryFit { coefficient, subleading, theory, rel_err: (coefficient - theory).abs() / theory, samples })
}
