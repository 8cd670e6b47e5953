//! Single eigenspaces of the round sphere: the Takahashi identity, band
//! Bergman metrics `DD Π_{N+k} B Π_N`, geodesic-flow averages and the
//! cumulative sum over all bands.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bergman::{dd_identity, dd_kernel, dd_mixed, Tensor2Field};
use crate::error::{Error, Result};
use crate::manifolds::{fiber_nodes, geodesic_flow_sphere, CospherePoint, EigenBasis, ManifoldModel, ManifoldPoint};
use crate::numerics::SymMatrix;
use crate::operators::{
    assemble_multiplication, assemble_multiplication_block, basis_bandwidth, grid_for_degree, theorem_a_predict,
    MultiplicationSymbol, ScalarField, Symbol, SMOOTH_MARGIN,
};
use crate::tensor::PointTensor;

const SPHERE: ManifoldModel = ManifoldModel::SPHERE2;

/// Minimum node count for the periodic `t` rule.
pub const MIN_T_RES: usize = 64;

/// `C_N = μ_N² d_N / (n Vol(S²)) = N(N+1)(2N+1)/(8π)`.
pub fn takahashi_constant(level: usize) -> f64 {
    let n = level as f64;
    n * (n + 1.0) * (2.0 * n + 1.0) / (8.0 * PI)
}

/// `sup_x ‖Σ_m dY_{N,m} ⊗ dY_{N,m} − C_N g₀‖ / C_N` over `points`.
pub fn takahashi_check(level: usize, points: &[ManifoldPoint]) -> Result<f64> {
    if level == 0 {
        return Err(Error::Input("takahashi_check needs N ≥ 1".into()));
    }
    let c = takahashi_constant(level);
    let field = dd_identity(&EigenBasis::band(SPHERE, level), points)?;
    Ok(field
        .values()
        .iter()
        .zip(points)
        .map(|(t, p)| (*t - *p.g0() * c).norm_wrt(p.g0()) / c)
        .fold(0.0, f64::max))
}

fn band_level(level: usize, k: i64) -> Result<usize> {
    let other = level as i64 + k;
    if level == 0 || other < 1 {
        return Err(Error::Input(format!("band pair (N = {level}, N + k = {other}) needs both degrees ≥ 1")));
    }
    Ok(other as usize)
}

/// The symmetrized field `DD Π_{N+k} M_a Π_N`.
pub fn band_dd(a: &ScalarField, level: usize, k: i64, points: &[ManifoldPoint]) -> Result<Tensor2Field> {
    let rows = EigenBasis::band(SPHERE, band_level(level, k)?);
    let cols = EigenBasis::band(SPHERE, level);
    let degree = basis_bandwidth(&rows) + basis_bandwidth(&cols) + a.bandwidth().unwrap_or(SMOOTH_MARGIN);
    let block = assemble_multiplication_block(a, &rows, &cols, &grid_for_degree(SPHERE, degree)?)?;
    let raw = dd_mixed(&block, &rows, &cols, points)?;
    Tensor2Field::new(points.to_vec(), raw)
}

/// `∫_{-π}^{π} e^{-itk} b(G^t c) dt` by the periodic trapezoid rule.
pub fn geodesic_average(symbol: &dyn Symbol, c: &CospherePoint, k: i64, t_res: usize) -> Result<Complex64> {
    if t_res < MIN_T_RES {
        return Err(Error::Resolution(format!("geodesic average needs ≥ {MIN_T_RES} t nodes, got {t_res}")));
    }
    let h = 2.0 * PI / t_res as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for j in 0..t_res {
        let t = -PI + j as f64 * h;
        let ct = geodesic_flow_sphere(c, t)?;
        sum += Complex64::from_polar(1.0, -(k as f64) * t) * symbol.eval(ct.base(), ct.xi());
    }
    Ok(sum * h)
}

/// Leading term `(2π)^{-(n+1)} μ̄^{n+1} Re ∫_{S*_x} ⟨e^{-itk} b∘G^t⟩ ξ⊗ξ dS` with
/// `μ̄ = (μ_N + μ_{N+k})/2`.
pub fn band_predict(
    symbol: &dyn Symbol,
    point: &ManifoldPoint,
    level: usize,
    k: i64,
    fiber_res: usize,
    t_res: usize,
) -> Result<PointTensor> {
    let other = band_level(level, k)?;
    let mu = |l: usize| ((l * (l + 1)) as f64).sqrt();
    let scale = (0.5 * (mu(level) + mu(other))).powi(3) / (2.0 * PI).powi(3);
    let mut t = PointTensor::zero(2);
    for node in fiber_nodes(point, fiber_res)? {
        let c = CospherePoint::new(*point, node.xi)?;
        let avg = geodesic_average(symbol, &c, k, t_res)?;
        t = t + PointTensor::outer(2, &node.xi, &node.xi) * (node.weight * avg.re);
    }
    Ok(t * scale)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandRow {
    pub level: usize,
    pub k: i64,
    /// `sup‖actual − predicted‖ / sup‖predicted‖`.
    pub rel_err: f64,
    pub actual_sup: f64,
    pub predicted_sup: f64,
}

/// [`band_dd`] against [`band_predict`] for each level.
pub fn sphere_band_check(
    a: &ScalarField,
    levels: &[usize],
    k: i64,
    points: &[ManifoldPoint],
    fiber_res: usize,
    t_res: usize,
) -> Result<Vec<BandRow>> {
    let symbol = MultiplicationSymbol(a.clone());
    levels
        .iter()
        .map(|&level| {
            let actual = band_dd(a, level, k, points)?;
            let predicted = points
                .par_iter()
                .map(|p| band_predict(&symbol, p, level, k, fiber_res, t_res))
                .collect::<Result<Vec<_>>>()?;
            let predicted = Tensor2Field::new(points.to_vec(), predicted)?;
            Ok(BandRow {
                level,
                k,
                rel_err: actual.sup_normalized_error(&predicted)?,
                actual_sup: actual.sup_norm(),
                predicted_sup: predicted.sup_norm(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CumulativeRow {
    pub level: usize,
    pub mu: f64,
    pub rel_err: f64,
}

/// `DD Π_{≤N} M_a Π_{≤N}` against `μ_N^{n+2}/((n+2)(2π)^n) ∫ a ξ⊗ξ dS`, sup-normalized,
/// assembled once at the largest level.
pub fn cumulative_band_sum(
    a: &ScalarField,
    levels: &[usize],
    points: &[ManifoldPoint],
    fiber_res: usize,
) -> Result<Vec<CumulativeRow>> {
    let top = *levels.iter().max().ok_or_else(|| Error::Input("empty level list".into()))?;
    let basis = EigenBasis::new(SPHERE, top);
    let degree = 2 * basis_bandwidth(&basis) + a.bandwidth().unwrap_or(SMOOTH_MARGIN);
    let full = assemble_multiplication(a, &basis, &grid_for_degree(SPHERE, degree)?)?;
    let symbol = MultiplicationSymbol(a.clone());
    levels
        .iter()
        .map(|&level| {
            let sub = basis.truncate(level)?;
            let block: SymMatrix = full.matrix().leading_block(sub.len())?;
            let actual = dd_kernel(&block, &sub, points)?;
            let mu = sub.mu_top();
            let predicted = Tensor2Field::from_fn(points, |p| {
                theorem_a_predict(&symbol, p, fiber_res, mu).unwrap_or_else(|_| PointTensor::zero(2))
            })?;
            Ok(CumulativeRow { level, mu, rel_err: actual.sup_normalized_error(&predicted)? })
        })
        .collect()
}

/// `a(x) = 1 + x₃²/2`.
pub fn one_plus_half_x3sq() -> ScalarField {
    ScalarField::band_limited("one-plus-half-x3sq", 2, |p: &ManifoldPoint| {
        let z = p.ambient().map_or(0.0, |x| x[2]);
        1.0 + 0.5 * z * z
    })
}

/// `a(x) = x₃`.
pub fn x3() -> ScalarField {
    ScalarField::band_limited("x3", 1, |p: &ManifoldPoint| p.ambient().map_or(0.0, |x| x[2]))
}
