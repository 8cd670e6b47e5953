//! The DD operator, pullback and Bergman metrics, embedding diagnostics and
//! the isometry-constant fit.

mod field;
mod fit;

use rayon::prelude::*;

pub use field::Tensor2Field;
pub use fit::{isometry_fit, IsometryFit, IsometrySample};

use crate::error::{Error, Result};
use crate::manifolds::{fiber_nodes, EigenBasis, ManifoldPoint};
use crate::numerics::{dot, sym_eigenvalues, DenseMatrix, SpdMatrix, SymMatrix};
use crate::tensor::PointTensor;

/// `Σ_{jk} A_{jk} ∂_a u_j ∂_b v_k` for row-major `a` (`rows × cols`), `gu`
/// row-major `rows × n` and `gv_cols` column-major `n × cols`.
pub(crate) fn mixed_tensor(a: &[f64], rows: usize, cols: usize, gu: &[f64], gv_cols: &[f64], n: usize) -> PointTensor {
    debug_assert_eq!(a.len(), rows * cols);
    let mut t = [[0.0; 2]; 2];
    for j in 0..rows {
        let row = &a[j * cols..(j + 1) * cols];
        let gj = &gu[j * n..(j + 1) * n];
        if gj.iter().all(|&g| g == 0.0) {
            continue;
        }
        for b in 0..n {
            let y = dot(row, &gv_cols[b * cols..(b + 1) * cols]);
            for a_ in 0..n {
                t[a_][b] += gj[a_] * y;
            }
        }
    }
    PointTensor::from_rows(n, t)
}

pub(crate) fn transpose_gradients(g: &[f64], d: usize, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; g.len()];
    for j in 0..d {
        for c in 0..n {
            out[c * d + j] = g[j * n + c];
        }
    }
    out
}

fn check_points(basis: &EigenBasis, points: &[ManifoldPoint]) -> Result<()> {
    if points.is_empty() {
        return Err(Error::Input("empty point set".into()));
    }
    if let Some(p) = points.iter().find(|p| p.kind() != basis.model().kind()) {
        return Err(Error::Chart(format!("{} point given to {} basis", p.kind(), basis.model().kind())));
    }
    Ok(())
}

/// `DD` of the kernel `Σ A_{jk} φ_j(x) φ_k(y)`: the field `Gᵀ A G` where `G`
/// is the `d × n` gradient matrix at each point.
pub fn dd_kernel(a: &SymMatrix, basis: &EigenBasis, points: &[ManifoldPoint]) -> Result<Tensor2Field> {
    let d = basis.len();
    if a.dim() != d {
        return Err(Error::Dimension { expected: d, got: a.dim() });
    }
    check_points(basis, points)?;
    let n = basis.model().dim();
    let values = points
        .par_iter()
        .map(|p| {
            let g = basis.eval_gradients(p)?;
            let gt = transpose_gradients(&g, d, n);
            Ok(mixed_tensor(a.as_slice(), d, d, &g, &gt, n))
        })
        .collect::<Result<Vec<_>>>()?;
    Tensor2Field::new(points.to_vec(), values)
}

/// Non-symmetric mixed field `Σ A_{jk} dφ_j ⊗ dψ_k` with `A` indexed by
/// (`rows` basis, `cols` basis). Returned raw; callers symmetrize if needed.
pub fn dd_mixed(
    a: &DenseMatrix,
    rows: &EigenBasis,
    cols: &EigenBasis,
    points: &[ManifoldPoint],
) -> Result<Vec<PointTensor>> {
    if a.rows() != rows.len() || a.cols() != cols.len() {
        return Err(Error::Dimension { expected: rows.len() * cols.len(), got: a.rows() * a.cols() });
    }
    check_points(rows, points)?;
    check_points(cols, points)?;
    let n = rows.model().dim();
    points
        .par_iter()
        .map(|p| {
            let gu = rows.eval_gradients(p)?;
            let gv = transpose_gradients(&cols.eval_gradients(p)?, cols.len(), n);
            Ok(mixed_tensor(a.as_slice(), a.rows(), a.cols(), &gu, &gv, n))
        })
        .collect()
}

/// `dd_kernel(I)` in O(d) per point: `Σ_j dφ_j ⊗ dφ_j`.
pub fn dd_identity(basis: &EigenBasis, points: &[ManifoldPoint]) -> Result<Tensor2Field> {
    check_points(basis, points)?;
    let n = basis.model().dim();
    let values = points
        .par_iter()
        .map(|p| {
            let g = basis.eval_gradients(p)?;
            let mut t = [[0.0; 2]; 2];
            for gj in g.chunks_exact(n) {
                for a in 0..n {
                    for b in 0..n {
                        t[a][b] += gj[a] * gj[b];
                    }
                }
            }
            Ok(PointTensor::from_rows(n, t))
        })
        .collect::<Result<Vec<_>>>()?;
    Tensor2Field::new(points.to_vec(), values)
}

/// The Bergman metric `E_N(⟨R·,·⟩) = DD R`.
pub fn e_n_map(r: &SpdMatrix, basis: &EigenBasis, points: &[ManifoldPoint]) -> Result<Tensor2Field> {
    dd_kernel(r.matrix(), basis, points)
}

/// Pullback of the Euclidean metric by `QΦ`, i.e. `dd_kernel(QᵀQ)`.
pub fn pullback_by_transform(q: &DenseMatrix, basis: &EigenBasis, points: &[ManifoldPoint]) -> Result<Tensor2Field> {
    let d = basis.len();
    if q.rows() != d || q.cols() != d {
        return Err(Error::Dimension { expected: d, got: if q.rows() != d { q.rows() } else { q.cols() } });
    }
    let qtq = q.gram();
    let ev = sym_eigenvalues(&qtq)?;
    let top = ev[d - 1].abs().max(f64::MIN_POSITIVE);
    if !(ev[0] > 1e-14 * top) {
        return Err(Error::Singular(ev[0]));
    }
    dd_kernel(&qtq, basis, points)
}

/// Minimum over `points` of the smallest singular value of the `d × n`
/// chart Jacobian of `Φ`.
pub fn immersion_margin(basis: &EigenBasis, points: &[ManifoldPoint]) -> Result<f64> {
    let field = dd_identity(basis, points)?;
    Ok(field
        .values()
        .iter()
        .map(|t| t.sym_eigenvalues()[0].max(0.0).sqrt())
        .fold(f64::INFINITY, f64::min))
}

/// Minimum over pairs of `|Φ(p) − Φ(q)| / dist(p, q)`.
pub fn injectivity_margin(basis: &EigenBasis, pairs: &[(ManifoldPoint, ManifoldPoint)]) -> Result<f64> {
    if pairs.is_empty() {
        return Err(Error::Input("no sample pairs".into()));
    }
    let ratios = pairs
        .par_iter()
        .map(|(p, q)| {
            let dist = p.chart_distance(q);
            if !(dist > 1e-14) {
                return Err(Error::Input("coincident sample pair".into()));
            }
            let u = basis.eval_values(p)?;
            let v = basis.eval_values(q)?;
            let e: f64 = u.iter().zip(&v).map(|(a, b)| (a - b) * (a - b)).sum();
            Ok(e.sqrt() / dist)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ratios.into_iter().fold(f64::INFINITY, f64::min))
}

/// `∫_{S*_x} ξ ⊗ ξ dS_{g₀}` by the fiber rule.
pub fn tensor_sphere_average(point: &ManifoldPoint, fiber_res: usize) -> Result<PointTensor> {
    let n = point.dim();
    let mut t = PointTensor::zero(n);
    for node in fiber_nodes(point, fiber_res)? {
        t = t + PointTensor::outer(n, &node.xi, &node.xi) * node.weight;
    }
    Ok(t)
}
