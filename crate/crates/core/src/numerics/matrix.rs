use rayon::prelude::*;

use super::eigen::sym_eigenvalues;
use crate::error::{Error, Result};

/// Dot product with four independent accumulators (fixed summation order).
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let ra = ca.remainder();
    let rb = cb.remainder();
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut tail = 0.0;
    for (x, y) in ra.iter().zip(rb) {
        tail += x * y;
    }
    (acc[0] + acc[1]) + (acc[2] + acc[3]) + tail
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// General row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension { expected: rows * cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// `self * other`, parallel over output rows.
    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension { expected: self.cols, got: other.rows });
        }
        let n = other.cols;
        let mut out = DenseMatrix::zeros(self.rows, n);
        if n == 0 {
            return Ok(out);
        }
        out.data.par_chunks_mut(n).enumerate().for_each(|(i, orow)| {
            for (k, &a) in self.row(i).iter().enumerate() {
                if a != 0.0 {
                    axpy(a, other.row(k), orow);
                }
            }
        });
        Ok(out)
    }

    /// The Gram matrix `selfᵀ self`.
    pub fn gram(&self) -> SymMatrix {
        let t = self.transpose();
        let n = self.cols;
        let mut data = vec![0.0; n * n];
        data.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            for j in i..n {
                row[j] = dot(t.row(i), t.row(j));
            }
        });
        SymMatrix::mirror_upper(n, data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Real symmetric matrix, row-major. Symmetric exactly: construction
/// averages the input with its transpose.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self { dim, data: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let dim = diag.len();
        let mut m = Self::zeros(dim);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * dim + i] = d;
        }
        m
    }

    /// Symmetrizes `(A + Aᵀ)/2`; rejects non-finite entries.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("matrix dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::Dimension { expected: dim * dim, got: data.len() });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("matrix has non-finite entries".into()));
        }
        let mut out = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                let v = 0.5 * (data[i * dim + j] + data[j * dim + i]);
                out[i * dim + j] = v;
                out[j * dim + i] = v;
            }
        }
        Ok(Self { dim, data: out })
    }

    pub fn from_dense(m: &DenseMatrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(Error::Dimension { expected: m.rows, got: m.cols });
        }
        Self::from_row_major(m.rows, m.data.clone())
    }

    /// Builds from the upper triangle `f(i, j)`, `i <= j`.
    pub fn from_upper_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in i..dim {
                data[i * dim + j] = f(i, j);
            }
        }
        Self::mirror_upper(dim, data)
    }

    pub(crate) fn mirror_upper(dim: usize, mut data: Vec<f64>) -> Self {
        for i in 0..dim {
            for j in (i + 1)..dim {
                data[j * dim + i] = data[i * dim + j];
            }
        }
        Self { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_dense(&self) -> DenseMatrix {
        DenseMatrix { rows: self.dim, cols: self.dim, data: self.data.clone() }
    }

    pub fn scaled(&self, c: f64) -> SymMatrix {
        SymMatrix { dim: self.dim, data: self.data.iter().map(|v| v * c).collect() }
    }

    pub fn add_identity(&self, shift: f64) -> SymMatrix {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] += shift;
        }
        out
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &SymMatrix, beta: f64) -> Result<SymMatrix> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: self.dim, got: other.dim });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| alpha * a + beta * b).collect();
        Ok(SymMatrix { dim: self.dim, data })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Leading `d × d` principal block.
    pub fn leading_block(&self, d: usize) -> Result<SymMatrix> {
        if d == 0 || d > self.dim {
            return Err(Error::Dimension { expected: self.dim, got: d });
        }
        let mut data = Vec::with_capacity(d * d);
        for i in 0..d {
            data.extend_from_slice(&self.row(i)[..d]);
        }
        Ok(SymMatrix { dim: d, data })
    }

    /// Rectangular block with rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> DenseMatrix {
        let mut data = Vec::with_capacity((r1 - r0) * (c1 - c0));
        for i in r0..r1 {
            data.extend_from_slice(&self.row(i)[c0..c1]);
        }
        DenseMatrix { rows: r1 - r0, cols: c1 - c0, data }
    }

    pub fn matmul(&self, other: &SymMatrix) -> Result<DenseMatrix> {
        self.to_dense().matmul(&other.to_dense())
    }

    /// `Tr(self · other)` for symmetric arguments, without forming the product.
    pub fn trace_product(&self, other: &SymMatrix) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::Dimension { expected: self.dim, got: other.dim });
        }
        Ok(dot(&self.data, &other.data))
    }

    /// `y = self · x`.
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|i| dot(self.row(i), x)).collect()
    }
}

/// Symmetric positive-definite matrix with a certified smallest eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct SpdMatrix {
    base: SymMatrix,
    min_eigenvalue: f64,
}

impl SpdMatrix {
    pub fn new(base: SymMatrix) -> Result<Self> {
        let values = sym_eigenvalues(&base)?;
        let min_eigenvalue = values[0];
        if !(min_eigenvalue > 0.0) {
            return Err(Error::NotSpd { min_eigenvalue });
        }
        Ok(Self { base, min_eigenvalue })
    }

    /// Caller already knows the smallest eigenvalue (e.g. after a diagonal shift).
    pub(crate) fn with_min_eigenvalue(base: SymMatrix, min_eigenvalue: f64) -> Result<Self> {
        if !(min_eigenvalue > 0.0) {
            return Err(Error::NotSpd { min_eigenvalue });
        }
        Ok(Self { base, min_eigenvalue })
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.base
    }

    pub fn into_matrix(self) -> SymMatrix {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    pub fn cholesky(&self) -> Result<Cholesky> {
        Cholesky::factor(&self.base)
    }
}

/// Lower-triangular Cholesky factor `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    l: DenseMatrix,
}

impl Cholesky {
    pub fn factor(a: &SymMatrix) -> Result<Self> {
        let n = a.dim();
        let mut l = DenseMatrix::zeros(n, n);
        for j in 0..n {
            let ljj2 = a.get(j, j) - dot(&l.row(j)[..j], &l.row(j)[..j]);
            if !(ljj2 > 0.0) {
                return Err(Error::NotSpd { min_eigenvalue: ljj2 });
            }
            let ljj = ljj2.sqrt();
            l.set(j, j, ljj);
            let (head, tail) = l.data.split_at_mut((j + 1) * n);
            let row_j = &head[j * n..j * n + j];
            tail.par_chunks_mut(n).enumerate().for_each(|(off, row_i)| {
                let i = j + 1 + off;
                let v = (a.get(i, j) - dot(&row_i[..j], row_j)) / ljj;
                row_i[j] = v;
            });
        }
        Ok(Self { l })
    }

    pub fn factor_matrix(&self) -> &DenseMatrix {
        &self.l
    }

    /// Solves `A X = B` for a row-major right-hand side.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.l.rows();
        if b.rows() != n {
            return Err(Error::Dimension { expected: n, got: b.rows() });
        }
        let mut x = b.clone();
        let cols = x.cols();
        // forward: L y = b
        for i in 0..n {
            let (done, rest) = x.data.split_at_mut(i * cols);
            let row_i = &mut rest[..cols];
            for k in 0..i {
                let lik = self.l.get(i, k);
                if lik != 0.0 {
                    axpy(-lik, &done[k * cols..(k + 1) * cols], row_i);
                }
            }
            let inv = 1.0 / self.l.get(i, i);
            row_i.iter_mut().for_each(|v| *v *= inv);
        }
        // backward: Lᵀ x = y
        for i in (0..n).rev() {
            let (head, rest) = x.data.split_at_mut((i + 1) * cols);
            let row_i = &mut head[i * cols..];
            for k in (i + 1)..n {
                let lki = self.l.get(k, i);
                if lki != 0.0 {
                    axpy(-lki, &rest[(k - i - 1) * cols..(k - i) * cols], row_i);
                }
            }
            let inv = 1.0 / self.l.get(i, i);
            row_i.iter_mut().for_each(|v| *v *= inv);
        }
        Ok(x)
    }

    pub fn solve_vec(&self, b: &[f64]) -> Result<Vec<f64>> {
        let m = DenseMatrix::from_row_major(b.len(), 1, b.to_vec())?;
        Ok(self.solve_matrix(&m)?.data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_symmetrizes() {
        let s = SymMatrix::from_row_major(2, vec![1.0, 2.0, 4.0, 3.0]).unwrap();
        assert_eq!(s.get(0, 1), 3.0);
        assert_eq!(s.get(1, 0), 3.0);
    }

    #[test]
    fn rejects_non_finite() {
        let err = SymMatrix::from_row_major(1, vec![f64::NAN]).unwrap_err();
        assert!(matches!(err, Error::Input(_)));
    }

    #[test]
    fn cholesky_solves() {
        let a = SymMatrix::from_row_major(3, vec![4.0, 1.0, 0.5, 1.0, 3.0, 0.2, 0.5, 0.2, 2.0]).unwrap();
        let ch = Cholesky::factor(&a).unwrap();
        let b = vec![1.0, -2.0, 0.5];
        let x = ch.solve_vec(&b).unwrap();
        let ax = a.mul_vec(&x);
        for (u, v) in ax.iter().zip(&b) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = SymMatrix::from_diagonal(&[1.0, -0.5]);
        assert!(matches!(Cholesky::factor(&a), Err(Error::NotSpd { .. })));
    }

    #[test]
    fn trace_product_matches_matmul() {
        let a = SymMatrix::from_upper_fn(5, |i, j| (i + 2 * j) as f64 * 0.1);
        let b = SymMatrix::from_upper_fn(5, |i, j| ((i * j) as f64).cos());
        let p = a.matmul(&b).unwrap();
        let tr: f64 = (0..5).map(|i| p.get(i, i)).sum();
        assert!((tr - a.trace_product(&b).unwrap()).abs() < 1e-12);
    }
}
