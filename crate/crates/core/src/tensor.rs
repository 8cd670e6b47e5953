//! Small covariant 2-tensors in chart components (dimension 1 or 2).

use std::ops::{Add, Mul, Sub};

/// An `n × n` chart matrix with `n ∈ {1, 2}`; unused slots stay zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointTensor {
    dim: usize,
    m: [[f64; 2]; 2],
}

impl PointTensor {
    pub fn zero(dim: usize) -> Self {
        assert!(dim == 1 || dim == 2, "tensor dimension must be 1 or 2");
        Self { dim, m: [[0.0; 2]; 2] }
    }

    pub fn identity(dim: usize) -> Self {
        Self::diagonal(dim, [1.0, 1.0])
    }

    pub fn diagonal(dim: usize, d: [f64; 2]) -> Self {
        let mut t = Self::zero(dim);
        t.m[0][0] = d[0];
        if dim == 2 {
            t.m[1][1] = d[1];
        }
        t
    }

    pub fn scalar(v: f64) -> Self {
        Self::diagonal(1, [v, 0.0])
    }

    pub fn from_rows(dim: usize, rows: [[f64; 2]; 2]) -> Self {
        let mut t = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                t.m[i][j] = rows[i][j];
            }
        }
        t
    }

    /// `a ⊗ b` with components `a_i b_j`.
    pub fn outer(dim: usize, a: &[f64], b: &[f64]) -> Self {
        let mut t = Self::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                t.m[i][j] = a[i] * b[j];
            }
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i < self.dim && j < self.dim);
        self.m[i][j] = v;
    }

    pub fn rows(&self) -> [[f64; 2]; 2] {
        self.m
    }

    pub fn transpose(&self) -> Self {
        let mut t = *self;
        t.m[0][1] = self.m[1][0];
        t.m[1][0] = self.m[0][1];
        t
    }

    pub fn symmetrized(&self) -> Self {
        (*self + self.transpose()) * 0.5
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.m[i][i]).sum()
    }

    pub fn det(&self) -> f64 {
        match self.dim {
            1 => self.m[0][0],
            _ => self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0],
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return None;
        }
        Some(match self.dim {
            1 => Self::scalar(1.0 / self.m[0][0]),
            _ => Self::from_rows(
                2,
                [[self.m[1][1] / det, -self.m[0][1] / det], [-self.m[1][0] / det, self.m[0][0] / det]],
            ),
        })
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut t = Self::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.m[i][j] = (0..self.dim).map(|k| self.m[i][k] * other.m[k][j]).sum();
            }
        }
        t
    }

    /// `xᵀ M y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                s += x[i] * self.m[i][j] * y[j];
            }
        }
        s
    }

    pub fn quad_form(&self, x: &[f64]) -> f64 {
        self.bilinear(x, x)
    }

    fn lower_cholesky(&self) -> Option<[[f64; 2]; 2]> {
        let a = self.m[0][0];
        if !(a > 0.0) {
            return None;
        }
        let l00 = a.sqrt();
        if self.dim == 1 {
            return Some([[l00, 0.0], [0.0, 0.0]]);
        }
        let l10 = self.m[1][0] / l00;
        let r = self.m[1][1] - l10 * l10;
        if !(r > 0.0) {
            return None;
        }
        Some([[l00, 0.0], [l10, r.sqrt()]])
    }

    /// `L⁻¹ M L⁻ᵀ` where `metric = L Lᵀ`: the components in a metric-orthonormal frame.
    pub fn in_orthonormal_frame(&self, metric: &PointTensor) -> Option<Self> {
        let l = metric.lower_cholesky()?;
        let n = self.dim;
        let linv = match n {
            1 => [[1.0 / l[0][0], 0.0], [0.0, 0.0]],
            _ => {
                let a = 1.0 / l[0][0];
                let c = 1.0 / l[1][1];
                [[a, 0.0], [-l[1][0] * a * c, c]]
            }
        };
        let li = Self::from_rows(n, linv);
        Some(li.matmul(self).matmul(&li.transpose()))
    }

    /// Eigenvalues (ascending) of the symmetric part.
    pub fn sym_eigenvalues(&self) -> [f64; 2] {
        let s = self.symmetrized();
        if self.dim == 1 {
            return [s.m[0][0], s.m[0][0]];
        }
        let a = s.m[0][0];
        let b = s.m[0][1];
        let c = s.m[1][1];
        let mean = 0.5 * (a + c);
        let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
        [mean - rad, mean + rad]
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        if self.dim == 1 {
            return self.m[0][0].abs();
        }
        let mtm = self.transpose().matmul(self);
        mtm.sym_eigenvalues()[1].max(0.0).sqrt()
    }

    /// Operator norm with respect to `metric` (largest singular value in an
    /// orthonormal frame). Panics if `metric` is not positive-definite.
    pub fn norm_wrt(&self, metric: &PointTensor) -> f64 {
        self.in_orthonormal_frame(metric)
            .expect("reference metric must be positive-definite")
            .spectral_norm()
    }

    /// Smallest eigenvalue relative to `metric`.
    pub fn min_eigenvalue_wrt(&self, metric: &PointTensor) -> Option<f64> {
        let t = self.in_orthonormal_frame(metric)?;
        Some(t.sym_eigenvalues()[0])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut d = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                d = d.max((self.m[i][j] - other.m[i][j]).abs());
            }
        }
        d
    }
}

impl Add for PointTensor {
    type Output = PointTensor;
    fn add(mut self, rhs: PointTensor) -> PointTensor {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..2 {
            for j in 0..2 {
                self.m[i][j] += rhs.m[i][j];
            }
        }
        self
    }
}

impl Sub for PointTensor {
    type Output = PointTensor;
    fn sub(mut self, rhs: PointTensor) -> PointTensor {
        debug_assert_eq!(self.dim, rhs.dim);
        for i in 0..2 {
            for j in 0..2 {
                self.m[i][j] -= rhs.m[i][j];
            }
        }
        self
    }
}

impl Mul<f64> for PointTensor {
    type Output = PointTensor;
    fn mul(mut self, c: f64) -> PointTensor {
        for row in &mut self.m {
            for v in row {
                *v *= c;
            }
        }
        self
    }
}
