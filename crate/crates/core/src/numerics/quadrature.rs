use std::f64::consts::PI;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureKind {
    /// Equispaced nodes on `[0, 2π)`, weights `2π/m`.
    PeriodicTrapezoid,
    /// Gauss–Legendre nodes on `[-1, 1]`.
    GaussLegendre,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quadrature1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub kind: QuadratureKind,
}

impl Quadrature1D {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// Highest exact degree: trigonometric degree for the trapezoid rule,
    /// polynomial degree for Gauss–Legendre.
    pub fn exact_degree(&self) -> usize {
        match self.kind {
            QuadratureKind::PeriodicTrapezoid => self.len() - 1,
            QuadratureKind::GaussLegendre => 2 * self.len() - 1,
        }
    }
}

pub fn make_quadrature(kind: QuadratureKind, m: usize) -> Result<Quadrature1D> {
    if m < 2 {
        return Err(Error::Input(format!("quadrature needs at least 2 nodes, got {m}")));
    }
    Ok(match kind {
        QuadratureKind::PeriodicTrapezoid => {
            let h = 2.0 * PI / m as f64;
            Quadrature1D {
                nodes: (0..m).map(|j| j as f64 * h).collect(),
                weights: vec![h; m],
                kind,
            }
        }
        QuadratureKind::GaussLegendre => gauss_legendre(m),
    })
}

/// Legendre polynomial `P_m(x)` and its derivative by the three-term recurrence.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gauss_legendre(m: usize) -> Quadrature1D {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let half = m.div_ceil(2);
    for i in 0..half {
        // Tricomi initial guess, then Newton.
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // ascending order
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Quadrature1D { nodes, weights, kind: QuadratureKind::GaussLegendre }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trapezoid_cos_squared() {
        let q = make_quadrature(QuadratureKind::PeriodicTrapezoid, 8).unwrap();
        let v = q.integrate(|t| t.cos().powi(2));
        assert!((v - PI).abs() < 1e-14);
    }

    #[test]
    fn trapezoid_weight_sum() {
        let q = make_quadrature(QuadratureKind::PeriodicTrapezoid, 4).unwrap();
        let s: f64 = q.weights.iter().sum();
        assert!((s - 2.0 * PI).abs() < 1e-15);
    }

    #[test]
    fn gauss_two_nodes_quadratic() {
        let q = make_quadrature(QuadratureKind::GaussLegendre, 2).unwrap();
        assert!((q.integrate(|x| x * x) - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn gauss_exactness_degree() {
        for m in [3usize, 7, 16, 33] {
            let q = make_quadrature(QuadratureKind::GaussLegendre, m).unwrap();
            let s: f64 = q.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-12 * 2.0);
            for deg in 0..=(2 * m - 1) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let v = q.integrate(|x| x.powi(deg as i32));
                assert!((v - exact).abs() < 1e-13, "m={m} deg={deg} v={v}");
            }
            assert!(q.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn trapezoid_exact_below_node_count() {
        let m = 9;
        let q = make_quadrature(QuadratureKind::PeriodicTrapezoid, m).unwrap();
        for k in 1..m {
            assert!(q.integrate(|t| (k as f64 * t).cos()).abs() < 1e-13);
            assert!(q.integrate(|t| (k as f64 * t).sin()).abs() < 1e-13);
        }
        // aliasing at k = m
        assert!((q.integrate(|t| (m as f64 * t).cos()) - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn too_few_nodes() {
        assert!(make_quadrature(QuadratureKind::GaussLegendre, 1).is_err());
        assert!(make_quadrature(QuadratureKind::PeriodicTrapezoid, 0).is_err());
    }
}
