use std::f64::consts::PI;

use super::{Grid, ManifoldModel, ManifoldPoint};
use crate::error::{Error, Result};

/// A unit covector `ξ` (w.r.t. `g₀`) at a base point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CospherePoint {
    base: ManifoldPoint,
    xi: [f64; 2],
}

fn dual_norm_sq(base: &ManifoldPoint, xi: &[f64; 2]) -> f64 {
    let inv = base.g0().inverse().expect("g0 is invertible");
    inv.quad_form(&xi[..base.dim()])
}

impl CospherePoint {
    pub fn new(base: ManifoldPoint, xi: [f64; 2]) -> Result<Self> {
        let norm = dual_norm_sq(&base, &xi).sqrt();
        if !((norm - 1.0).abs() <= 1e-12) {
            return Err(Error::Input(format!("covector has g0-norm {norm}, expected 1")));
        }
        Ok(Self { base, xi: Self::trim(&base, xi) })
    }

    /// Rescales a nonzero covector onto the unit cosphere.
    pub fn normalized(base: ManifoldPoint, xi: [f64; 2]) -> Result<Self> {
        let norm = dual_norm_sq(&base, &xi).sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::Input("cannot normalize a zero covector".into()));
        }
        Ok(Self { base, xi: Self::trim(&base, [xi[0] / norm, xi[1] / norm]) })
    }

    /// The covector at angle `alpha` in the orthonormal coframe of the
    /// (diagonal) reference metric; on the circle `alpha` selects the sign of
    /// `cos alpha`.
    pub fn from_angle(base: ManifoldPoint, alpha: f64) -> Self {
        let g = base.g0();
        let xi = if base.dim() == 1 {
            let s = if alpha.cos() >= 0.0 { 1.0 } else { -1.0 };
            [s * g.get(0, 0).sqrt(), 0.0]
        } else {
            let (s, c) = alpha.sin_cos();
            [g.get(0, 0).sqrt() * c, g.get(1, 1).sqrt() * s]
        };
        Self { base, xi }
    }

    fn trim(base: &ManifoldPoint, mut xi: [f64; 2]) -> [f64; 2] {
        if base.dim() == 1 {
            xi[1] = 0.0;
        }
        xi
    }

    pub fn base(&self) -> &ManifoldPoint {
        &self.base
    }

    pub fn xi(&self) -> [f64; 2] {
        self.xi
    }

    /// The active `n` components of `ξ`.
    pub fn xi_slice(&self) -> &[f64] {
        &self.xi[..self.base.dim()]
    }

    pub fn norm_g0(&self) -> f64 {
        dual_norm_sq(&self.base, &self.xi).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiberNode {
    pub xi: [f64; 2],
    pub weight: f64,
}

/// Quadrature for `dS_{g₀}` on the unit cosphere at `base`: the two points
/// `±1` in dimension one, `res` equiangular directions in dimension two.
pub fn fiber_nodes(base: &ManifoldPoint, res: usize) -> Result<Vec<FiberNode>> {
    if base.dim() == 1 {
        let g = base.g0().get(0, 0).sqrt();
        return Ok(vec![FiberNode { xi: [g, 0.0], weight: 1.0 }, FiberNode { xi: [-g, 0.0], weight: 1.0 }]);
    }
    if res < 4 {
        return Err(Error::Resolution(format!("fiber resolution {res} is below the minimum of 4")));
    }
    let h = 2.0 * PI / res as f64;
    Ok((0..res)
        .map(|j| FiberNode { xi: CospherePoint::from_angle(*base, j as f64 * h).xi, weight: h })
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CosphereQuadrature {
    pub nodes: Vec<CospherePoint>,
    pub weights: Vec<f64>,
}

impl CosphereQuadrature {
    pub fn total_mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn(&CospherePoint) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(c, w)| w * f(c)).sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Product of the model's base grid and the fiber rule.
pub fn cosphere_quadrature(model: ManifoldModel, base_res: usize, fiber_res: usize) -> Result<CosphereQuadrature> {
    if base_res < 4 || fiber_res < 4 {
        return Err(Error::Resolution(format!(
            "cosphere resolutions must be at least 4, got base {base_res}, fiber {fiber_res}"
        )));
    }
    let grid = Grid::product(model, base_res)?;
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (p, w) in grid.points().iter().zip(grid.weights()) {
        for f in fiber_nodes(p, fiber_res)? {
            nodes.push(CospherePoint { base: *p, xi: f.xi });
            weights.push(w * f.weight);
        }
    }
    Ok(CosphereQuadrature { nodes, weights })
}
