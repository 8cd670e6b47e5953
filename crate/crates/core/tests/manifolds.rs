use std::f64::consts::PI;

use bergman_lab::manifolds::{
    cosphere_quadrature, geodesic_flow_sphere, CospherePoint, EigenBasis, Grid, ManifoldModel, ManifoldPoint,
};
use proptest::prelude::*;

/// max |G − I| for the Gram matrix of `basis` under `grid`.
fn gram_defect(basis: &EigenBasis, grid: &Grid) -> f64 {
    let d = basis.len();
    let mut gram = vec![0.0; d * d];
    for (p, w) in grid.points().iter().zip(grid.weights()) {
        let v = basis.eval_values(p).unwrap();
        for j in 0..d {
            let a = w * v[j];
            for k in j..d {
                gram[j * d + k] += a * v[k];
            }
        }
    }
    let mut worst = 0.0f64;
    for j in 0..d {
        for k in j..d {
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((gram[j * d + k] - target).abs());
        }
    }
    worst
}

#[test]
fn circle_gram_is_identity() {
    let basis = EigenBasis::new(ManifoldModel::CIRCLE, 200);
    let grid = Grid::product(ManifoldModel::CIRCLE, 402).unwrap();
    assert!(gram_defect(&basis, &grid) < 1e-10);
}

#[test]
fn torus_gram_on_64_grid() {
    let basis = EigenBasis::through_mu_sq(ManifoldModel::TORUS2, 200);
    let grid = Grid::product(ManifoldModel::TORUS2, 64).unwrap();
    assert!(gram_defect(&basis, &grid) < 1e-12);
}

#[test]
fn torus_gram_through_600() {
    let basis = EigenBasis::through_mu_sq(ManifoldModel::TORUS2, 600);
    let grid = Grid::product(ManifoldModel::TORUS2, 52).unwrap();
    assert!(gram_defect(&basis, &grid) < 1e-10);
}

#[test]
fn sphere_gram_gauss_32_by_64() {
    let basis = EigenBasis::new(ManifoldModel::SPHERE2, 6);
    let grid = Grid::tensor(ManifoldModel::SPHERE2, [32, 64], 0.0).unwrap();
    assert!(gram_defect(&basis, &grid) < 1e-10);
}

#[test]
fn sphere_gram_through_40() {
    let basis = EigenBasis::new(ManifoldModel::SPHERE2, 40);
    let grid = Grid::product(ManifoldModel::SPHERE2, 42).unwrap();
    assert!(gram_defect(&basis, &grid) < 1e-10);
}

/// Second-difference Laplacian of every basis function at `p`.
fn fd_laplacian_check(basis: &EigenBasis, p: &ManifoldPoint, h: f64) -> f64 {
    let [a, b] = p.coords();
    let v0 = basis.eval_values(p).unwrap();
    let lap: Vec<f64> = match basis.model().dim() {
        1 => {
            let vp = basis.eval_values(&ManifoldPoint::circle(a + h)).unwrap();
            let vm = basis.eval_values(&ManifoldPoint::circle(a - h)).unwrap();
            (0..v0.len()).map(|j| -(vp[j] - 2.0 * v0[j] + vm[j]) / (h * h)).collect()
        }
        _ if p.ambient().is_none() => {
            let f = |x: f64, y: f64| basis.eval_values(&ManifoldPoint::torus(x, y)).unwrap();
            let (xp, xm, yp, ym) = (f(a + h, b), f(a - h, b), f(a, b + h), f(a, b - h));
            (0..v0.len()).map(|j| -(xp[j] + xm[j] + yp[j] + ym[j] - 4.0 * v0[j]) / (h * h)).collect()
        }
        _ => {
            // Δ = −(1/sinθ)∂θ(sinθ ∂θ) − (1/sin²θ)∂φ²
            let f = |t: f64, q: f64| basis.eval_values(&ManifoldPoint::sphere(t, q).unwrap()).unwrap();
            let (tp, tm, qp, qm) = (f(a + h, b), f(a - h, b), f(a, b + h), f(a, b - h));
            let (s, sp, sm) = (a.sin(), (a + h / 2.0).sin(), (a - h / 2.0).sin());
            (0..v0.len())
                .map(|j| {
                    let th = (sp * (tp[j] - v0[j]) - sm * (v0[j] - tm[j])) / (h * h * s);
                    let ph = (qp[j] - 2.0 * v0[j] + qm[j]) / (h * h * s * s);
                    -(th + ph)
                })
                .collect()
        }
    };
    let mut worst = 0.0f64;
    for (j, e) in basis.entries().iter().enumerate() {
        let lambda_sq = e.mu_sq as f64;
        let scale = lambda_sq * (v0[j].abs() + 1e-2) + 1.0;
        worst = worst.max((lap[j] - lambda_sq * v0[j]).abs() / scale);
    }
    worst
}

#[test]
fn eigen_equation_finite_difference() {
    let h = 1e-4;
    let c = EigenBasis::new(ManifoldModel::CIRCLE, 12);
    assert!(fd_laplacian_check(&c, &ManifoldPoint::circle(0.37), h) < 1e-4);
    let t = EigenBasis::through_mu_sq(ManifoldModel::TORUS2, 50);
    assert!(fd_laplacian_check(&t, &ManifoldPoint::torus(0.3, 2.1), h) < 1e-4);
    let s = EigenBasis::new(ManifoldModel::SPHERE2, 8);
    for (theta, phi) in [(0.6, 0.2), (1.9, 4.0)] {
        assert!(fd_laplacian_check(&s, &ManifoldPoint::sphere(theta, phi).unwrap(), h) < 1e-4);
    }
}

#[test]
fn weyl_count_within_five_percent() {
    for (model, basis) in [
        (ManifoldModel::CIRCLE, EigenBasis::new(ManifoldModel::CIRCLE, 200)),
        (ManifoldModel::TORUS2, EigenBasis::through_mu_sq(ManifoldModel::TORUS2, 600)),
        (ManifoldModel::SPHERE2, EigenBasis::new(ManifoldModel::SPHERE2, 40)),
    ] {
        let ratio = basis.len() as f64 / model.weyl_count(basis.mu_top());
        assert!((ratio - 1.0).abs() < 0.05, "{:?}: ratio {ratio}", model.kind());
    }
}

#[test]
fn sphere_cosphere_mass() {
    let q = cosphere_quadrature(ManifoldModel::SPHERE2, 10, 16).unwrap();
    let m = 2.0 * PI * 4.0 * PI;
    assert!((q.total_mass() - m).abs() < 1e-8 * m);
}

proptest! {
    #[test]
    fn geodesic_flow_preserves_unit_norm(theta in 0.05f64..3.09, phi in 0.0f64..6.2, alpha in 0.0f64..6.2, t in -10.0f64..10.0) {
        let c = CospherePoint::from_angle(ManifoldPoint::sphere(theta, phi).unwrap(), alpha);
        if let Ok(d) = geodesic_flow_sphere(&c, t) {
            prop_assert!((d.norm_g0() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn geodesic_flow_is_a_group(theta in 0.2f64..2.9, phi in 0.0f64..6.2, alpha in 0.0f64..6.2, s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let c = CospherePoint::from_angle(ManifoldPoint::sphere(theta, phi).unwrap(), alpha);
        let a = geodesic_flow_sphere(&c, s + t);
        let b = geodesic_flow_sphere(&c, s).and_then(|m| geodesic_flow_sphere(&m, t));
        if let (Ok(a), Ok(b)) = (a, b) {
            let xa = a.base().ambient().unwrap();
            let xb = b.base().ambient().unwrap();
            for i in 0..3 {
                prop_assert!((xa[i] - xb[i]).abs() < 1e-9);
            }
        }
    }
}
