//! The induced norm `μ_N^{-n} Tr(R⁻¹ṘR⁻¹Ṙ)` against its closed-form limit,
//! plus a finite-difference check of the derivative symbol.

use bergman_lab::hilb::MetricField;
use bergman_lab::manifolds::{cosphere_quadrature, EigenBasis, ManifoldModel, ManifoldPoint};
use bergman_lab::metspace::{dhilb_fd_error, induced_norm_closed, induced_norm_trace, MetricPerturbation};
use bergman_lab::operators::KnOptions;
use bergman_lab::tensor::PointTensor;

fn main() -> bergman_lab::Result<()> {
    let g = MetricField::reference();

    let circle = ManifoldModel::CIRCLE;
    let gdot = MetricPerturbation::new("cos-theta", |p: &ManifoldPoint| PointTensor::scalar(p.coords()[0].cos()));
    let closed = induced_norm_closed(&g, &gdot, &cosphere_quadrature(circle, 64, 4)?)?;
    println!("circle, ġ = cos θ dθ², closed form {closed:.6}");
    for n in [32, 64, 96] {
        let t = induced_norm_trace(&g, &gdot, &EigenBasis::new(circle, n), &KnOptions::default())?;
        println!("  N {n:3}  trace {t:.6}  ratio {:.4}", t / closed);
    }

    let torus = ManifoldModel::TORUS2;
    let gdot = MetricPerturbation::new("cos-x1-dx1dx1", |p: &ManifoldPoint| {
        PointTensor::diagonal(2, [p.coords()[0].cos(), 0.0])
    });
    let closed = induced_norm_closed(&g, &gdot, &cosphere_quadrature(torus, 32, 64)?)?;
    println!("torus2, ġ = cos x1 dx1², closed form {closed:.6}");
    for mu2 in [100, 225, 400] {
        let basis = EigenBasis::through_mu_sq(torus, mu2);
        let left = induced_norm_trace(&g, &gdot, &basis, &KnOptions::default())?;
        let weyl = induced_norm_trace(&g, &gdot, &basis, &KnOptions::weyl())?;
        println!("  mu² {mu2:3}  left {left:.6}  weyl {weyl:.6}  ratio {:.4}", left / closed);
    }

    let g = MetricField::general("skew", |p: &ManifoldPoint| {
        let x = p.coords();
        PointTensor::from_rows(2, [[2.0 + x[0].sin(), 0.3], [0.3, 1.5 + 0.5 * x[1].cos()]])
    });
    let gdot = MetricPerturbation::new("mixed", |_| PointTensor::from_rows(2, [[0.7, -0.4], [-0.4, 1.1]]));
    let p = ManifoldPoint::torus(0.4, 1.3);
    let e3 = dhilb_fd_error(&g, &gdot, torus, &p, [0.6, 0.8], 1e-3)?;
    let e4 = dhilb_fd_error(&g, &gdot, torus, &p, [0.6, 0.8], 1e-4)?;
    println!("derivative symbol vs central differences: {e3:.3e} {e4:.3e}  ratio {:.1}", e3 / e4);
    Ok(())
}
