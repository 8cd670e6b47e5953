use std::f64::consts::PI;

use bergman_lab::hilb::{hilb_constant, hilb_operator, MetricField};
use bergman_lab::manifolds::{cosphere_quadrature, geodesic_flow_sphere, CospherePoint, EigenBasis, ManifoldModel, ManifoldPoint};
use bergman_lab::metspace::{dhilb_symbol, induced_norm_closed, MetricPerturbation};
use bergman_lab::operators::{assemble_multiplication, grid_for_degree, KnOptions, MultiplicationSymbol, ScalarField, Symbol};
use bergman_lab::sphereband::{band_dd, geodesic_average, one_plus_half_x3sq, x3};
use bergman_lab::tensor::PointTensor;
use num_complex::Complex64;
use proptest::prelude::*;

fn torus_perturbation(a: f64, b: f64, c: f64) -> MetricPerturbation {
    MetricPerturbation::new("mixed", move |p: &ManifoldPoint| {
        let x = p.coords();
        PointTensor::from_rows(2, [[a * x[0].cos(), b], [b, c + 0.5 * x[1].sin()]])
    })
}

fn sum(p: &MetricPerturbation, q: &MetricPerturbation, alpha: f64) -> MetricPerturbation {
    let (p, q) = (p.clone(), q.clone());
    MetricPerturbation::new("sum", move |x: &ManifoldPoint| p.eval(x) * alpha + q.eval(x))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn closed_norm_is_quadratic(a in -1.0f64..1.0, b in -0.5f64..0.5, c in -1.0f64..1.0, alpha in -3.0f64..3.0) {
        let quad = cosphere_quadrature(ManifoldModel::TORUS2, 12, 16).unwrap();
        let g = MetricField::reference();
        let gdot = torus_perturbation(a, b, c);
        let base = induced_norm_closed(&g, &gdot, &quad).unwrap();
        let scaled = induced_norm_closed(&g, &gdot.scaled(alpha), &quad).unwrap();
        prop_assert!(base >= 0.0);
        prop_assert!((scaled - alpha * alpha * base).abs() <= 1e-10 * (1.0 + base * alpha * alpha));
    }

    #[test]
    fn closed_norm_is_positive(amp in 0.05f64..1.0, k in 1i32..4) {
        let quad = cosphere_quadrature(ManifoldModel::CIRCLE, 64, 4).unwrap();
        let g = MetricField::conformal(ScalarField::new("0.3 sin", |p: &ManifoldPoint| 0.3 * p.coords()[0].sin()));
        let gdot = MetricPerturbation::new("cos", move |p: &ManifoldPoint| PointTensor::scalar(amp * (k as f64 * p.coords()[0]).cos()));
        prop_assert!(induced_norm_closed(&g, &gdot, &quad).unwrap() > 0.0);
    }

    #[test]
    fn derivative_symbol_is_linear(a in -1.0f64..1.0, c in -1.0f64..1.0, alpha in -2.0f64..2.0,
                                  x1 in 0.0f64..6.2, x2 in 0.0f64..6.2, ang in 0.0f64..6.2) {
        let model = ManifoldModel::TORUS2;
        let g = MetricField::general("skew", |p: &ManifoldPoint| {
            PointTensor::from_rows(2, [[2.0 + p.coords()[0].sin(), 0.3], [0.3, 1.5]])
        });
        let u = torus_perturbation(a, 0.2, c);
        let v = torus_perturbation(-c, -0.1, a);
        let p = ManifoldPoint::torus(x1, x2);
        let xi = [ang.cos(), ang.sin()];
        let du = dhilb_symbol(&g, &u, model).unwrap().eval(&p, xi);
        let dv = dhilb_symbol(&g, &v, model).unwrap().eval(&p, xi);
        let dw = dhilb_symbol(&g, &sum(&u, &v, alpha), model).unwrap().eval(&p, xi);
        prop_assert!((dw - (alpha * du + dv)).abs() <= 1e-12 * (1.0 + dw.abs()));
    }

    #[test]
    fn conformal_hilb_is_multiplication_on_torus(amp in -0.5f64..0.5) {
        // e^u g₀ in dimension two has Hilb symbol c·e^u, a pure multiplier
        let u = ScalarField::new("u", move |p: &ManifoldPoint| amp * p.coords()[0].cos());
        let g = MetricField::conformal(u);
        let basis = EigenBasis::through_mu_sq(ManifoldModel::TORUS2, 10);
        let kn = hilb_operator(&g, &basis, &KnOptions::default()).unwrap();
        let c = hilb_constant(ManifoldModel::TORUS2);
        let f = ScalarField::new("c e^u", move |p: &ManifoldPoint| c * (amp * p.coords()[0].cos()).exp());
        let grid = grid_for_degree(ManifoldModel::TORUS2, 64).unwrap();
        let m = assemble_multiplication(&f, &basis, &grid).unwrap();
        let d = kn.matrix().combine(1.0, m.matrix(), -1.0).unwrap().as_slice().iter().fold(0.0f64, |s, v| s.max(v.abs()));
        prop_assert!(d <= 1e-10 * c, "difference {d}");
    }

    #[test]
    fn geodesic_average_equivariance(theta in 0.3f64..2.8, phi in 0.0f64..6.2, alpha in 0.0f64..6.2,
                                     s in -3.0f64..3.0, k in -2i64..=2) {
        let sym = MultiplicationSymbol(x3());
        let c = CospherePoint::from_angle(ManifoldPoint::sphere(theta, phi).unwrap(), alpha);
        if let Ok(cs) = geodesic_flow_sphere(&c, s) {
            let a = geodesic_average(&sym, &c, k, 128).unwrap();
            let b = geodesic_average(&sym, &cs, k, 128).unwrap();
            let expected = a * Complex64::from_polar(1.0, k as f64 * s);
            prop_assert!((b - expected).norm() <= 1e-10);
        }
    }

    #[test]
    fn even_band_metric_is_antipodally_symmetric(theta in 0.3f64..2.8, phi in 0.0f64..3.1) {
        let p = ManifoldPoint::sphere(theta, phi).unwrap();
        let q = ManifoldPoint::sphere(PI - theta, phi + PI).unwrap();
        let field = band_dd(&one_plus_half_x3sq(), 12, 0, &[p, q]).unwrap();
        let (a, b) = (field.values()[0], field.values()[1]);
        // the antipodal map sends dθ to -dθ and fixes dφ
        let flipped = PointTensor::from_rows(2, [[b.get(0, 0), -b.get(0, 1)], [-b.get(1, 0), b.get(1, 1)]]);
        prop_assert!(a.max_abs_diff(&flipped) <= 1e-9 * (1.0 + a.spectral_norm()));
    }
}
