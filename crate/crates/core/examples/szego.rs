//! Szegő traces `Tr(B₁⋯B_k)` against `μ^n/(n(2π)^n) ∫ b₁⋯b_k dS`.

use bergman_lab::manifolds::{cosphere_quadrature, EigenBasis, ManifoldModel, ManifoldPoint};
use bergman_lab::metspace::szego_trace;
use bergman_lab::operators::{KnOptions, MultiplicationSymbol, ScalarField, Symbol};

fn main() -> bergman_lab::Result<()> {
    let opts = KnOptions::default();
    let torus = ManifoldModel::TORUS2;
    let tq = cosphere_quadrature(torus, 32, 16)?;
    let one = MultiplicationSymbol(ScalarField::constant(1.0));
    let cos1 = MultiplicationSymbol(ScalarField::band_limited("cos x1", 1, |p: &ManifoldPoint| p.coords()[0].cos()));

    let circle = ManifoldModel::CIRCLE;
    let cq = cosphere_quadrature(circle, 64, 4)?;
    let ecos = MultiplicationSymbol(ScalarField::new("e^{cos θ}", |p: &ManifoldPoint| p.coords()[0].cos().exp()));

    let cases: [(&str, Vec<&dyn Symbol>, EigenBasis, _); 3] = [
        ("torus2 Weyl law, b = 1", vec![&one], EigenBasis::through_mu_sq(torus, 400), &tq),
        ("torus2, b1 = b2 = cos x1", vec![&cos1, &cos1], EigenBasis::through_mu_sq(torus, 400), &tq),
        ("circle, b = e^(cos θ)", vec![&ecos], EigenBasis::new(circle, 128), &cq),
    ];
    for (label, symbols, basis, quad) in cases {
        let t = szego_trace(&symbols, &basis, &opts, quad)?;
        println!("{label}: measured {:.6} predicted {:.6} ratio {:.5}", t.measured, t.predicted, t.ratio);
    }
    Ok(())
}
