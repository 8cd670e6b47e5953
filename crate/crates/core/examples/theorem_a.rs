//! Bergman metrics of Toeplitz compressions against the leading-term
//! prediction: multiplication by `e^{cos θ}` on the circle and the Fourier
//! multiplier `ξ₁²/|ξ|²` on the torus.

use bergman_lab::manifolds::{EigenBasis, Grid, ManifoldModel, ManifoldPoint};
use bergman_lab::operators::{
    assemble_kohn_nirenberg, assemble_multiplication, grid_for_degree, theorem_a_check, FnSymbol, KnOptions,
    MultiplicationSymbol, ScalarField, SMOOTH_MARGIN,
};

fn main() -> bergman_lab::Result<()> {
    let circle = ManifoldModel::CIRCLE;
    let f = ScalarField::new("e^{cos θ}", |p: &ManifoldPoint| p.coords()[0].cos().exp());
    let basis = EigenBasis::new(circle, 96);
    let b = assemble_multiplication(&f, &basis, &grid_for_degree(circle, 2 * 96 + SMOOTH_MARGIN)?)?;
    let sample = Grid::product_shifted(circle, 48, 0.05)?;
    println!("circle, f = e^(cos θ)");
    for row in theorem_a_check(&b, &basis, &MultiplicationSymbol(f), &[24, 48, 64, 96], &sample, 16)? {
        println!("  N {:4}  sup err {:.4e}  L2 err {:.4e}  shift {:.1e}", row.level, row.sup_rel_err, row.l2_rel_err, row.shift);
    }

    let torus = ManifoldModel::TORUS2;
    let symbol = FnSymbol::multiplier(|xi| xi[0] * xi[0]);
    let basis = EigenBasis::through_mu_sq(torus, 400);
    let b = assemble_kohn_nirenberg(&symbol, &basis, &KnOptions::default())?;
    let sample = Grid::product_shifted(torus, 6, 0.05)?;
    let levels: Vec<usize> = [100u64, 225, 400]
        .iter()
        .map(|&m| EigenBasis::through_mu_sq(torus, m).top_level().index)
        .collect();
    println!("torus2, b = ξ₁²/|ξ|²");
    for row in theorem_a_check(&b, &basis, &symbol, &levels, &sample, 64)? {
        println!("  mu² {:4}  sup err {:.4e}  L2 err {:.4e}  shift {:.1e}", row.mu_sq, row.sup_rel_err, row.l2_rel_err, row.shift);
    }
    Ok(())
}
