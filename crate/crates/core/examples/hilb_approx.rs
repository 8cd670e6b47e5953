//! Recovering a metric from its Hilb inner product: `μ_N^{-(n+2)} E_N(Hilb_N(g))`
//! against `g`, for a conformal circle metric and an anisotropic torus metric.

use bergman_lab::hilb::{hilb_sweep, MetricField};
use bergman_lab::manifolds::{EigenBasis, Grid, ManifoldModel, ManifoldPoint};
use bergman_lab::operators::{KnOptions, ScalarField};

fn main() -> bergman_lab::Result<()> {
    let circle = ManifoldModel::CIRCLE;
    let g = MetricField::conformal(ScalarField::new("cos θ", |p: &ManifoldPoint| p.coords()[0].cos()));
    let basis = EigenBasis::new(circle, 96);
    let grid = Grid::product_shifted(circle, 48, 0.05)?;
    println!("circle, g = e^(cos θ) dθ²");
    for r in hilb_sweep(&g, &basis, &[24, 48, 64, 96], &grid, &KnOptions::default())? {
        println!("  N {:4}  sup {:.4e}  L2 {:.4e}  shift/|R| {:.1e}", r.level, r.sup_rel_err, r.l2_rel_err, r.relative_shift);
    }

    let torus = ManifoldModel::TORUS2;
    let a = ScalarField::new("0.3 cos x1", |p: &ManifoldPoint| 0.3 * p.coords()[0].cos());
    let b = ScalarField::new("0.3 cos x2", |p: &ManifoldPoint| 0.3 * p.coords()[1].cos());
    let g = MetricField::diagonal_exponential("aniso-diag:0.3,0.3", a, b);
    let basis = EigenBasis::through_mu_sq(torus, 400);
    let grid = Grid::product_shifted(torus, 6, 0.05)?;
    let levels: Vec<usize> =
        [100u64, 225, 400].iter().map(|&m| EigenBasis::through_mu_sq(torus, m).top_level().index).collect();
    println!("torus2, g = diag(e^(0.3 cos x1), e^(0.3 cos x2))");
    for r in hilb_sweep(&g, &basis, &levels, &grid, &KnOptions::default())? {
        println!("  mu² {:4}  sup {:.4e}  L2 {:.4e}  shift/|R| {:.1e}", r.mu_sq, r.sup_rel_err, r.l2_rel_err, r.relative_shift);
    }
    Ok(())
}
