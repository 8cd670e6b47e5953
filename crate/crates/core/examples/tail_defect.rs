//! Normalized coupling between `H_{≤N}` and `H_{N+1} ⊕ … ⊕ H_{2N}` under
//! multiplication by a smooth function; it decays as `N` grows.

use bergman_lab::manifolds::{EigenBasis, Grid, ManifoldModel, ManifoldPoint};
use bergman_lab::operators::{multiplication_tail_defect, ScalarField};

fn main() -> bergman_lab::Result<()> {
    let circle = ManifoldModel::CIRCLE;
    let f = ScalarField::new("e^{cos θ}", |p: &ManifoldPoint| p.coords()[0].cos().exp());
    let pts = Grid::product_shifted(circle, 48, 0.05)?.points().to_vec();
    println!("circle, f = e^(cos θ)");
    for n in [8, 16, 32, 64] {
        println!("  N {n:3}  defect {:.4e}", multiplication_tail_defect(&f, circle, n, &pts)?);
    }

    let torus = ManifoldModel::TORUS2;
    let f = ScalarField::new("e^{0.3 cos x1}", |p: &ManifoldPoint| (0.3 * p.coords()[0].cos()).exp());
    let pts = Grid::product_shifted(torus, 6, 0.05)?.points().to_vec();
    println!("torus2, f = e^(0.3 cos x1)");
    for mu2 in [9, 36, 144, 400] {
        let level = EigenBasis::through_mu_sq(torus, mu2).top_level().index;
        println!("  mu² {mu2:3}  defect {:.4e}", multiplication_tail_defect(&f, torus, level, &pts)?);
    }
    Ok(())
}
