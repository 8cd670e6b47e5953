//! Fits the leading coefficient of `dd_kernel(I) ~ c μ^{n+2} g₀` on all three models.

use bergman_lab::bergman::isometry_fit;
use bergman_lab::manifolds::{Cutoff, ManifoldModel};

fn main() -> bergman_lab::Result<()> {
    let runs = [
        (ManifoldModel::CIRCLE, [16, 32, 64, 128].map(Cutoff::Level).to_vec()),
        (ManifoldModel::TORUS2, (100..=400).step_by(10).map(Cutoff::MuSq).collect()),
        (ManifoldModel::SPHERE2, [10, 15, 20, 25, 30].map(Cutoff::Level).to_vec()),
    ];
    for (model, cutoffs) in runs {
        let fit = isometry_fit(model, &cutoffs, 8)?;
        println!("{}: fitted {:.6e}  theory {:.6e}  rel err {:.3e}", model.kind(), fit.coefficient, fit.theory, fit.rel_err);
        for s in &fit.samples {
            println!("  level {:4}  mu {:9.4}  scaled {:.6e}  residual {:+.2e}", s.level, s.mu, s.scaled, s.residual);
        }
    }
    Ok(())
}
