//! Band metrics on the round sphere against geodesic-flow averages, and the
//! cumulative sum over all bands up to `N`.

use bergman_lab::manifolds::{Grid, ManifoldModel};
use bergman_lab::sphereband::{cumulative_band_sum, one_plus_half_x3sq, sphere_band_check, takahashi_check, x3};

fn main() -> bergman_lab::Result<()> {
    let sphere = ManifoldModel::SPHERE2;
    let pts = Grid::product_shifted(sphere, 4, 0.3)?.points().to_vec();

    for n in [1, 2, 5, 10] {
        println!("takahashi N {n:2}: deviation {:.2e}", takahashi_check(n, &pts)?);
    }
    for row in sphere_band_check(&one_plus_half_x3sq(), &[10, 20, 40], 0, &pts, 64, 128)? {
        println!("a = 1 + x3²/2, k = 0, N {:2}: rel err {:.4e}", row.level, row.rel_err);
    }
    for row in sphere_band_check(&x3(), &[10, 20], 1, &pts, 64, 128)? {
        println!("a = x3, k = 1, N {:2}: rel err {:.4e}", row.level, row.rel_err);
    }
    for row in cumulative_band_sum(&one_plus_half_x3sq(), &[10, 20, 40], &pts, 64)? {
        println!("cumulative, N {:2}: rel err {:.4e}", row.level, row.rel_err);
    }
    Ok(())
}
