//! Normalized associated Legendre functions (no Condon–Shortley phase).
//!
//! `P̃_lm(θ)` is scaled so that `Y_l0 = P̃_l0` and `Y_l,±m = √2 P̃_lm ·
//! {cos, sin}(mφ)` are L²-normalized on the unit sphere.

#[derive(Debug, Clone)]
pub struct LegendreTable {
    lmax: usize,
    p: Vec<f64>,
    dp: Vec<f64>,
}

#[inline]
fn idx(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}

impl LegendreTable {
    /// Values and θ-derivatives for `0 ≤ m ≤ l ≤ lmax` at colatitude `theta`
    /// (which must stay away from the poles).
    pub fn new(lmax: usize, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        let len = idx(lmax, lmax) + 1;
        let mut p = vec![0.0; len];
        let mut dp = vec![0.0; len];

        p[0] = 0.25 / std::f64::consts::PI;
        p[0] = p[0].sqrt();
        for m in 1..=lmax {
            let mf = m as f64;
            p[idx(m, m)] = ((2.0 * mf + 1.0) / (2.0 * mf)).sqrt() * s * p[idx(m - 1, m - 1)];
        }
        for m in 0..lmax {
            p[idx(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * c * p[idx(m, m)];
        }
        for m in 0..=lmax {
            let mf = m as f64;
            for l in (m + 2)..=lmax {
                let lf = l as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let lm1 = lf - 1.0;
                let b = ((lm1 * lm1 - mf * mf) / (4.0 * lm1 * lm1 - 1.0)).sqrt();
                p[idx(l, m)] = a * (c * p[idx(l - 1, m)] - b * p[idx(l - 2, m)]);
            }
        }
        // sinθ · dP̃_lm/dθ = l cosθ P̃_lm − √((2l+1)(l²−m²)/(2l−1)) P̃_{l−1,m}
        for l in 0..=lmax {
            let lf = l as f64;
            for m in 0..=l {
                let mf = m as f64;
                let mut v = lf * c * p[idx(l, m)];
                if m < l {
                    let k = ((2.0 * lf + 1.0) * (lf * lf - mf * mf) / (2.0 * lf - 1.0)).sqrt();
                    v -= k * p[idx(l - 1, m)];
                }
                dp[idx(l, m)] = v / s;
            }
        }
        Self { lmax, p, dp }
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    #[inline]
    pub fn value(&self, l: usize, m: usize) -> f64 {
        self.p[idx(l, m)]
    }

    #[inline]
    pub fn derivative(&self, l: usize, m: usize) -> f64 {
        self.dp[idx(l, m)]
    }
}
