use super::{ManifoldKind, ManifoldModel};

/// One distinct eigenvalue `μ_N²` of the reference Laplacian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectralLevel {
    pub index: usize,
    /// All three models have integer spectra.
    pub mu_sq: u64,
    pub multiplicity: usize,
    /// Flat index of the first eigenfunction of this level in the full basis.
    pub offset: usize,
}

impl SpectralLevel {
    pub fn mu(&self) -> f64 {
        (self.mu_sq as f64).sqrt()
    }

    pub fn end(&self) -> usize {
        self.offset + self.multiplicity
    }
}

fn isqrt(v: u64) -> u64 {
    let mut r = (v as f64).sqrt() as u64;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    r
}

/// Half-lattice representatives `k` with `|k|² = mu_sq`: `k₁ > 0`, or
/// `k₁ = 0` and `k₂ > 0`, sorted lexicographically.
pub fn torus_representatives(mu_sq: u64) -> Vec<[i64; 2]> {
    let mut reps = Vec::new();
    if mu_sq == 0 {
        return reps;
    }
    let amax = isqrt(mu_sq);
    for a in 0..=amax {
        let rest = mu_sq - a * a;
        let b = isqrt(rest);
        if b * b != rest {
            continue;
        }
        let (a, b) = (a as i64, b as i64);
        if a == 0 {
            reps.push([0, b]);
        } else if b == 0 {
            reps.push([a, 0]);
        } else {
            reps.push([a, -b]);
            reps.push([a, b]);
        }
    }
    reps
}

fn multiplicity_of(kind: ManifoldKind, index: usize, mu_sq: u64) -> usize {
    match kind {
        ManifoldKind::Circle => {
            if index == 0 {
                1
            } else {
                2
            }
        }
        ManifoldKind::Sphere2 => 2 * index + 1,
        ManifoldKind::Torus2 => {
            if mu_sq == 0 {
                1
            } else {
                2 * torus_representatives(mu_sq).len()
            }
        }
    }
}

struct LevelIter {
    kind: ManifoldKind,
    index: usize,
    next_candidate: u64,
    offset: usize,
}

impl Iterator for LevelIter {
    type Item = SpectralLevel;
    fn next(&mut self) -> Option<SpectralLevel> {
        let mu_sq = match self.kind {
            ManifoldKind::Circle => (self.index as u64).pow(2),
            ManifoldKind::Sphere2 => (self.index as u64) * (self.index as u64 + 1),
            ManifoldKind::Torus2 => {
                let mut s = self.next_candidate;
                while s > 0 && torus_representatives(s).is_empty() {
                    s += 1;
                }
                self.next_candidate = s + 1;
                s
            }
        };
        let multiplicity = multiplicity_of(self.kind, self.index, mu_sq);
        let level = SpectralLevel { index: self.index, mu_sq, multiplicity, offset: self.offset };
        self.index += 1;
        self.offset += multiplicity;
        Some(level)
    }
}

fn iter_levels(model: ManifoldModel) -> LevelIter {
    LevelIter { kind: model.kind(), index: 0, next_candidate: 0, offset: 0 }
}

/// Levels `0..=n_max`, complete and sorted.
pub fn enumerate_levels(model: ManifoldModel, n_max: usize) -> Vec<SpectralLevel> {
    iter_levels(model).take(n_max + 1).collect()
}

/// All levels with `μ² ≤ mu_sq_max`.
pub fn levels_through_mu_sq(model: ManifoldModel, mu_sq_max: u64) -> Vec<SpectralLevel> {
    iter_levels(model).take_while(|l| l.mu_sq <= mu_sq_max).collect()
}

/// `d_{≤N}`.
pub fn basis_dimension(model: ManifoldModel, n: usize) -> usize {
    match model.kind() {
        ManifoldKind::Circle => 2 * n + 1,
        ManifoldKind::Sphere2 => (n + 1) * (n + 1),
        ManifoldKind::Torus2 => enumerate_levels(model, n).last().map_or(0, |l| l.end()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_levels_through_five() {
        let levels = levels_through_mu_sq(ManifoldModel::TORUS2, 5);
        let mu: Vec<u64> = levels.iter().map(|l| l.mu_sq).collect();
        let mult: Vec<usize> = levels.iter().map(|l| l.multiplicity).collect();
        assert_eq!(mu, vec![0, 1, 2, 4, 5]);
        assert_eq!(mult, vec![1, 4, 4, 4, 8]);
        assert_eq!(basis_dimension(ManifoldModel::TORUS2, 4), 21);
    }

    #[test]
    fn sphere_and_circle_counts() {
        let l = enumerate_levels(ManifoldModel::SPHERE2, 2);
        assert_eq!(l[2].mu_sq, 6);
        assert_eq!(l[2].multiplicity, 5);
        assert_eq!(basis_dimension(ManifoldModel::CIRCLE, 3), 7);
        for n in 0..12 {
            assert_eq!(basis_dimension(ManifoldModel::SPHERE2, n), (n + 1) * (n + 1));
        }
    }

    #[test]
    fn offsets_are_cumulative() {
        for model in [ManifoldModel::CIRCLE, ManifoldModel::TORUS2, ManifoldModel::SPHERE2] {
            let levels = enumerate_levels(model, 20);
            for w in levels.windows(2) {
                assert_eq!(w[0].end(), w[1].offset);
                assert!(w[0].mu_sq < w[1].mu_sq);
            }
        }
    }

    #[test]
    fn representatives_are_half_lattice() {
        assert_eq!(torus_representatives(5), vec![[1, -2], [1, 2], [2, -1], [2, 1]]);
        assert_eq!(torus_representatives(1), vec![[0, 1], [1, 0]]);
        assert!(torus_representatives(3).is_empty());
    }
}
