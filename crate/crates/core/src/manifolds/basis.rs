use std::f64::consts::{PI, SQRT_2};
use std::ops::Range;

use super::harmonics::LegendreTable;
use super::levels::{enumerate_levels, levels_through_mu_sq, torus_representatives, SpectralLevel};
use super::{ManifoldKind, ManifoldModel, ManifoldPoint};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisFunction {
    Constant,
    CircleCos(u32),
    CircleSin(u32),
    /// `cos(k·x)` for a half-lattice representative `k`.
    TorusCos([i64; 2]),
    TorusSin([i64; 2]),
    /// Real spherical harmonic; `m < 0` selects the `sin(|m|φ)` member.
    Harmonic { l: u32, m: i32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisEntry {
    pub level: usize,
    pub mu_sq: u64,
    pub function: BasisFunction,
}

impl BasisEntry {
    /// Frequency `λ_j`, with `λ_j² = μ²` of its level.
    pub fn lambda(&self) -> f64 {
        (self.mu_sq as f64).sqrt()
    }
}

/// Values and chart gradients of every basis function at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSample {
    pub values: Vec<f64>,
    /// Row-major `d × n`: row `j` is `dφ_j`.
    pub gradients: Vec<f64>,
    pub dim: usize,
}

impl BasisSample {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn grad(&self, j: usize) -> &[f64] {
        &self.gradients[j * self.dim..(j + 1) * self.dim]
    }
}

/// How far a basis extends: through a level index or through a `μ²` cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cutoff {
    Level(usize),
    MuSq(u64),
}

/// An ordered orthonormal eigenbasis of the levels `lo..=hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenBasis {
    model: ManifoldModel,
    levels: Vec<SpectralLevel>,
    entries: Vec<BasisEntry>,
}

fn level_entries(kind: ManifoldKind, level: &SpectralLevel, out: &mut Vec<BasisEntry>) {
    let mut push = |function| out.push(BasisEntry { level: level.index, mu_sq: level.mu_sq, function });
    if level.mu_sq == 0 {
        push(BasisFunction::Constant);
        return;
    }
    match kind {
        ManifoldKind::Circle => {
            let k = level.index as u32;
            push(BasisFunction::CircleCos(k));
            push(BasisFunction::CircleSin(k));
        }
        ManifoldKind::Torus2 => {
            for k in torus_representatives(level.mu_sq) {
                push(BasisFunction::TorusCos(k));
                push(BasisFunction::TorusSin(k));
            }
        }
        ManifoldKind::Sphere2 => {
            let l = level.index as i32;
            for m in -l..=l {
                push(BasisFunction::Harmonic { l: l as u32, m });
            }
        }
    }
}

impl EigenBasis {
    fn from_levels(model: ManifoldModel, levels: Vec<SpectralLevel>) -> Self {
        let mut entries = Vec::with_capacity(levels.iter().map(|l| l.multiplicity).sum());
        for level in &levels {
            level_entries(model.kind(), level, &mut entries);
        }
        debug_assert!(levels.iter().all(|l| l.multiplicity > 0));
        Self { model, levels, entries }
    }

    /// `H_{≤N}`: levels `0..=top`, constants included.
    pub fn new(model: ManifoldModel, top: usize) -> Self {
        Self::from_levels(model, enumerate_levels(model, top))
    }

    /// All levels with `μ² ≤ mu_sq_max`.
    pub fn through_mu_sq(model: ManifoldModel, mu_sq_max: u64) -> Self {
        Self::from_levels(model, levels_through_mu_sq(model, mu_sq_max))
    }

    pub fn with_cutoff(model: ManifoldModel, cutoff: Cutoff) -> Self {
        match cutoff {
            Cutoff::Level(n) => Self::new(model, n),
            Cutoff::MuSq(m) => Self::through_mu_sq(model, m),
        }
    }

    /// Levels `lo..=hi` only.
    pub fn window(model: ManifoldModel, lo: usize, hi: usize) -> Result<Self> {
        if lo > hi {
            return Err(Error::Input(format!("empty level window {lo}..={hi}")));
        }
        let levels = enumerate_levels(model, hi).split_off(lo);
        Ok(Self::from_levels(model, levels))
    }

    /// A single eigenspace `H_N`.
    pub fn band(model: ManifoldModel, level: usize) -> Self {
        Self::window(model, level, level).expect("non-empty window")
    }

    pub fn model(&self) -> ManifoldModel {
        self.model
    }

    /// `d`, the number of basis functions.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn levels(&self) -> &[SpectralLevel] {
        &self.levels
    }

    pub fn entries(&self) -> &[BasisEntry] {
        &self.entries
    }

    pub fn top_level(&self) -> &SpectralLevel {
        self.levels.last().expect("basis has at least one level")
    }

    pub fn bottom_level(&self) -> &SpectralLevel {
        &self.levels[0]
    }

    /// `μ_N` of the top level.
    pub fn mu_top(&self) -> f64 {
        self.top_level().mu()
    }

    /// Local index range of global level `index` inside this basis.
    pub fn level_range(&self, index: usize) -> Option<Range<usize>> {
        let base = self.levels[0].offset;
        self.levels
            .iter()
            .find(|l| l.index == index)
            .map(|l| (l.offset - base)..(l.end() - base))
    }

    /// Number of leading entries belonging to levels `≤ index`.
    pub fn prefix_len(&self, index: usize) -> usize {
        let base = self.levels[0].offset;
        self.levels.iter().filter(|l| l.index <= index).last().map_or(0, |l| l.end() - base)
    }

    /// The sub-basis of levels `≤ index` (same bottom level).
    pub fn truncate(&self, index: usize) -> Result<Self> {
        let levels: Vec<_> = self.levels.iter().copied().filter(|l| l.index <= index).collect();
        if levels.is_empty() {
            return Err(Error::Input(format!("level {index} is below the window")));
        }
        Ok(Self::from_levels(self.model, levels))
    }

    fn check_point(&self, p: &ManifoldPoint) -> Result<()> {
        if p.kind() != self.model.kind() {
            return Err(Error::Chart(format!("{} point given to {} basis", p.kind(), self.model.kind())));
        }
        Ok(())
    }

    pub fn eval(&self, p: &ManifoldPoint) -> Result<BasisSample> {
        let n = self.model.dim();
        let mut sample = BasisSample { values: vec![0.0; self.len()], gradients: vec![0.0; self.len() * n], dim: n };
        self.eval_into(p, &mut sample.values, Some(&mut sample.gradients))?;
        Ok(sample)
    }

    pub fn eval_values(&self, p: &ManifoldPoint) -> Result<Vec<f64>> {
        let mut v = vec![0.0; self.len()];
        self.eval_into(p, &mut v, None)?;
        Ok(v)
    }

    /// Row-major `d × n` gradient matrix at `p`.
    pub fn eval_gradients(&self, p: &ManifoldPoint) -> Result<Vec<f64>> {
        let mut v = vec![0.0; self.len()];
        let mut g = vec![0.0; self.len() * self.model.dim()];
        self.eval_into(p, &mut v, Some(&mut g))?;
        Ok(g)
    }

    /// Writes values (length `d`) and, if requested, gradients (length `d·n`).
    pub fn eval_into(&self, p: &ManifoldPoint, values: &mut [f64], mut grads: Option<&mut [f64]>) -> Result<()> {
        self.check_point(p)?;
        let d = self.len();
        let n = self.model.dim();
        if values.len() != d {
            return Err(Error::Dimension { expected: d, got: values.len() });
        }
        if let Some(g) = grads.as_deref() {
            if g.len() != d * n {
                return Err(Error::Dimension { expected: d * n, got: g.len() });
            }
        }
        let [x1, x2] = p.coords();
        let legendre = match self.model.kind() {
            ManifoldKind::Sphere2 => Some(LegendreTable::new(self.top_level().index, x1)),
            _ => None,
        };
        let c_circle = 1.0 / PI.sqrt();
        let c_torus = 1.0 / (PI * SQRT_2);
        for (j, e) in self.entries.iter().enumerate() {
            let (v, g) = match e.function {
                BasisFunction::Constant => (1.0 / self.model.volume().sqrt(), [0.0, 0.0]),
                BasisFunction::CircleCos(k) => {
                    let (s, c) = (k as f64 * x1).sin_cos();
                    (c_circle * c, [-(k as f64) * c_circle * s, 0.0])
                }
                BasisFunction::CircleSin(k) => {
                    let (s, c) = (k as f64 * x1).sin_cos();
                    (c_circle * s, [k as f64 * c_circle * c, 0.0])
                }
                BasisFunction::TorusCos([a, b]) => {
                    let (s, c) = (a as f64 * x1 + b as f64 * x2).sin_cos();
                    (c_torus * c, [-(a as f64) * c_torus * s, -(b as f64) * c_torus * s])
                }
                BasisFunction::TorusSin([a, b]) => {
                    let (s, c) = (a as f64 * x1 + b as f64 * x2).sin_cos();
                    (c_torus * s, [a as f64 * c_torus * c, b as f64 * c_torus * c])
                }
                BasisFunction::Harmonic { l, m } => {
                    let t = legendre.as_ref().expect("sphere table");
                    let am = m.unsigned_abs() as usize;
                    let pv = t.value(l as usize, am);
                    let dv = t.derivative(l as usize, am);
                    if m == 0 {
                        (pv, [dv, 0.0])
                    } else {
                        let mf = am as f64;
                        let (s, c) = (mf * x2).sin_cos();
                        if m > 0 {
                            (SQRT_2 * pv * c, [SQRT_2 * dv * c, -SQRT_2 * mf * pv * s])
                        } else {
                            (SQRT_2 * pv * s, [SQRT_2 * dv * s, SQRT_2 * mf * pv * c])
                        }
                    }
                }
            };
            values[j] = v;
            if let Some(gr) = grads.as_deref_mut() {
                gr[j * n..(j + 1) * n].copy_from_slice(&g[..n]);
            }
        }
        Ok(())
    }
}
