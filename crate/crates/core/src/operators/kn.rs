//! Kohn–Nirenberg quantization on the flat torus.
//!
//! In the exponential basis `e_k = e^{ik·x}/(2π)` the left quantization of
//! `b` has entries `⟨B e_k, e_{k'}⟩ = σ̂_k(k' − k)`, the Fourier coefficients
//! of `x ↦ b(x, k/|k|)`. The Weyl variant evaluates the symbol at the
//! midpoint direction `(k + k')/2`. Coefficient tables come from an `M × M`
//! FFT of the symbol slice.

use std::collections::HashMap;
use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{OperatorMatrix, Provenance, Symbol};
use crate::error::{Error, Result};
use crate::manifolds::{BasisFunction, EigenBasis, ManifoldKind, ManifoldPoint};
use crate::numerics::{DenseMatrix, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Quantization {
    /// Symbol evaluated at the column frequency.
    #[default]
    Left,
    /// Symbol evaluated at the midpoint frequency.
    Weyl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnOptions {
    pub quantization: Quantization,
    /// The FFT size exceeds twice the largest needed frequency by this much.
    pub alias_margin: usize,
    /// Fiber nodes for the zero-frequency (fiber average) rule.
    pub fiber_res: usize,
}

impl Default for KnOptions {
    fn default() -> Self {
        Self { quantization: Quantization::Left, alias_margin: 32, fiber_res: 64 }
    }
}

impl KnOptions {
    pub fn weyl() -> Self {
        Self { quantization: Quantization::Weyl, ..Self::default() }
    }
}

type Freq = [i64; 2];

/// Real basis function as a combination of exponentials.
fn expansion(f: BasisFunction) -> Result<Vec<(Freq, Complex64)>> {
    let h = FRAC_1_SQRT_2;
    Ok(match f {
        BasisFunction::Constant => vec![([0, 0], Complex64::new(1.0, 0.0))],
        BasisFunction::TorusCos(k) => vec![(k, Complex64::new(h, 0.0)), ([-k[0], -k[1]], Complex64::new(h, 0.0))],
        BasisFunction::TorusSin(k) => vec![(k, Complex64::new(0.0, -h)), ([-k[0], -k[1]], Complex64::new(0.0, h))],
        other => return Err(Error::Unsupported(format!("{other:?} is not a torus basis function"))),
    })
}

struct ExpIndex {
    freqs: Vec<Freq>,
    /// For each real entry: (index into `freqs`, coefficient).
    real: Vec<Vec<(usize, Complex64)>>,
}

fn exp_index(basis: &EigenBasis) -> Result<ExpIndex> {
    let mut pos: HashMap<Freq, usize> = HashMap::new();
    let mut freqs = Vec::new();
    let mut real = Vec::with_capacity(basis.len());
    for e in basis.entries() {
        let mut terms = Vec::new();
        for (k, c) in expansion(e.function)? {
            let i = *pos.entry(k).or_insert_with(|| {
                freqs.push(k);
                freqs.len() - 1
            });
            terms.push((i, c));
        }
        real.push(terms);
    }
    Ok(ExpIndex { freqs, real })
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Primitive direction of `v` (sign kept); `[0, 0]` for the zero vector.
fn direction_key(v: Freq) -> Freq {
    let g = gcd(v[0], v[1]);
    if g == 0 {
        [0, 0]
    } else {
        [v[0] / g, v[1] / g]
    }
}

struct TableBuilder<'a> {
    symbol: &'a dyn Symbol,
    m: usize,
    points: Vec<ManifoldPoint>,
    fft: Arc<dyn Fft<f64>>,
    fiber_res: usize,
}

/// Fourier coefficients `σ̂(j)` of one symbol slice, `j` taken mod `M`.
struct Table {
    m: usize,
    /// Transposed layout: `data[j2 * M + j1]`.
    data: Vec<Complex64>,
}

impl Table {
    #[inline]
    fn get(&self, f: Freq) -> Complex64 {
        let m = self.m as i64;
        let a = f[0].rem_euclid(m) as usize;
        let b = f[1].rem_euclid(m) as usize;
        self.data[b * self.m + a]
    }
}

impl<'a> TableBuilder<'a> {
    fn new(symbol: &'a dyn Symbol, m: usize, fiber_res: usize) -> Self {
        let h = 2.0 * PI / m as f64;
        let mut points = Vec::with_capacity(m * m);
        for a in 0..m {
            for b in 0..m {
                points.push(ManifoldPoint::torus(a as f64 * h, b as f64 * h));
            }
        }
        let fft = FftPlanner::<f64>::new().plan_fft_forward(m);
        Self { symbol, m, points, fft, fiber_res }
    }

    fn samples(&self, key: Freq) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.points.len()];
        if key == [0, 0] {
            for (o, p) in out.iter_mut().zip(&self.points) {
                *o = self.symbol.fiber_average(p, self.fiber_res)?;
            }
        } else {
            let r = (key[0] as f64).hypot(key[1] as f64);
            self.symbol.eval_positions(&self.points, [key[0] as f64 / r, key[1] as f64 / r], &mut out);
        }
        if out.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("symbol returned a non-finite value".into()));
        }
        Ok(out)
    }

    fn build(&self, key: Freq) -> Result<Table> {
        let m = self.m;
        let samples = self.samples(key)?;
        let scale = 1.0 / (m * m) as f64;
        let mut buf: Vec<Complex64> = samples.iter().map(|&v| Complex64::new(v * scale, 0.0)).collect();
        // rows run along x₂
        self.fft.process(&mut buf);
        let mut t = vec![Complex64::new(0.0, 0.0); m * m];
        for a in 0..m {
            for b in 0..m {
                t[b * m + a] = buf[a * m + b];
            }
        }
        self.fft.process(&mut t);
        Ok(Table { m, data: t })
    }
}

/// Scalar-valued evaluation of `σ̂_key(freq)` for position-independent symbols.
fn multiplier_value(symbol: &dyn Symbol, key: Freq, fiber_res: usize) -> Result<f64> {
    let p = ManifoldPoint::torus(0.0, 0.0);
    if key == [0, 0] {
        symbol.fiber_average(&p, fiber_res)
    } else {
        let r = (key[0] as f64).hypot(key[1] as f64);
        Ok(symbol.eval(&p, [key[0] as f64 / r, key[1] as f64 / r]))
    }
}

/// Complex block `B_c[k', k] = ⟨B e_k, e_{k'}⟩` for `k'` in `rows`, `k` in `cols`.
fn complex_block(symbol: &dyn Symbol, rows: &[Freq], cols: &[Freq], opts: &KnOptions) -> Result<Vec<Complex64>> {
    let nr = rows.len();
    let nc = cols.len();
    let zero = Complex64::new(0.0, 0.0);
    let key_of = |i: usize, j: usize| -> Freq {
        let kp = rows[i];
        let k = cols[j];
        match opts.quantization {
            Quantization::Left => direction_key(k),
            Quantization::Weyl => direction_key([k[0] + kp[0], k[1] + kp[1]]),
        }
    };

    if symbol.is_position_independent() {
        let mut out = vec![zero; nr * nc];
        let mut cache: HashMap<Freq, f64> = HashMap::new();
        for i in 0..nr {
            for j in 0..nc {
                if rows[i] == cols[j] {
                    let key = key_of(i, j);
                    let v = match cache.get(&key) {
                        Some(v) => *v,
                        None => {
                            let v = multiplier_value(symbol, key, opts.fiber_res)?;
                            cache.insert(key, v);
                            v
                        }
                    };
                    out[i * nc + j] = Complex64::new(v, 0.0);
                }
            }
        }
        return Ok(out);
    }

    let kmax = rows.iter().chain(cols).map(|k| k[0].abs().max(k[1].abs())).max().unwrap_or(0) as usize;
    let m = (2 * kmax + opts.alias_margin).next_power_of_two().max(8);
    let builder = TableBuilder::new(symbol, m, opts.fiber_res);

    if symbol.is_fiber_independent() {
        let table = builder.build([1, 0])?;
        let mut out = vec![zero; nr * nc];
        out.par_chunks_mut(nc).enumerate().for_each(|(i, row)| {
            let kp = rows[i];
            for (j, o) in row.iter_mut().enumerate() {
                let k = cols[j];
                *o = table.get([kp[0] - k[0], kp[1] - k[1]]);
            }
        });
        return Ok(out);
    }

    let mut groups: HashMap<Freq, Vec<u32>> = HashMap::new();
    for i in 0..nr {
        for j in 0..nc {
            groups.entry(key_of(i, j)).or_default().push((i * nc + j) as u32);
        }
    }
    let mut groups: Vec<(Freq, Vec<u32>)> = groups.into_iter().collect();
    groups.sort_unstable_by_key(|g| g.0);

    let filled = groups
        .par_iter()
        .map(|(key, cells)| {
            let table = builder.build(*key)?;
            Ok(cells
                .iter()
                .map(|&c| {
                    let (i, j) = (c as usize / nc, c as usize % nc);
                    let kp = rows[i];
                    let k = cols[j];
                    table.get([kp[0] - k[0], kp[1] - k[1]])
                })
                .collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![zero; nr * nc];
    for ((_, cells), vals) in groups.iter().zip(filled) {
        for (&c, v) in cells.iter().zip(vals) {
            out[c as usize] = v;
        }
    }
    Ok(out)
}

/// Real matrix `Re(Tᵤᴴ B_c T_v)` for the real bases behind `ri` (rows) and `ci` (cols).
fn realify(bc: &[Complex64], ri: &ExpIndex, ci: &ExpIndex) -> DenseMatrix {
    let nc = ci.freqs.len();
    let mut out = DenseMatrix::zeros(ri.real.len(), ci.real.len());
    let cols = ci.real.len();
    for (u, tu) in ri.real.iter().enumerate() {
        let row = out.row_mut(u);
        for (v, o) in row.iter_mut().enumerate().take(cols) {
            let mut s = Complex64::new(0.0, 0.0);
            for &(a, ca) in tu {
                for &(b, cb) in &ci.real[v] {
                    s += ca.conj() * cb * bc[a * nc + b];
                }
            }
            *o = s.re;
        }
    }
    out
}

fn check_torus(basis: &EigenBasis) -> Result<()> {
    if basis.model().kind() != ManifoldKind::Torus2 {
        return Err(Error::Unsupported(format!(
            "Kohn–Nirenberg quantization is implemented on torus2 only, got {}",
            basis.model().kind()
        )));
    }
    Ok(())
}

fn raw_block(symbol: &dyn Symbol, ri: &ExpIndex, ci: &ExpIndex, opts: &KnOptions) -> Result<DenseMatrix> {
    let bc = complex_block(symbol, &ri.freqs, &ci.freqs, opts)?;
    Ok(realify(&bc, ri, ci))
}

/// The symmetrized block `½(B[rows, cols] + B[cols, rows]ᵀ)` of the quantized
/// operator.
pub fn assemble_kohn_nirenberg_block(
    symbol: &dyn Symbol,
    rows: &EigenBasis,
    cols: &EigenBasis,
    opts: &KnOptions,
) -> Result<DenseMatrix> {
    check_torus(rows)?;
    check_torus(cols)?;
    let ri = exp_index(rows)?;
    let ci = exp_index(cols)?;
    let a = raw_block(symbol, &ri, &ci, opts)?;
    let b = raw_block(symbol, &ci, &ri, opts)?;
    Ok(DenseMatrix::from_fn(a.rows(), a.cols(), |i, j| 0.5 * (a.get(i, j) + b.get(j, i))))
}

/// `Π_{≤N} Op(b) Π_{≤N}` over a torus basis, symmetrized.
pub fn assemble_kohn_nirenberg(symbol: &dyn Symbol, basis: &EigenBasis, opts: &KnOptions) -> Result<OperatorMatrix> {
    check_torus(basis)?;
    let idx = exp_index(basis)?;
    let raw = raw_block(symbol, &idx, &idx, opts)?;
    Ok(OperatorMatrix::new(SymMatrix::from_dense(&raw)?, Provenance::KohnNirenberg))
}
