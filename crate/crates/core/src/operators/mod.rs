//! Compressions `Π_{≤N} B Π_{≤N}` of order-zero operators, positivity handling
//! and the asymptotic diagnostics built on them.

mod assemble;
mod kn;
mod multiplication;
mod symbol;
mod theorem;

use std::sync::OnceLock;

pub use assemble::assemble_symbol;
pub use kn::{assemble_kohn_nirenberg, assemble_kohn_nirenberg_block, KnOptions, Quantization};
pub use multiplication::{assemble_multiplication, assemble_multiplication_block, basis_bandwidth, grid_for_degree, SMOOTH_MARGIN};
pub use symbol::{FnSymbol, MultiplicationSymbol, ProductSymbol, ScalarField, Symbol};
pub use theorem::{multiplication_tail_defect, tail_defect, theorem_a_check, theorem_a_predict, TheoremARow};

use crate::error::{Error, Result};
use crate::numerics::{sym_eigenvalues, SpdMatrix, SymMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Multiplication,
    KohnNirenberg,
    Hilb,
    DerivativeHilb,
}

/// A symmetric compression over an eigenbasis. Definiteness is computed on
/// demand and cached.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    matrix: SymMatrix,
    provenance: Provenance,
    spectrum: OnceLock<(f64, f64)>,
}

impl OperatorMatrix {
    pub fn new(matrix: SymMatrix, provenance: Provenance) -> Self {
        Self { matrix, provenance, spectrum: OnceLock::new() }
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> SymMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn with_provenance(self, provenance: Provenance) -> Self {
        Self { provenance, ..self }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::new(self.matrix.scaled(c), self.provenance)
    }

    /// The compression to the first `d` basis functions.
    pub fn leading_block(&self, d: usize) -> Result<Self> {
        Ok(Self::new(self.matrix.leading_block(d)?, self.provenance))
    }

    fn spectrum(&self) -> Result<(f64, f64)> {
        if let Some(s) = self.spectrum.get() {
            return Ok(*s);
        }
        let ev = sym_eigenvalues(&self.matrix)?;
        let s = (ev[0], ev[0].abs().max(ev[ev.len() - 1].abs()));
        Ok(*self.spectrum.get_or_init(|| s))
    }

    pub fn min_eig(&self) -> Result<f64> {
        Ok(self.spectrum()?.0)
    }

    /// Spectral norm `max |λ|`.
    pub fn norm(&self) -> Result<f64> {
        Ok(self.spectrum()?.1)
    }
}

/// Default repair floor, `1e-8 · ‖A‖`.
pub fn default_floor(a: &OperatorMatrix) -> Result<f64> {
    Ok(1e-8 * a.norm()?.max(f64::MIN_POSITIVE))
}

/// Shifts `A` by `(ε − λ_min)·I` when `λ_min < ε`; returns the SPD matrix and
/// the shift applied (0 when unchanged).
pub fn positivity_repair(a: &OperatorMatrix, floor: f64) -> Result<(SpdMatrix, f64)> {
    if !(floor > 0.0) {
        return Err(Error::Input(format!("positivity floor must be positive, got {floor}")));
    }
    let min = a.min_eig()?;
    if min >= floor {
        return Ok((SpdMatrix::with_min_eigenvalue(a.matrix.clone(), min)?, 0.0));
    }
    let shift = floor - min;
    Ok((SpdMatrix::with_min_eigenvalue(a.matrix.add_identity(shift), floor)?, shift))
}
