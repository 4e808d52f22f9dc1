//! Arithmetic-light block maps for gates with special structure.
//!
//! Each map reproduces the transfer-matrix product on its gate exactly in
//! exact arithmetic; permutations and Paulis also do so bit for bit, since
//! they only move entries and flip signs.

use num_complex::Complex64;

use crate::bits::ActiveQubits;
use crate::channel::SquareMatrix;
use crate::error::{Error, Result};
use crate::kernels::{check_storage, run_map, BlockMap, MAX_BLOCK};
use crate::store::MatrixHandle;

/// Unit-modulus check for native phases.
const PHASE_TOL: f64 = 1e-12;

/// Basis permutation `|a> -> |pi(a)>` on `k` qubits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationGate {
    k: usize,
    table: Vec<usize>,
}

impl PermutationGate {
    pub fn new(k: usize, table: Vec<usize>) -> Result<Self> {
        if k == 0 || k > ActiveQubits::MAX_LOCALITY {
            return Err(Error::UnsupportedLocality(k));
        }
        if table.len() != 1 << k {
            return Err(Error::ArityMismatch {
                expected: 1 << k,
                actual: table.len(),
            });
        }
        let mut seen = vec![false; table.len()];
        for &t in &table {
            if t >= table.len() || std::mem::replace(&mut seen[t], true) {
                return Err(Error::NotAPermutation(t));
            }
        }
        Ok(Self { k, table })
    }

    pub fn locality(&self) -> usize {
        self.k
    }

    pub fn map(&self, a: usize) -> usize {
        self.table[a]
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `U[pi(a)][a] = 1`.
    pub fn unitary(&self) -> SquareMatrix {
        SquareMatrix::from_fn(self.table.len(), |r, c| {
            if self.table[c] == r {
                Complex64::ONE
            } else {
                Complex64::ZERO
            }
        })
    }
}

/// `X B X`: swaps `B00 <-> B11` and `B10 <-> B01`.
pub(crate) struct PauliXMap;

impl BlockMap for PauliXMap {
    fn locality(&self) -> usize {
        1
    }

    #[inline]
    fn apply(&self, v: &mut [Complex64]) {
        v.swap(0, 3);
        v.swap(1, 2);
    }
}

/// `Y B Y^H`: as X, with the off-diagonal entries negated.
pub(crate) struct PauliYMap;

impl BlockMap for PauliYMap {
    fn locality(&self) -> usize {
        1
    }

    #[inline]
    fn apply(&self, v: &mut [Complex64]) {
        let [b00, b10, b01, b11] = [v[0], v[1], v[2], v[3]];
        v[0] = b11;
        v[1] = -b01;
        v[2] = -b10;
        v[3] = b00;
    }
}

/// `D B D^H` for `D = diag(p0, p1)`. Diagonal entries are left untouched.
pub(crate) struct PhaseMap {
    /// `p1 conj(p0)` for `B10`, `p0 conj(p1)` for `B01`.
    lower: Complex64,
    upper: Complex64,
}

impl PhaseMap {
    pub(crate) fn new(p: [Complex64; 2]) -> Self {
        Self {
            lower: p[1] * p[0].conj(),
            upper: p[0] * p[1].conj(),
        }
    }
}

impl BlockMap for PhaseMap {
    fn locality(&self) -> usize {
        1
    }

    #[inline]
    fn apply(&self, v: &mut [Complex64]) {
        v[1] *= self.lower;
        v[2] *= self.upper;
    }
}

/// `H B H` with the real butterfly.
pub(crate) struct HadamardMap;

impl BlockMap for HadamardMap {
    fn locality(&self) -> usize {
        1
    }

    #[inline]
    fn apply(&self, v: &mut [Complex64]) {
        let [b00, b10, b01, b11] = [v[0], v[1], v[2], v[3]];
        let (sum_row0, dif_row0) = (b00 + b01, b00 - b01);
        let (sum_row1, dif_row1) = (b10 + b11, b10 - b11);
        v[0] = (sum_row0 + sum_row1) * 0.5;
        v[1] = (sum_row0 - sum_row1) * 0.5;
        v[2] = (dif_row0 + dif_row1) * 0.5;
        v[3] = (dif_row0 - dif_row1) * 0.5;
    }
}

/// `P B P^T` as a pure copy: `w[pi(a) + pi(a') d] = v[a + a' d]`.
pub(crate) struct PermutationMap {
    k: usize,
    /// Source index for each destination index.
    source: Vec<u16>,
}

impl PermutationMap {
    pub(crate) fn new(g: &PermutationGate) -> Self {
        let d = 1usize << g.k;
        let mut source = vec![0u16; d * d];
        for a_col in 0..d {
            for a_row in 0..d {
                source[g.map(a_row) + g.map(a_col) * d] = (a_row + a_col * d) as u16;
            }
        }
        Self { k: g.k, source }
    }
}

impl BlockMap for PermutationMap {
    fn locality(&self) -> usize {
        self.k
    }

    #[inline]
    fn apply(&self, v: &mut [Complex64]) {
        let mut input = [Complex64::ZERO; MAX_BLOCK];
        input[..v.len()].copy_from_slice(v);
        for (w, &s) in v.iter_mut().zip(&self.source) {
            *w = input[s as usize];
        }
    }
}

/// Pauli X on qubit `a`.
pub fn apply_pauli_x(h: &mut MatrixHandle, a: usize) -> Result<()> {
    let active = ActiveQubits::new(&[a])?;
    check_storage(h.storage(), &active)?;
    run_map(h, &PauliXMap, &active);
    Ok(())
}

/// Pauli Y on qubit `a`.
pub fn apply_pauli_y(h: &mut MatrixHandle, a: usize) -> Result<()> {
    let active = ActiveQubits::new(&[a])?;
    check_storage(h.storage(), &active)?;
    run_map(h, &PauliYMap, &active);
    Ok(())
}

/// `diag(phases[0], phases[1])` on qubit `a`; both phases must have unit modulus.
pub fn apply_diagonal_phase(h: &mut MatrixHandle, a: usize, phases: [Complex64; 2]) -> Result<()> {
    if let Some(p) = phases.iter().find(|p| (p.norm() - 1.0).abs() > PHASE_TOL) {
        return Err(Error::NonUnitPhase(*p));
    }
    let active = ActiveQubits::new(&[a])?;
    check_storage(h.storage(), &active)?;
    run_map(h, &PhaseMap::new(phases), &active);
    Ok(())
}

/// Hadamard on qubit `a`.
pub fn apply_hadamard(h: &mut MatrixHandle, a: usize) -> Result<()> {
    let active = ActiveQubits::new(&[a])?;
    check_storage(h.storage(), &active)?;
    run_map(h, &HadamardMap, &active);
    Ok(())
}

/// Permutation gate on sorted `active` qubits, bit `l` of the table index on
/// the `l`-th smallest position.
pub fn apply_permutation(h: &mut MatrixHandle, gate: &PermutationGate, active: &ActiveQubits) -> Result<()> {
    if gate.locality() != active.len() {
        return Err(Error::ArityMismatch {
            expected: gate.locality(),
            actual: active.len(),
        });
    }
    check_storage(h.storage(), active)?;
    run_map(h, &PermutationMap::new(gate), active);
    Ok(())
}
