//! k-local quantum operations as Kraus sets and transfer matrices, plus the
//! library of native gates and channels.
//!
//! Local matrices act on `2^k`-dimensional blocks. Bit `ℓ` of a local index
//! belongs to the `ℓ`-th smallest active qubit. Gate constructors are written
//! in gate order instead, with the first listed qubit as the most significant
//! bit (controls first, X-target last); [`ChannelSpec::bind`] translates
//! between the two.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bits::ActiveQubits;
use crate::error::{Error, Result};
use crate::native::PermutationGate;

const I: Complex64 = Complex64::I;
const ONE: Complex64 = Complex64::ONE;
const ZERO: Complex64 = Complex64::ZERO;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let data = (0..dim * dim).map(|idx| f(idx / dim, idx % dim)).collect();
        Self { dim, data }
    }

    pub fn from_rows(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                actual: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    fn diagonal(entries: &[Complex64]) -> Self {
        Self::from_fn(entries.len(), |r, c| if r == c { entries[r] } else { ZERO })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.dim + c]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(r, c).conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(r, c) * factor)
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        Self::from_fn(self.dim, |r, c| {
            (0..self.dim).map(|k| self.get(r, k) * other.get(k, c)).sum()
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_fn(self.dim, |r, c| self.get(r, c) + other.get(r, c))
    }

    /// Kronecker product with `self` as the slow (high) factor.
    pub fn kron(&self, other: &Self) -> Self {
        let d = other.dim;
        Self::from_fn(self.dim * d, |r, c| self.get(r / d, c / d) * other.get(r % d, c % d))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim, self.dim, |r, c| self.get(r, c))
    }

    fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), |r, c| m[(r, c)])
    }
}

/// Local Kraus factors `L_α` of a k-local operation.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    k: usize,
    operators: Vec<SquareMatrix>,
}

impl KrausSet {
    pub fn new(k: usize, operators: Vec<SquareMatrix>) -> Result<Self> {
        if !(1..=ActiveQubits::MAX_LOCALITY).contains(&k) {
            return Err(Error::UnsupportedLocality(k));
        }
        if operators.is_empty() {
            return Err(Error::EmptyKraus);
        }
        let bound = 1 << (2 * k);
        if operators.len() > bound {
            return Err(Error::KrausRankExceeded {
                rank: operators.len(),
                bound,
                k,
            });
        }
        for op in &operators {
            if op.dim() != 1 << k {
                return Err(Error::DimensionMismatch {
                    expected: 1 << k,
                    actual: op.dim(),
                });
            }
        }
        Ok(Self { k, operators })
    }

    pub fn unitary(u: SquareMatrix) -> Result<Self> {
        let k = u.dim().trailing_zeros() as usize;
        if u.dim() != 1 << k {
            return Err(Error::DimensionMismatch {
                expected: 1 << k,
                actual: u.dim(),
            });
        }
        Self::new(k, vec![u])
    }

    #[inline]
    pub fn locality(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.operators.len()
    }

    pub fn operators(&self) -> &[SquareMatrix] {
        &self.operators
    }

    /// `Σ_α L_α B L_α^†` on a single local block.
    pub fn apply_to_block(&self, block: &SquareMatrix) -> SquareMatrix {
        let mut acc = SquareMatrix::zeros(block.dim());
        for l in &self.operators {
            acc = acc.add(&l.matmul(block).matmul(&l.adjoint()));
        }
        acc
    }

    /// `Σ_α L_α^† L_α`.
    pub fn gram(&self) -> SquareMatrix {
        let mut acc = SquareMatrix::zeros(1 << self.k);
        for l in &self.operators {
            acc = acc.add(&l.adjoint().matmul(l));
        }
        acc
    }
}

/// Liouville representation `S = Σ_α conj(L_α) ⊗ L_α` acting on
/// column-stacked blocks: `S vec(B) = vec(Σ_α L_α B L_α^†)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    k: usize,
    entries: Vec<Complex64>,
}

impl TransferMatrix {
    #[inline]
    pub fn locality(&self) -> usize {
        self.k
    }

    /// Edge length `4^k`.
    #[inline]
    pub fn dim(&self) -> usize {
        1 << (2 * self.k)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim() + c]
    }
}

/// Builds `S = Σ_α conj(L_α) ⊗ L_α`; entry `[(μ' + d ν'), (μ + d ν)]` is
/// `Σ_α conj(L_α[ν', ν]) L_α[μ', μ]` with `d = 2^k`.
pub fn transfer_from_kraus(ks: &KrausSet) -> TransferMatrix {
    let d = 1usize << ks.k;
    let dim = d * d;
    let mut entries = vec![ZERO; dim * dim];
    for l in &ks.operators {
        for nu_out in 0..d {
            for mu_out in 0..d {
                let row = mu_out + d * nu_out;
                for nu in 0..d {
                    let left = l.get(nu_out, nu).conj();
                    for mu in 0..d {
                        entries[row * dim + mu + d * nu] += left * l.get(mu_out, mu);
                    }
                }
            }
        }
    }
    TransferMatrix { k: ks.k, entries }
}

/// Which kernel family can execute a channel.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelKind {
    GenericKraus,
    PauliX,
    PauliY,
    /// Single-qubit `diag(phases[0], phases[1])`.
    DiagonalPhase([Complex64; 2]),
    Hadamard,
    Permutation(PermutationGate),
}

impl ChannelKind {
    pub fn label(&self) -> &'static str {
        match self {
            ChannelKind::GenericKraus => "generic-kraus",
            ChannelKind::PauliX => "pauli-x",
            ChannelKind::PauliY => "pauli-y",
            ChannelKind::DiagonalPhase(_) => "diagonal-phase",
            ChannelKind::Hadamard => "hadamard",
            ChannelKind::Permutation(_) => "permutation",
        }
    }
}

/// A named k-local operation with its precomputed transfer matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    name: String,
    kind: ChannelKind,
    kraus: KrausSet,
    transfer: TransferMatrix,
}

/// Gates with specialised kernels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NativeGate {
    X,
    Y,
    Z,
    S,
    T,
    Rz(f64),
    H,
    Cnot,
    Swap,
    Toffoli,
}

impl NativeGate {
    pub fn arity(self) -> usize {
        match self {
            NativeGate::Cnot | NativeGate::Swap => 2,
            NativeGate::Toffoli => 3,
            _ => 1,
        }
    }
}

impl ChannelSpec {
    /// Generic channel, always executed through its transfer matrix.
    pub fn generic(name: impl Into<String>, kraus: KrausSet) -> Self {
        Self::with_kind(name, ChannelKind::GenericKraus, kraus)
    }

    fn with_kind(name: impl Into<String>, kind: ChannelKind, kraus: KrausSet) -> Self {
        let transfer = transfer_from_kraus(&kraus);
        Self {
            name: name.into(),
            kind,
            kraus,
            transfer,
        }
    }

    pub fn native(gate: NativeGate) -> Self {
        let h = FRAC_1_SQRT_2;
        let phase = |name: &str, p1: Complex64| {
            let phases = [ONE, p1];
            Self::with_kind(
                name,
                ChannelKind::DiagonalPhase(phases),
                KrausSet::unitary(SquareMatrix::diagonal(&phases)).unwrap(),
            )
        };
        let perm = |name: &str, k: usize, table: Vec<usize>| {
            let gate = PermutationGate::new(k, table).unwrap();
            let u = gate.unitary();
            Self::with_kind(name, ChannelKind::Permutation(gate), KrausSet::unitary(u).unwrap())
        };
        match gate {
            NativeGate::X => Self::with_kind(
                "x",
                ChannelKind::PauliX,
                KrausSet::unitary(pauli(1)).unwrap(),
            ),
            NativeGate::Y => Self::with_kind(
                "y",
                ChannelKind::PauliY,
                KrausSet::unitary(pauli(2)).unwrap(),
            ),
            NativeGate::Z => phase("z", -ONE),
            NativeGate::S => phase("s", I),
            NativeGate::T => phase("t", Complex64::from_polar(1.0, FRAC_PI_4)),
            NativeGate::Rz(theta) => {
                let phases = [
                    Complex64::from_polar(1.0, -theta / 2.0),
                    Complex64::from_polar(1.0, theta / 2.0),
                ];
                Self::with_kind(
                    "rz",
                    ChannelKind::DiagonalPhase(phases),
                    KrausSet::unitary(SquareMatrix::diagonal(&phases)).unwrap(),
                )
            }
            NativeGate::H => Self::with_kind(
                "h",
                ChannelKind::Hadamard,
                KrausSet::unitary(
                    SquareMatrix::from_rows(2, [h, h, h, -h].map(Complex64::from).to_vec()).unwrap(),
                )
                .unwrap(),
            ),
            NativeGate::Cnot => perm("cnot", 2, vec![0, 1, 3, 2]),
            NativeGate::Swap => perm("swap", 2, vec![0, 2, 1, 3]),
            NativeGate::Toffoli => perm("toffoli", 3, vec![0, 1, 2, 3, 4, 5, 7, 6]),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &ChannelKind {
        &self.kind
    }

    pub fn kraus(&self) -> &KrausSet {
        &self.kraus
    }

    pub fn transfer(&self) -> &TransferMatrix {
        &self.transfer
    }

    pub fn locality(&self) -> usize {
        self.kraus.k
    }

    /// Resolves gate-order `targets` into sorted active qubits and the
    /// channel re-expressed in that bit order.
    pub fn bind(&self, targets: &[usize], n: usize) -> Result<(ChannelSpec, ActiveQubits)> {
        let k = self.locality();
        if targets.len() != k {
            return Err(Error::ArityMismatch {
                expected: k,
                actual: targets.len(),
            });
        }
        let mut sorted = targets.to_vec();
        sorted.sort_unstable();
        let active = ActiveQubits::within(&sorted, n).map_err(|e| match e {
            Error::InvalidTargets { n, reason, .. } => Error::InvalidTargets {
                targets: targets.to_vec(),
                n,
                reason,
            },
            other => other,
        })?;

        // gate_bit[ℓ]: gate-order bit carried by the ℓ-th smallest target.
        let gate_bit: Vec<usize> = sorted
            .iter()
            .map(|q| k - 1 - targets.iter().position(|t| t == q).unwrap())
            .collect();
        if gate_bit.iter().enumerate().all(|(l, &g)| l == g) {
            return Ok((self.clone(), active));
        }
        let to_gate = |a: usize| -> usize {
            gate_bit
                .iter()
                .enumerate()
                .map(|(l, &g)| ((a >> l) & 1) << g)
                .sum()
        };
        let d = 1usize << k;
        let ops = self
            .kraus
            .operators
            .iter()
            .map(|l| SquareMatrix::from_fn(d, |r, c| l.get(to_gate(r), to_gate(c))))
            .collect();
        let kraus = KrausSet::new(k, ops)?;
        let kind = match &self.kind {
            ChannelKind::Permutation(p) => {
                let from_gate: Vec<usize> = {
                    let mut inv = vec![0; d];
                    for a in 0..d {
                        inv[to_gate(a)] = a;
                    }
                    inv
                };
                let table = (0..d).map(|a| from_gate[p.map(to_gate(a))]).collect();
                ChannelKind::Permutation(PermutationGate::new(k, table)?)
            }
            other => other.clone(),
        };
        Ok((Self::with_kind(self.name.clone(), kind, kraus), active))
    }
}

/// Pauli matrix by index: 0 = I, 1 = X, 2 = Y, 3 = Z.
pub fn pauli(index: usize) -> SquareMatrix {
    let rows = match index {
        0 => [ONE, ZERO, ZERO, ONE],
        1 => [ZERO, ONE, ONE, ZERO],
        2 => [ZERO, -I, I, ZERO],
        3 => [ONE, ZERO, ZERO, -ONE],
        _ => panic!("pauli index {index} out of range"),
    };
    SquareMatrix::from_rows(2, rows.to_vec()).unwrap()
}

/// Single-qubit depolarising channel with Kraus factors
/// `sqrt(1-p) I, sqrt(p/3) X, sqrt(p/3) Y, sqrt(p/3) Z`.
pub fn depolarising(p: f64) -> Result<ChannelSpec> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let w0 = Complex64::from((1.0 - p).sqrt());
    let w = Complex64::from((p / 3.0).sqrt());
    let ops = vec![
        pauli(0).scale(w0),
        pauli(1).scale(w),
        pauli(2).scale(w),
        pauli(3).scale(w),
    ];
    Ok(ChannelSpec::generic("depolarising", KrausSet::new(1, ops)?))
}

/// Parses a native gate by name; `rz` takes the angle as its one parameter.
pub fn native_gate(name: &str, params: &[f64]) -> Result<ChannelSpec> {
    let lower = name.to_ascii_lowercase();
    let expect = |count: usize| {
        if params.len() == count {
            Ok(())
        } else {
            Err(Error::GateParameters {
                name: name.to_string(),
                expected: count,
                actual: params.len(),
            })
        }
    };
    let gate = match lower.as_str() {
        "rz" => {
            expect(1)?;
            if !params[0].is_finite() {
                return Err(Error::GateParameters {
                    name: name.to_string(),
                    expected: 1,
                    actual: 0,
                });
            }
            NativeGate::Rz(params[0])
        }
        other => {
            let gate = match other {
                "x" => NativeGate::X,
                "y" => NativeGate::Y,
                "z" => NativeGate::Z,
                "s" => NativeGate::S,
                "t" => NativeGate::T,
                "h" => NativeGate::H,
                "cnot" | "cx" => NativeGate::Cnot,
                "swap" => NativeGate::Swap,
                "toffoli" | "ccx" => NativeGate::Toffoli,
                _ => return Err(Error::UnknownGate(name.to_string())),
            };
            expect(0)?;
            gate
        }
    };
    Ok(ChannelSpec::native(gate))
}

/// The named gates and channels, with `rz` at θ = 0.7 and depolarising at
/// p = 0.1.
pub fn library() -> Vec<ChannelSpec> {
    let mut out: Vec<ChannelSpec> = [
        NativeGate::X,
        NativeGate::Y,
        NativeGate::Z,
        NativeGate::S,
        NativeGate::T,
        NativeGate::Rz(0.7),
        NativeGate::H,
        NativeGate::Cnot,
        NativeGate::Swap,
        NativeGate::Toffoli,
    ]
    .into_iter()
    .map(ChannelSpec::native)
    .collect();
    out.push(depolarising(0.1).unwrap());
    out
}

/// Classification produced by [`validate_cptni`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Physicality {
    TracePreserving,
    TraceNonIncreasing,
    Invalid,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub physicality: Physicality,
    /// `max |D_ij|` for `D = I - Σ L^† L`.
    pub max_deviation: f64,
    /// Smallest eigenvalue of `D`.
    pub min_eigenvalue: f64,
}

pub const DEFAULT_VALIDATION_TOL: f64 = 1e-10;

/// Checks complete positivity bookkeeping via `D = I - Σ_α L_α^† L_α`.
pub fn validate_cptni(ks: &KrausSet, tol: f64) -> ValidationReport {
    let d = SquareMatrix::identity(1 << ks.k).add(&ks.gram().scale(-ONE));
    let max_deviation = d.as_slice().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let min_eigenvalue = SymmetricEigen::new(d.to_nalgebra())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let physicality = if max_deviation <= tol {
        Physicality::TracePreserving
    } else if min_eigenvalue >= -tol {
        Physicality::TraceNonIncreasing
    } else {
        Physicality::Invalid
    };
    ValidationReport {
        physicality,
        max_deviation,
        min_eigenvalue,
    }
}

/// Kraus set `{L_α^†}` of the adjoint map under the trace inner product.
pub fn dual_channel(ks: &KrausSet) -> KrausSet {
    KrausSet {
        k: ks.k,
        operators: ks.operators.iter().map(SquareMatrix::adjoint).collect(),
    }
}

/// Seeded trace-preserving channel of the given locality and Kraus rank:
/// Gaussian `G_α` orthonormalised as `L_α = G_α (Σ G^† G)^{-1/2}`.
pub fn random_kraus_channel(k: usize, rank: usize, seed: u64) -> Result<KrausSet> {
    if !(1..=ActiveQubits::MAX_LOCALITY).contains(&k) {
        return Err(Error::UnsupportedLocality(k));
    }
    let d = 1usize << k;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<SquareMatrix> = (0..rank)
        .map(|_| {
            SquareMatrix::from_fn(d, |_, _| {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            })
        })
        .collect();
    let mut gram = SquareMatrix::zeros(d);
    for g in &raw {
        gram = gram.add(&g.adjoint().matmul(g));
    }
    let eig = SymmetricEigen::new(gram.to_nalgebra());
    let inv_sqrt = DMatrix::from_diagonal(&eig.eigenvalues.map(|e| Complex64::from(e.powf(-0.5))));
    let root = &eig.eigenvectors * inv_sqrt * eig.eigenvectors.adjoint();
    let root = SquareMatrix::from_nalgebra(&root);
    let mut ops: Vec<SquareMatrix> = raw.iter().map(|g| g.matmul(&root)).collect();
    // Newton-Schulz steps L <- L (3I - S) / 2, S = sum L^H L, remove the
    // eigensolver's residue for ill-conditioned draws.
    let id = SquareMatrix::identity(d);
    for _ in 0..4 {
        let mut s = SquareMatrix::zeros(d);
        for l in &ops {
            s = s.add(&l.adjoint().matmul(l));
        }
        if s.max_abs_diff(&id) < 1e-15 {
            break;
        }
        let step = id.scale(Complex64::from(1.5)).add(&s.scale(Complex64::from(-0.5)));
        ops = ops.iter().map(|l| l.matmul(&step)).collect();
    }
    KrausSet::new(k, ops)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn column_stack(b: &SquareMatrix) -> Vec<Complex64> {
        let d = b.dim();
        (0..d * d).map(|idx| b.get(idx % d, idx / d)).collect()
    }

    fn apply_transfer(s: &TransferMatrix, v: &[Complex64]) -> Vec<Complex64> {
        (0..s.dim())
            .map(|r| (0..s.dim()).map(|c| s.get(r, c) * v[c]).sum())
            .collect()
    }

    fn random_block(d: usize, rng: &mut ChaCha8Rng) -> SquareMatrix {
        SquareMatrix::from_fn(d, |_, _| {
            Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
        })
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn identity_transfer_is_identity() {
        let s = transfer_from_kraus(&KrausSet::unitary(SquareMatrix::identity(2)).unwrap());
        assert_eq!(s.entries(), SquareMatrix::identity(4).as_slice());
    }

    #[test]
    fn pauli_x_transfer_is_vec_permutation() {
        let s = ChannelSpec::native(NativeGate::X).transfer().clone();
        // Direct Kronecker product X ⊗ X.
        let xx = pauli(1).kron(&pauli(1));
        assert_eq!(s.entries(), xx.as_slice());
        let perm = [3, 2, 1, 0];
        for (r, &c) in perm.iter().enumerate() {
            assert_eq!(s.get(r, c), ONE);
        }
    }

    #[test]
    fn depolarising_on_projector() {
        let ch = depolarising(0.1).unwrap();
        let proj = SquareMatrix::diagonal(&[ONE, ZERO]);
        let w = apply_transfer(ch.transfer(), &column_stack(&proj));
        let expected = [14.0 / 15.0, 0.0, 0.0, 1.0 / 15.0].map(Complex64::from);
        assert!(max_diff(&w, &expected) < 1e-15);
        // Direct Kraus sum agrees.
        let direct = ch.kraus().apply_to_block(&proj);
        assert!(max_diff(&column_stack(&direct), &expected) < 1e-15);
    }

    #[test]
    fn depolarising_limits() {
        assert!(depolarising(-0.1).is_err());
        assert!(depolarising(1.5).is_err());
        let id = depolarising(0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let b = random_block(2, &mut rng);
        let b = b.add(&b.adjoint());
        assert!(id.kraus().apply_to_block(&b).max_abs_diff(&b) == 0.0);
        let gram = depolarising(0.1).unwrap().kraus().gram();
        assert!(gram.max_abs_diff(&SquareMatrix::identity(2)) <= 1e-15);
    }

    #[test]
    fn transfer_matches_kraus_sum_on_random_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let mut channels = library();
        channels.push(ChannelSpec::generic("r1", random_kraus_channel(1, 3, 1).unwrap()));
        channels.push(ChannelSpec::generic("r2", random_kraus_channel(2, 16, 2).unwrap()));
        channels.push(ChannelSpec::generic("r3", random_kraus_channel(3, 5, 3).unwrap()));
        for ch in &channels {
            let d = 1 << ch.locality();
            let trials = if ch.locality() == 3 { 100 } else { 1000 };
            for _ in 0..trials {
                let b = random_block(d, &mut rng);
                let direct = column_stack(&ch.kraus().apply_to_block(&b));
                let via_s = apply_transfer(ch.transfer(), &column_stack(&b));
                assert!(max_diff(&direct, &via_s) <= 1e-13, "{}", ch.name());
            }
        }
    }

    #[test]
    fn transfer_invariant_under_unitary_remixing() {
        let ks = random_kraus_channel(2, 4, 9).unwrap();
        // Random 4x4 unitary from the orthonormalisation of a single factor.
        let u = random_kraus_channel(2, 1, 17).unwrap().operators()[0].clone();
        let remixed: Vec<SquareMatrix> = (0..4)
            .map(|beta| {
                let mut acc = SquareMatrix::zeros(4);
                for (alpha, l) in ks.operators().iter().enumerate() {
                    acc = acc.add(&l.scale(u.get(beta, alpha)));
                }
                acc
            })
            .collect();
        let a = transfer_from_kraus(&ks);
        let b = transfer_from_kraus(&KrausSet::new(2, remixed).unwrap());
        assert!(max_diff(a.entries(), b.entries()) <= 1e-13);
    }

    #[test]
    fn native_gate_kinds() {
        assert_eq!(native_gate("x", &[]).unwrap().kind(), &ChannelKind::PauliX);
        let cnot = native_gate("CNOT", &[]).unwrap();
        match cnot.kind() {
            ChannelKind::Permutation(p) => assert_eq!(p.table(), &[0, 1, 3, 2]),
            other => panic!("unexpected kind {other:?}"),
        }
        let rz0 = native_gate("rz", &[0.0]).unwrap();
        assert_eq!(rz0.transfer().entries(), SquareMatrix::identity(4).as_slice());
        assert!(matches!(native_gate("foo", &[]), Err(Error::UnknownGate(_))));
        assert!(native_gate("rz", &[]).is_err());
        assert!(native_gate("rz", &[f64::NAN]).is_err());
        assert!(native_gate("x", &[1.0]).is_err());
        for ch in library() {
            assert_eq!(ch.kraus().rank(), if ch.name() == "depolarising" { 4 } else { 1 });
        }
    }

    #[test]
    fn validation_classes() {
        let tp = validate_cptni(depolarising(0.1).unwrap().kraus(), DEFAULT_VALIDATION_TOL);
        assert_eq!(tp.physicality, Physicality::TracePreserving);
        let half = KrausSet::unitary(SquareMatrix::identity(2).scale(Complex64::from(0.5f64.sqrt()))).unwrap();
        assert_eq!(validate_cptni(&half, 1e-10).physicality, Physicality::TraceNonIncreasing);
        let double = KrausSet::unitary(SquareMatrix::identity(2).scale(Complex64::from(2f64.sqrt()))).unwrap();
        assert_eq!(validate_cptni(&double, 1e-10).physicality, Physicality::Invalid);
        let random = random_kraus_channel(2, 7, 5).unwrap();
        assert_eq!(validate_cptni(&random, 1e-10).physicality, Physicality::TracePreserving);
    }

    #[test]
    fn dual_properties() {
        let ks = random_kraus_channel(2, 3, 4).unwrap();
        assert_eq!(dual_channel(&dual_channel(&ks)), ks);
        let s = ChannelSpec::native(NativeGate::S);
        let dual = dual_channel(s.kraus());
        assert_eq!(dual.rank(), 1);
        assert_eq!(dual.operators()[0], s.kraus().operators()[0].adjoint());
        let dep = depolarising(0.1).unwrap();
        let dual = dual_channel(dep.kraus());
        assert_eq!(
            transfer_from_kraus(&dual).entries(),
            dep.transfer().entries()
        );
        for (a, b) in dual.operators().iter().zip(dep.kraus().operators()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn kraus_set_constraints() {
        assert!(matches!(KrausSet::new(1, vec![]), Err(Error::EmptyKraus)));
        assert!(matches!(
            KrausSet::new(1, vec![SquareMatrix::identity(2); 5]),
            Err(Error::KrausRankExceeded { .. })
        ));
        assert!(KrausSet::new(1, vec![SquareMatrix::identity(4)]).is_err());
        assert!(KrausSet::new(4, vec![SquareMatrix::identity(16)]).is_err());
    }

    #[test]
    fn bind_reorders_to_ascending_bits() {
        // CNOT with control 0 and target 1: in ascending order the control
        // is local bit 0, so the table flips bit 1 when bit 0 is set.
        let cnot = ChannelSpec::native(NativeGate::Cnot);
        let (bound, active) = cnot.bind(&[0, 1], 2).unwrap();
        assert_eq!(active.to_vec(), vec![0, 1]);
        match bound.kind() {
            ChannelKind::Permutation(p) => assert_eq!(p.table(), &[0, 3, 2, 1]),
            _ => unreachable!(),
        }
        let (same, _) = cnot.bind(&[1, 0], 2).unwrap();
        assert_eq!(same, cnot);
        assert!(cnot.bind(&[0, 0], 2).is_err());
        assert!(cnot.bind(&[0, 2], 2).is_err());
        assert!(matches!(cnot.bind(&[0], 2), Err(Error::ArityMismatch { .. })));
        // Toffoli with controls {2, 0} and target 1.
        let (bound, _) = ChannelSpec::native(NativeGate::Toffoli).bind(&[2, 0, 1], 3).unwrap();
        match bound.kind() {
            ChannelKind::Permutation(p) => {
                // controls are local bits 0 and 2, target is bit 1
                assert_eq!(p.table(), &[0, 1, 2, 3, 4, 7, 6, 5]);
            }
            _ => unreachable!(),
        }
        let u = &bound.kraus().operators()[0];
        assert_eq!(u.get(7, 5), ONE);
        assert_eq!(u.get(5, 7), ONE);
    }
}
