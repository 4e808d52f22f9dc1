//! Hermitian matrix representations: full dense, packed column-major lower
//! triangle, and the tiled lower triangle the kernels are built around.

mod aligned;
mod dense;
mod io;
mod packed;
mod tiled;

pub use dense::DenseHermitian;
pub use io::{load, save, FILE_MAGIC, FILE_VERSION};
pub use packed::PackedHermitian;
pub use tiled::TiledHermitian;

pub(crate) use packed::packed_index;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Storage layout tag. The numeric values are the on-disk tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Format {
    Dense = 0,
    Packed = 1,
    Tiled = 2,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Dense, Format::Packed, Format::Tiled];

    pub fn name(self) -> &'static str {
        match self {
            Format::Dense => "dense",
            Format::Packed => "packed",
            Format::Tiled => "tiled",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "dense" => Ok(Format::Dense),
            "packed" => Ok(Format::Packed),
            "tiled" => Ok(Format::Tiled),
            other => Err(format!("unknown format '{other}'")),
        }
    }
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Common surface of the three layouts.
pub trait HermitianStorage {
    fn qubits(&self) -> usize;

    fn format(&self) -> Format;

    #[inline]
    fn dim(&self) -> usize {
        1 << self.qubits()
    }

    /// Logical element `(i, j)`; unstored entries are conjugate mirrors.
    /// Indices are not range-checked.
    fn element(&self, i: usize, j: usize) -> Complex64;

    /// Writes lower-triangle element `(i, j)`, `i >= j`, together with any
    /// explicitly stored mirror. Diagonal values are forced real.
    fn set_lower(&mut self, i: usize, j: usize, v: Complex64);

    /// Overwrites every stored slot `(i, j)` with `f(i, j)`; padding is zeroed.
    fn fill_stored(&mut self, f: &mut dyn FnMut(usize, usize) -> Complex64);

    fn as_slice(&self) -> &[Complex64];

    fn as_mut_slice(&mut self) -> &mut [Complex64];
}

/// A hermitian matrix in one of the three layouts.
#[derive(Debug, Clone, PartialEq)]
pub enum MatrixHandle {
    Dense(DenseHermitian),
    Packed(PackedHermitian),
    Tiled(TiledHermitian),
}

impl From<DenseHermitian> for MatrixHandle {
    fn from(h: DenseHermitian) -> Self {
        MatrixHandle::Dense(h)
    }
}

impl From<PackedHermitian> for MatrixHandle {
    fn from(h: PackedHermitian) -> Self {
        MatrixHandle::Packed(h)
    }
}

impl From<TiledHermitian> for MatrixHandle {
    fn from(h: TiledHermitian) -> Self {
        MatrixHandle::Tiled(h)
    }
}

impl MatrixHandle {
    /// Zero matrix in the requested layout; `m` is ignored unless tiled.
    pub fn zeros(n: usize, format: Format, m: u32) -> Result<Self> {
        Ok(match format {
            Format::Dense => DenseHermitian::zeros(n)?.into(),
            Format::Packed => PackedHermitian::zeros(n)?.into(),
            Format::Tiled => TiledHermitian::zeros(n, m)?.into(),
        })
    }

    pub fn storage(&self) -> &dyn HermitianStorage {
        match self {
            MatrixHandle::Dense(h) => h,
            MatrixHandle::Packed(h) => h,
            MatrixHandle::Tiled(h) => h,
        }
    }

    pub fn storage_mut(&mut self) -> &mut dyn HermitianStorage {
        match self {
            MatrixHandle::Dense(h) => h,
            MatrixHandle::Packed(h) => h,
            MatrixHandle::Tiled(h) => h,
        }
    }

    pub fn qubits(&self) -> usize {
        self.storage().qubits()
    }

    pub fn dim(&self) -> usize {
        self.storage().dim()
    }

    pub fn format(&self) -> Format {
        self.storage().format()
    }

    /// Tile exponent for tiled matrices, 0 otherwise.
    pub fn tile_exp(&self) -> u32 {
        match self {
            MatrixHandle::Tiled(t) => t.tile_exp(),
            _ => 0,
        }
    }

    /// Range-checked logical element.
    pub fn get(&self, i: usize, j: usize) -> Result<Complex64> {
        let dim = self.dim();
        if i >= dim || j >= dim {
            return Err(Error::IndexOutOfRange { row: i, col: j, dim });
        }
        Ok(self.storage().element(i, j))
    }

    pub fn as_slice(&self) -> &[Complex64] {
        self.storage().as_slice()
    }

    /// Copies the logical matrix into `format`. Every stored slot of the
    /// target takes the source's logical element at the same position, so
    /// conversions never round.
    pub fn convert(&self, format: Format, m: u32) -> Result<MatrixHandle> {
        let mut out = MatrixHandle::zeros(self.qubits(), format, m)?;
        let src = self.storage();
        out.storage_mut().fill_stored(&mut |i, j| src.element(i, j));
        Ok(out)
    }

    pub fn to_dense(&self) -> Result<DenseHermitian> {
        match self {
            MatrixHandle::Dense(d) => Ok(d.clone()),
            other => match other.convert(Format::Dense, 0)? {
                MatrixHandle::Dense(d) => Ok(d),
                _ => unreachable!(),
            },
        }
    }

    /// Largest deviation from hermiticity among redundantly stored entries:
    /// mirror pairs inside dense storage and diagonal tiles, and the
    /// imaginary parts of the diagonal.
    pub fn hermiticity_residual(&self) -> f64 {
        match self {
            MatrixHandle::Dense(d) => {
                let dim = d.dim();
                let mut worst = 0.0f64;
                for i in 0..dim {
                    for j in 0..=i {
                        worst = worst.max((d.element(i, j) - d.element(j, i).conj()).norm());
                    }
                }
                worst
            }
            MatrixHandle::Packed(p) => (0..p.dim())
                .map(|i| p.as_slice()[packed_index(p.dim(), i, i)].im.abs())
                .fold(0.0, f64::max),
            MatrixHandle::Tiled(t) => {
                let edge = t.tile_edge();
                let mut worst = 0.0f64;
                for ti in 0..t.grid_dim() {
                    let tile = t.tile(ti, ti);
                    for r in 0..edge {
                        for c in 0..=r {
                            let d = tile[r * edge + c] - tile[c * edge + r].conj();
                            worst = worst.max(d.norm());
                        }
                    }
                }
                worst
            }
        }
    }
}

/// Bytes needed to store an `n`-qubit hermitian matrix in `format`.
///
/// `u128` because a dense 30-qubit matrix needs exactly 2^64 bytes.
pub fn footprint_bytes(n: usize, m: u32, format: Format) -> u128 {
    let dim = 1u128 << n;
    let count = match format {
        Format::Dense => dim * dim,
        Format::Packed => dim * (dim + 1) / 2,
        Format::Tiled => {
            let grid = tiled::tile_grid(n, m) as u128;
            let edge = 1u128 << m;
            grid * (grid + 1) / 2 * edge * edge
        }
    };
    count * std::mem::size_of::<Complex64>() as u128
}

fn complex_normal(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Lower-triangle row `i` of `H = (A + A^†) / 2`.
///
/// The entries of `A` needed by row `i` are drawn from ChaCha stream `i`
/// (pairs `a[i][j], a[j][i]` for `j < i`, then `a[i][i]`), so each row is
/// produced independently of the others and of the target layout.
fn hermitian_row(seed: u64, i: usize, out: &mut Vec<Complex64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    out.clear();
    for _ in 0..i {
        let a_ij = complex_normal(&mut rng);
        let a_ji = complex_normal(&mut rng);
        out.push((a_ij + a_ji.conj()) * 0.5);
    }
    let a_ii = complex_normal(&mut rng);
    out.push(Complex64::new(a_ii.re, 0.0));
}

/// Seeded random hermitian matrix, generic and in general neither positive
/// nor normalised. The same `(n, seed)` gives the same logical matrix in
/// every layout.
pub fn random_hermitian(n: usize, seed: u64, format: Format, m: u32) -> Result<MatrixHandle> {
    let mut h = MatrixHandle::zeros(n, format, m)?;
    let store = h.storage_mut();
    let mut row = Vec::with_capacity(store.dim());
    for i in 0..store.dim() {
        hermitian_row(seed, i, &mut row);
        for (j, &v) in row.iter().enumerate() {
            store.set_lower(i, j, v);
        }
    }
    Ok(h)
}

/// Seeded random density matrix `G G^† / tr(G G^†)` with Gaussian `G`.
pub fn random_density_matrix(n: usize, seed: u64, format: Format, m: u32) -> Result<MatrixHandle> {
    crate::check_qubits(n)?;
    let dim = 1usize << n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(u64::MAX);
    let g: Vec<Complex64> = (0..dim * dim).map(|_| complex_normal(&mut rng)).collect();
    let gram = |i: usize, j: usize| -> Complex64 {
        let (ri, rj) = (&g[i * dim..(i + 1) * dim], &g[j * dim..(j + 1) * dim]);
        ri.iter().zip(rj).map(|(a, b)| a * b.conj()).sum()
    };
    let trace: f64 = (0..dim).map(|i| g[i * dim..(i + 1) * dim].iter().map(|z| z.norm_sqr()).sum::<f64>()).sum();
    let dense = DenseHermitian::from_lower_fn(n, |i, j| gram(i, j) / trace)?;
    MatrixHandle::from(dense).convert(format, m)
}
