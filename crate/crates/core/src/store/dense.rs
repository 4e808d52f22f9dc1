use num_complex::Complex64;

use super::aligned::AlignedBuf;
use super::{Format, HermitianStorage};
use crate::error::{Error, Result};

/// Full `N x N` row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseHermitian {
    n: usize,
    data: AlignedBuf,
}

impl DenseHermitian {
    pub fn zeros(n: usize) -> Result<Self> {
        crate::check_qubits(n)?;
        let dim = 1usize << n;
        Ok(Self {
            n,
            data: AlignedBuf::zeroed(dim * dim)?,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut h = Self::zeros(n)?;
        let dim = h.dim();
        for i in 0..dim {
            h.data.as_mut_slice()[i * dim + i] = Complex64::ONE;
        }
        Ok(h)
    }

    /// Builds the matrix from its lower triangle; the upper triangle is the
    /// exact conjugate mirror and diagonal imaginary parts are dropped.
    pub fn from_lower_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let mut h = Self::zeros(n)?;
        for i in 0..h.dim() {
            for j in 0..=i {
                h.set_lower(i, j, f(i, j));
            }
        }
        Ok(h)
    }

    /// Wraps row-major data as is. No symmetrisation is applied, so the
    /// caller is responsible for hermiticity.
    pub fn from_data(n: usize, data: &[Complex64]) -> Result<Self> {
        let mut h = Self::zeros(n)?;
        if data.len() != h.data.as_slice().len() {
            return Err(Error::DimensionMismatch {
                expected: h.data.as_slice().len(),
                actual: data.len(),
            });
        }
        h.data.as_mut_slice().copy_from_slice(data);
        Ok(h)
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[Complex64] {
        let dim = self.dim();
        &self.data.as_slice()[i * dim..(i + 1) * dim]
    }
}

impl HermitianStorage for DenseHermitian {
    fn qubits(&self) -> usize {
        self.n
    }

    fn format(&self) -> Format {
        Format::Dense
    }

    #[inline]
    fn element(&self, i: usize, j: usize) -> Complex64 {
        self.data.as_slice()[i * self.dim() + j]
    }

    fn set_lower(&mut self, i: usize, j: usize, v: Complex64) {
        let dim = self.dim();
        let data = self.data.as_mut_slice();
        if i == j {
            data[i * dim + i] = Complex64::new(v.re, 0.0);
        } else {
            data[i * dim + j] = v;
            data[j * dim + i] = v.conj();
        }
    }

    fn fill_stored(&mut self, f: &mut dyn FnMut(usize, usize) -> Complex64) {
        let dim = self.dim();
        for (idx, z) in self.data.as_mut_slice().iter_mut().enumerate() {
            *z = f(idx / dim, idx % dim);
        }
    }

    fn as_slice(&self) -> &[Complex64] {
        self.data.as_slice()
    }

    fn as_mut_slice(&mut self) -> &mut [Complex64] {
        self.data.as_mut_slice()
    }
}
