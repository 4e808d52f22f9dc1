use num_complex::Complex64;

use super::aligned::AlignedBuf;
use super::{Format, HermitianStorage};
use crate::error::Result;

/// Column-major packed lower triangle: column `j` holds `h[j..N, j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PackedHermitian {
    n: usize,
    data: AlignedBuf,
}

/// Offset of the first stored element of column `j`.
#[inline]
pub(crate) fn column_start(dim: usize, j: usize) -> usize {
    j * (2 * dim - j + 1) / 2
}

/// Offset of `(i, j)`, `i >= j`.
#[inline]
pub(crate) fn packed_index(dim: usize, i: usize, j: usize) -> usize {
    debug_assert!(i >= j);
    column_start(dim, j) + i - j
}

impl PackedHermitian {
    pub fn zeros(n: usize) -> Result<Self> {
        crate::check_qubits(n)?;
        let dim = 1usize << n;
        Ok(Self {
            n,
            data: AlignedBuf::zeroed(dim * (dim + 1) / 2)?,
        })
    }

    #[inline]
    pub(crate) fn index(&self, i: usize, j: usize) -> usize {
        packed_index(self.dim(), i, j)
    }
}

impl HermitianStorage for PackedHermitian {
    fn qubits(&self) -> usize {
        self.n
    }

    fn format(&self) -> Format {
        Format::Packed
    }

    #[inline]
    fn element(&self, i: usize, j: usize) -> Complex64 {
        let d = self.data.as_slice();
        if i >= j {
            d[self.index(i, j)]
        } else {
            d[self.index(j, i)].conj()
        }
    }

    fn set_lower(&mut self, i: usize, j: usize, v: Complex64) {
        let idx = self.index(i, j);
        self.data.as_mut_slice()[idx] = if i == j { Complex64::new(v.re, 0.0) } else { v };
    }

    fn fill_stored(&mut self, f: &mut dyn FnMut(usize, usize) -> Complex64) {
        let dim = self.dim();
        let data = self.data.as_mut_slice();
        let mut idx = 0;
        for j in 0..dim {
            for i in j..dim {
                data[idx] = f(i, j);
                idx += 1;
            }
        }
    }

    fn as_slice(&self) -> &[Complex64] {
        self.data.as_slice()
    }

    fn as_mut_slice(&mut self) -> &mut [Complex64] {
        self.data.as_mut_slice()
    }
}
