use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Clone, Copy)]
#[repr(C, align(64))]
struct CacheLine([Complex64; 4]);

const ZERO_LINE: CacheLine = CacheLine([Complex64::ZERO; 4]);

/// Zero-initialised complex buffer whose first element sits on a 64-byte
/// boundary.
#[derive(Clone)]
pub(crate) struct AlignedBuf {
    lines: Vec<CacheLine>,
    len: usize,
}

impl AlignedBuf {
    pub(crate) fn zeroed(len: usize) -> Result<Self> {
        let n_lines = len.div_ceil(4);
        let mut lines = Vec::new();
        lines
            .try_reserve_exact(n_lines)
            .map_err(|_| Error::Allocation(len))?;
        lines.resize(n_lines, ZERO_LINE);
        Ok(Self { lines, len })
    }

    #[inline]
    pub(crate) fn as_slice(&self) -> &[Complex64] {
        // SAFETY: `CacheLine` is `repr(C)` over `[Complex64; 4]` with no
        // padding (4 * 16 = 64 bytes), so the line vector is a contiguous run
        // of `4 * lines.len() >= len` initialised `Complex64` values.
        unsafe { std::slice::from_raw_parts(self.lines.as_ptr().cast(), self.len) }
    }

    #[inline]
    pub(crate) fn as_mut_slice(&mut self) -> &mut [Complex64] {
        // SAFETY: as above; the exclusive borrow of `self` covers the slice.
        unsafe { std::slice::from_raw_parts_mut(self.lines.as_mut_ptr().cast(), self.len) }
    }
}

impl std::fmt::Debug for AlignedBuf {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AlignedBuf").field("len", &self.len).finish()
    }
}

impl PartialEq for AlignedBuf {
    fn eq(&self, other: &Self) -> bool {
        self.as_slice() == other.as_slice()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn aligned_and_zeroed() {
        for len in [1, 3, 4, 5, 1024, 1025] {
            let buf = AlignedBuf::zeroed(len).unwrap();
            assert_eq!(buf.as_slice().len(), len);
            assert_eq!(buf.as_slice().as_ptr() as usize % 64, 0);
            assert!(buf.as_slice().iter().all(|z| *z == Complex64::ZERO));
        }
    }
}
