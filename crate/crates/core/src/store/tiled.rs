use num_complex::Complex64;

use super::aligned::AlignedBuf;
use super::{Format, HermitianStorage};
use crate::bits::{tile_index, tile_offset};
use crate::error::Result;

/// Lower triangle of the tile grid, tiles in row-major grid order and
/// elements row-major within each tile.
///
/// Diagonal tiles hold all `M^2` entries. When `N < M` a single tile is
/// allocated and the rows and columns past `N` stay zero.
#[derive(Debug, Clone, PartialEq)]
pub struct TiledHermitian {
    n: usize,
    m: u32,
    data: AlignedBuf,
}

impl TiledHermitian {
    pub fn zeros(n: usize, m: u32) -> Result<Self> {
        crate::check_qubits(n)?;
        crate::check_tile_exp(m)?;
        let grid = tile_grid(n, m);
        let edge = 1usize << m;
        Ok(Self {
            n,
            m,
            data: AlignedBuf::zeroed(grid * (grid + 1) / 2 * edge * edge)?,
        })
    }

    #[inline]
    pub fn tile_exp(&self) -> u32 {
        self.m
    }

    /// Tile edge `M = 2^m`.
    #[inline]
    pub fn tile_edge(&self) -> usize {
        1 << self.m
    }

    /// Tiles per grid row, `ceil(N / M)`.
    #[inline]
    pub fn grid_dim(&self) -> usize {
        tile_grid(self.n, self.m)
    }

    #[inline]
    pub fn tile_count(&self) -> usize {
        let g = self.grid_dim();
        g * (g + 1) / 2
    }

    /// Contents of stored tile `(ti, tj)`, `ti >= tj`.
    pub fn tile(&self, ti: usize, tj: usize) -> &[Complex64] {
        let len = self.tile_edge() * self.tile_edge();
        let start = tile_offset(ti, tj, self.tile_edge());
        &self.data.as_slice()[start..start + len]
    }

    /// Stored tiles in storage order, paired with their grid coordinates.
    pub fn tiles(&self) -> impl Iterator<Item = ((usize, usize), &[Complex64])> {
        let len = self.tile_edge() * self.tile_edge();
        let g = self.grid_dim();
        let coords = (0..g).flat_map(|ti| (0..=ti).map(move |tj| (ti, tj)));
        coords.zip(self.data.as_slice().chunks_exact(len))
    }

    #[inline]
    fn position(&self, i: usize, j: usize) -> usize {
        let (ti, tj) = (i >> self.m, j >> self.m);
        let mask = self.tile_edge() - 1;
        tile_index(ti, tj) * self.tile_edge() * self.tile_edge()
            + (i & mask) * self.tile_edge()
            + (j & mask)
    }
}

/// `ceil(2^n / 2^m)` for power-of-two operands.
#[inline]
pub(crate) fn tile_grid(n: usize, m: u32) -> usize {
    1usize << n.saturating_sub(m as usize)
}

impl HermitianStorage for TiledHermitian {
    fn qubits(&self) -> usize {
        self.n
    }

    fn format(&self) -> Format {
        Format::Tiled
    }

    #[inline]
    fn element(&self, i: usize, j: usize) -> Complex64 {
        if (i >> self.m) >= (j >> self.m) {
            self.data.as_slice()[self.position(i, j)]
        } else {
            self.data.as_slice()[self.position(j, i)].conj()
        }
    }

    fn set_lower(&mut self, i: usize, j: usize, v: Complex64) {
        let v = if i == j { Complex64::new(v.re, 0.0) } else { v };
        let pos = self.position(i, j);
        self.data.as_mut_slice()[pos] = v;
        if i != j && (i >> self.m) == (j >> self.m) {
            let mirror = self.position(j, i);
            self.data.as_mut_slice()[mirror] = v.conj();
        }
    }

    fn fill_stored(&mut self, f: &mut dyn FnMut(usize, usize) -> Complex64) {
        let edge = self.tile_edge();
        let dim = self.dim();
        let g = self.grid_dim();
        let tiles = self.data.as_mut_slice().chunks_exact_mut(edge * edge);
        let coords = (0..g).flat_map(|ti| (0..=ti).map(move |tj| (ti, tj)));
        for ((ti, tj), tile) in coords.zip(tiles) {
            for (pos, z) in tile.iter_mut().enumerate() {
                let i = ti * edge + pos / edge;
                let j = tj * edge + pos % edge;
                *z = if i < dim && j < dim { f(i, j) } else { Complex64::ZERO };
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
