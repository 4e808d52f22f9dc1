use num_complex::Complex64;

use super::{check_transfer, for_each_unit, BlockMap};
use crate::bits::{insert_bits_at, tile_index, ActiveQubits};
use crate::channel::TransferMatrix;
use crate::error::{Error, Result};
use crate::store::{HermitianStorage, TiledHermitian};

/// Work units dispatched by the cross-tile kernel, per subroutine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CrossTileCounts {
    pub cross_tile: usize,
    pub cross_tile_adj: usize,
    pub cross_tile_diag: usize,
}

impl CrossTileCounts {
    pub fn total(&self) -> usize {
        self.cross_tile + self.cross_tile_adj + self.cross_tile_diag
    }
}

/// Single-qubit update for a target that selects tiles, `a >= m`.
pub fn apply_tiled_cross(h: &mut TiledHermitian, s: &TransferMatrix, a: usize) -> Result<CrossTileCounts> {
    let active = ActiveQubits::within(&[a], h.qubits())?;
    check_transfer(s, &active, h.qubits())?;
    if (a as u32) < h.tile_exp() {
        return Err(Error::InvalidTargets {
            targets: vec![a],
            n: h.qubits(),
            reason: "cross-tile kernel needs a >= m",
        });
    }
    Ok(cross_map(h, s, a))
}

enum Unit<'a> {
    /// All four tiles stored below the diagonal.
    Direct([&'a mut [Complex64]; 4]),
    /// The `(0, 1)` tile lies above the diagonal; its adjoint is stored.
    Adjoint([&'a mut [Complex64]; 4]),
    /// The `(0, 0)` and `(1, 1)` tiles are diagonal tiles.
    Diagonal([&'a mut [Complex64]; 3]),
}

pub(crate) fn cross_map<M: BlockMap + ?Sized>(h: &mut TiledHermitian, map: &M, a: usize) -> CrossTileCounts {
    let edge = h.tile_edge();
    let tile_bit = [a as u32 - h.tile_exp()];
    let step = 1usize << tile_bit[0];
    let base_count = h.grid_dim() / 2;
    let stored = h.as_slice().len();

    let mut tiles: Vec<Option<&mut [Complex64]>> =
        h.as_mut_slice().chunks_exact_mut(edge * edge).map(Some).collect();
    let mut take = |ti: usize, tj: usize| {
        tiles[tile_index(ti, tj)].take().expect("tile claimed by two units")
    };

    let mut counts = CrossTileCounts::default();
    let mut units = Vec::with_capacity(base_count * (base_count + 1) / 2);
    for ti in 0..base_count {
        let ti0 = insert_bits_at(ti, 0, &tile_bit);
        let ti1 = ti0 + step;
        for tj in 0..=ti {
            let tj0 = insert_bits_at(tj, 0, &tile_bit);
            let tj1 = tj0 + step;
            let unit = if ti0 > tj1 {
                counts.cross_tile += 1;
                Unit::Direct([take(ti0, tj0), take(ti1, tj0), take(ti0, tj1), take(ti1, tj1)])
            } else if ti != tj {
                counts.cross_tile_adj += 1;
                Unit::Adjoint([take(ti0, tj0), take(ti1, tj0), take(tj1, ti0), take(ti1, tj1)])
            } else {
                counts.cross_tile_diag += 1;
                Unit::Diagonal([take(ti0, ti0), take(ti1, ti0), take(ti1, ti1)])
            };
            units.push(unit);
        }
    }
    debug_assert!(tiles.iter().all(Option::is_none));

    for_each_unit(&mut units, stored, |unit| match unit {
        Unit::Direct(t) => cross_tile(map, t),
        Unit::Adjoint(t) => cross_tile_adj(map, edge, t),
        Unit::Diagonal(t) => cross_tile_diag(map, edge, t),
    });
    counts
}

/// Tiles `[T00, T10, T01, T11]`, all stored as-is.
fn cross_tile<M: BlockMap + ?Sized>(map: &M, t: &mut [&mut [Complex64]; 4]) {
    let [t00, t10, t01, t11] = t;
    for l in 0..t00.len() {
        let mut v = [t00[l], t10[l], t01[l], t11[l]];
        map.apply(&mut v);
        t00[l] = v[0];
        t10[l] = v[1];
        t01[l] = v[2];
        t11[l] = v[3];
    }
}

/// Tiles `[T00, T10, T01^H, T11]`: the third slot holds the stored adjoint.
fn cross_tile_adj<M: BlockMap + ?Sized>(map: &M, edge: usize, t: &mut [&mut [Complex64]; 4]) {
    let [t00, t10, t01h, t11] = t;
    for i in 0..edge {
        for j in 0..edge {
            let l = i * edge + j;
            let lt = j * edge + i;
            let mut v = [t00[l], t10[l], t01h[lt].conj(), t11[l]];
            map.apply(&mut v);
            t00[l] = v[0];
            t10[l] = v[1];
            t01h[lt] = v[2].conj();
            t11[l] = v[3];
        }
    }
}

/// Tiles `[T00, T10, T11]`. `T01 = T10^H`, and the diagonal tiles keep both
/// halves, so each visit to `(i, j)` with `j < i` also writes `(j, i)`.
fn cross_tile_diag<M: BlockMap + ?Sized>(map: &M, edge: usize, t: &mut [&mut [Complex64]; 3]) {
    let [t00, t10, t11] = t;
    for i in 0..edge {
        for j in 0..=i {
            let l = i * edge + j;
            let lt = j * edge + i;
            let mut v = [t00[l], t10[l], t10[lt].conj(), t11[l]];
            map.apply(&mut v);
            t00[l] = v[0];
            t10[l] = v[1];
            t10[lt] = v[2].conj();
            t11[l] = v[3];
            if i != j {
                t00[lt] = v[0].conj();
                t11[lt] = v[3].conj();
            }
        }
    }
}
