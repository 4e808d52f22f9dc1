use num_complex::Complex64;

use super::{check_transfer, for_each_unit, BlockMap};
use crate::bits::{insert_bits_at, ActiveQubits};
use crate::channel::TransferMatrix;
use crate::error::{Error, Result};
use crate::store::{HermitianStorage, TiledHermitian};

/// Single-qubit update for a target inside the tile, `a < m`.
pub fn apply_tiled_intra(h: &mut TiledHermitian, s: &TransferMatrix, a: usize) -> Result<()> {
    let active = ActiveQubits::within(&[a], h.qubits())?;
    check_transfer(s, &active, h.qubits())?;
    if a as u32 >= h.tile_exp() {
        return Err(Error::InvalidTargets {
            targets: vec![a],
            n: h.qubits(),
            reason: "intra-tile kernel needs a < m",
        });
    }
    intra_map(h, s, a);
    Ok(())
}

/// Every stored tile is closed under the update, so tiles are independent
/// units. Padding rows and columns beyond `N` are never visited.
pub(crate) fn intra_map<M: BlockMap + ?Sized>(h: &mut TiledHermitian, map: &M, a: usize) {
    let edge = h.tile_edge();
    let base_count = edge.min(h.dim()) / 2;
    let stride = 1usize << a;
    let pos = [a as u32];

    let data = h.as_mut_slice();
    let stored = data.len();
    let mut tiles: Vec<&mut [Complex64]> = data.chunks_exact_mut(edge * edge).collect();
    for_each_unit(&mut tiles, stored, |tile| {
        for i in 0..base_count {
            let i0 = insert_bits_at(i, 0, &pos);
            for j in 0..base_count {
                let j0 = insert_bits_at(j, 0, &pos);
                let l00 = i0 * edge + j0;
                let l10 = l00 + stride * edge;
                let l01 = l00 + stride;
                let l11 = l10 + stride;
                let mut v = [tile[l00], tile[l10], tile[l01], tile[l11]];
                map.apply(&mut v);
                tile[l00] = v[0];
                tile[l10] = v[1];
                tile[l01] = v[2];
                tile[l11] = v[3];
            }
        }
    });
}

