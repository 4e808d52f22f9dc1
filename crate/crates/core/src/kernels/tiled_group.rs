use num_complex::Complex64;

use super::{check_transfer, for_each_unit, BlockMap, MAX_BLOCK};
use crate::bits::{insert_bits_at, local_offsets, tile_index, ActiveQubits};
use crate::channel::TransferMatrix;
use crate::error::{Error, Result};
use crate::store::{HermitianStorage, TiledHermitian};

/// Two-qubit update on tiled storage, any split of the targets across the
/// intra-tile and tile-index bits.
pub fn apply_tiled_twoqubit(h: &mut TiledHermitian, s: &TransferMatrix, active: &ActiveQubits) -> Result<()> {
    if active.len() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            actual: active.len(),
        });
    }
    check_transfer(s, active, h.qubits())?;
    group_map(h, s, active);
    Ok(())
}

/// One unit per pair of reduced tile coordinates `(bi, bj)`, `bj <= bi`.
///
/// Logical tile `(x, y)` of a unit is resolved to a stored tile, directly or
/// through its adjoint. Every stored tile belongs to exactly one unit.
struct Group<'a> {
    diagonal: bool,
    tiles: Vec<&'a mut [Complex64]>,
    /// `(slot, adjoint)` for logical tile `x * 2^k_out + y`.
    lookup: Vec<(u8, bool)>,
}

pub(crate) fn group_map<M: BlockMap + ?Sized>(h: &mut TiledHermitian, map: &M, active: &ActiveQubits) {
    let edge = h.tile_edge();
    let (inner, outer) = active.split_at(h.tile_exp());
    let k_in = inner.len();
    let k_out = outer.len();
    let d_out = 1usize << k_out;
    let inner_offsets = local_offsets(&inner);
    let outer_offsets = local_offsets(&outer);
    let grid = h.grid_dim() >> k_out;
    let inner_count = edge.min(h.dim()) >> k_in;
    let stored = h.as_slice().len();

    let mut slots: Vec<Option<&mut [Complex64]>> =
        h.as_mut_slice().chunks_exact_mut(edge * edge).map(Some).collect();

    let mut groups = Vec::with_capacity(grid * (grid + 1) / 2);
    for bi in 0..grid {
        let row_base = insert_bits_at(bi, 0, &outer);
        for bj in 0..=bi {
            let col_base = insert_bits_at(bj, 0, &outer);
            let mut ids: Vec<usize> = Vec::with_capacity(d_out * d_out);
            let mut tiles = Vec::with_capacity(d_out * d_out);
            let mut lookup = Vec::with_capacity(d_out * d_out);
            for &ox in &outer_offsets {
                for &oy in &outer_offsets {
                    let (ti, tj) = (row_base + ox, col_base + oy);
                    let (id, adjoint) = if ti >= tj {
                        (tile_index(ti, tj), false)
                    } else {
                        (tile_index(tj, ti), true)
                    };
                    let slot = match ids.iter().position(|&e| e == id) {
                        Some(slot) => slot,
                        None => {
                            ids.push(id);
                            tiles.push(slots[id].take().expect("tile claimed by two groups"));
                            ids.len() - 1
                        }
                    };
                    lookup.push((slot as u8, adjoint));
                }
            }
            groups.push(Group {
                diagonal: bi == bj,
                tiles,
                lookup,
            });
        }
    }
    debug_assert!(slots.iter().all(Option::is_none));

    let geometry = Geometry {
        edge,
        inner: &inner,
        inner_offsets: &inner_offsets,
        k_in,
        d: 1 << active.len(),
        d_out,
        inner_count,
    };
    for_each_unit(&mut groups, stored, |group| run_group(map, &geometry, group));
}

struct Geometry<'g> {
    edge: usize,
    inner: &'g [u32],
    inner_offsets: &'g [usize],
    k_in: usize,
    d: usize,
    d_out: usize,
    inner_count: usize,
}

fn run_group<M: BlockMap + ?Sized>(map: &M, g: &Geometry<'_>, group: &mut Group<'_>) {
    let d = g.d;
    let in_mask = (1usize << g.k_in) - 1;
    let edge = g.edge;
    // (logical tile coordinate, position inside the tile) per local index.
    let mut rows = [(0usize, 0usize); 8];
    let mut cols = [(0usize, 0usize); 8];
    let mut v = [Complex64::ZERO; MAX_BLOCK];

    for p in 0..g.inner_count {
        let row_base = insert_bits_at(p, 0, g.inner);
        for (a, r) in rows[..d].iter_mut().enumerate() {
            *r = (a >> g.k_in, row_base + g.inner_offsets[a & in_mask]);
        }
        let q_end = if group.diagonal { p + 1 } else { g.inner_count };
        for q in 0..q_end {
            let col_base = insert_bits_at(q, 0, g.inner);
            for (a, c) in cols[..d].iter_mut().enumerate() {
                *c = (a >> g.k_in, col_base + g.inner_offsets[a & in_mask]);
            }

            for (a_col, &(y, c)) in cols[..d].iter().enumerate() {
                for (a_row, &(x, r)) in rows[..d].iter().enumerate() {
                    let (slot, adjoint) = group.lookup[x * g.d_out + y];
                    let tile = &group.tiles[slot as usize];
                    v[a_row + a_col * d] = if adjoint {
                        tile[c * edge + r].conj()
                    } else {
                        tile[r * edge + c]
                    };
                }
            }
            map.apply(&mut v[..d * d]);
            for (a_col, &(y, c)) in cols[..d].iter().enumerate() {
                for (a_row, &(x, r)) in rows[..d].iter().enumerate() {
                    let (slot, adjoint) = group.lookup[x * g.d_out + y];
                    let tile = &mut group.tiles[slot as usize];
                    let w = v[a_row + a_col * d];
                    if adjoint {
                        tile[c * edge + r] = w.conj();
                    } else {
                        tile[r * edge + c] = w;
                        if group.diagonal && x == y && r != c {
                            // Grid-diagonal tile: keep the mirrored half in step.
                            tile[c * edge + r] = w.conj();
                        }
                    }
                }
            }
        }
    }
}
