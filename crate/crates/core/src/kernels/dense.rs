use num_complex::Complex64;

use super::{check_transfer, for_each_unit, BlockMap, MAX_BLOCK};
use crate::bits::{insert_bits, local_offsets, ActiveQubits};
use crate::channel::TransferMatrix;
use crate::error::Result;
use crate::store::{DenseHermitian, HermitianStorage};

/// Replaces every block `h[s, s']` with `unvec(S vec(h[s, s']))`.
pub fn apply_dense(h: &mut DenseHermitian, s: &TransferMatrix, active: &ActiveQubits) -> Result<()> {
    check_transfer(s, active, h.qubits())?;
    dense_map(h, s, active);
    Ok(())
}

/// Work units are block rows: the `2^k` matrix rows sharing a subspace label.
pub(crate) fn dense_map<M: BlockMap + ?Sized>(h: &mut DenseHermitian, map: &M, active: &ActiveQubits) {
    let dim = h.dim();
    let stored = dim * dim;
    let k = active.len();
    let d = 1usize << k;
    let blocks = 1usize << (h.qubits() - k);
    let offsets = local_offsets(active.positions());

    let mut rows: Vec<Option<&mut [Complex64]>> =
        h.as_mut_slice().chunks_exact_mut(dim).map(Some).collect();
    let mut units: Vec<Vec<&mut [Complex64]>> = (0..blocks)
        .map(|s| {
            let base = insert_bits(s, 0, active);
            offsets
                .iter()
                .map(|&o| rows[base + o].take().expect("row shared by two blocks"))
                .collect()
        })
        .collect();

    for_each_unit(&mut units, stored, |unit| {
        let mut v = [Complex64::ZERO; MAX_BLOCK];
        for s_col in 0..blocks {
            let col_base = insert_bits(s_col, 0, active);
            for (a_col, &oc) in offsets.iter().enumerate() {
                let j = col_base + oc;
                for (a_row, row) in unit.iter().enumerate() {
                    v[a_row + a_col * d] = row[j];
                }
            }
            map.apply(&mut v[..d * d]);
            for (a_col, &oc) in offsets.iter().enumerate() {
                let j = col_base + oc;
                for (a_row, row) in unit.iter_mut().enumerate() {
                    row[j] = v[a_row + a_col * d];
                }
            }
        }
    });
}
