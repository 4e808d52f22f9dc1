use num_complex::Complex64;

use super::{check_transfer, BlockMap, MAX_BLOCK};
use crate::bits::{insert_bits, local_offsets, ActiveQubits};
use crate::channel::TransferMatrix;
use crate::error::{Error, Result};
use crate::store::{packed_index, HermitianStorage, PackedHermitian};

/// Generic transfer-matrix update on packed storage, `k <= 2`.
pub fn apply_packed(h: &mut PackedHermitian, s: &TransferMatrix, active: &ActiveQubits) -> Result<()> {
    if active.len() > 2 {
        return Err(Error::UnsupportedLocality(active.len()));
    }
    check_transfer(s, active, h.qubits())?;
    packed_map(h, s, active);
    Ok(())
}

/// Visits blocks `(s, s')` with `s' <= s`. Entries above the diagonal are
/// resolved through the conjugate mirror, element by element.
pub(crate) fn packed_map<M: BlockMap + ?Sized>(h: &mut PackedHermitian, map: &M, active: &ActiveQubits) {
    let dim = h.dim();
    let d = 1usize << active.len();
    let blocks = 1usize << (h.qubits() - active.len());
    let offsets = local_offsets(active.positions());
    let data = h.as_mut_slice();
    let mut v = [Complex64::ZERO; MAX_BLOCK];

    for s_row in 0..blocks {
        let row_base = insert_bits(s_row, 0, active);
        for s_col in 0..=s_row {
            let col_base = insert_bits(s_col, 0, active);
            for (a_col, &oc) in offsets.iter().enumerate() {
                let j = col_base + oc;
                for (a_row, &or) in offsets.iter().enumerate() {
                    let i = row_base + or;
                    v[a_row + a_col * d] = if i >= j {
                        data[packed_index(dim, i, j)]
                    } else {
                        data[packed_index(dim, j, i)].conj()
                    };
                }
            }
            map.apply(&mut v[..d * d]);
            for (a_col, &oc) in offsets.iter().enumerate() {
                let j = col_base + oc;
                for (a_row, &or) in offsets.iter().enumerate() {
                    let i = row_base + or;
                    let w = v[a_row + a_col * d];
                    if i >= j {
                        data[packed_index(dim, i, j)] = w;
                    } else {
                        data[packed_index(dim, j, i)] = w.conj();
                    }
                }
            }
        }
    }
}
