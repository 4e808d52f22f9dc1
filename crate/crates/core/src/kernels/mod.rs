//! Gather-transform-scatter conjugation kernels.
//!
//! Every kernel walks the coupled `2^k x 2^k` blocks of its layout, gathers a
//! block into a fixed local buffer in column-stacked order
//! (`v[a + a' 2^k] = h[i(a), j(a')]`), hands it to a [`BlockMap`] and
//! scatters the result back. The generic path uses the transfer matrix as
//! the map; native gates plug in cheaper maps over the same traversal.

mod dense;
mod dispatch;
mod packed;
mod tiled_cross;
mod tiled_group;
mod tiled_intra;

pub use dense::apply_dense;
pub use dispatch::{apply, apply_bound, apply_generic, ApplyPlan, KernelPath};
pub use packed::apply_packed;
pub use tiled_cross::{apply_tiled_cross, CrossTileCounts};
pub use tiled_group::apply_tiled_twoqubit;
pub use tiled_intra::apply_tiled_intra;

pub(crate) use dense::dense_map;
pub(crate) use packed::packed_map;
pub(crate) use tiled_cross::cross_map;
pub(crate) use tiled_group::group_map;
pub(crate) use tiled_intra::intra_map;

use std::sync::atomic::{AtomicUsize, Ordering};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bits::ActiveQubits;
use crate::channel::TransferMatrix;
use crate::error::{Error, Result};
use crate::store::{HermitianStorage, MatrixHandle};

/// Largest gathered block, `4^3` entries.
pub(crate) const MAX_BLOCK: usize = 64;

/// Default for [`set_parallel_min_elements`].
pub const DEFAULT_PARALLEL_MIN_ELEMENTS: usize = 1 << 14;

static PARALLEL_MIN_ELEMENTS: AtomicUsize = AtomicUsize::new(DEFAULT_PARALLEL_MIN_ELEMENTS);

/// Storage with fewer elements than this is updated on the calling thread,
/// where fan-out would cost more than the work. Only the schedule changes;
/// units own disjoint data, so results are identical either way.
pub fn set_parallel_min_elements(elements: usize) {
    PARALLEL_MIN_ELEMENTS.store(elements, Ordering::Relaxed);
}

pub fn parallel_min_elements() -> usize {
    PARALLEL_MIN_ELEMENTS.load(Ordering::Relaxed)
}

/// Runs `work` on every unit, on the pool when `stored` is large enough.
pub(crate) fn for_each_unit<T: Send>(units: &mut [T], stored: usize, work: impl Fn(&mut T) + Sync + Send) {
    if stored >= parallel_min_elements() {
        units.par_iter_mut().for_each(work);
    } else {
        units.iter_mut().for_each(work);
    }
}

/// In-place linear map on one column-stacked `2^k x 2^k` block.
pub trait BlockMap: Sync {
    fn locality(&self) -> usize;

    /// `block` has exactly `4^k` entries.
    fn apply(&self, block: &mut [Complex64]);
}

impl BlockMap for TransferMatrix {
    fn locality(&self) -> usize {
        TransferMatrix::locality(self)
    }

    #[inline]
    fn apply(&self, block: &mut [Complex64]) {
        match self.locality() {
            1 => matvec::<4>(self.entries(), block),
            2 => matvec::<16>(self.entries(), block),
            3 => matvec::<64>(self.entries(), block),
            k => unreachable!("transfer matrix of locality {k}"),
        }
    }
}

#[inline(always)]
fn matvec<const D: usize>(s: &[Complex64], v: &mut [Complex64]) {
    let v: &mut [Complex64; D] = v.try_into().expect("block length");
    let input = *v;
    for (out, row) in v.iter_mut().zip(s.chunks_exact(D)) {
        let mut acc = Complex64::ZERO;
        for (s_rc, x) in row.iter().zip(&input) {
            acc += s_rc * x;
        }
        *out = acc;
    }
}

/// Runs `map` over every coupled block of `h` with the layout's kernel.
pub(crate) fn run_map<M: BlockMap + ?Sized>(
    h: &mut MatrixHandle,
    map: &M,
    active: &ActiveQubits,
) -> (KernelPath, CrossTileCounts) {
    debug_assert_eq!(map.locality(), active.len());
    debug_assert!(active.max() < h.qubits());
    let mut counts = CrossTileCounts::default();
    let regime = match h {
        MatrixHandle::Dense(d) => {
            dense_map(d, map, active);
            KernelPath::Dense
        }
        MatrixHandle::Packed(p) => {
            packed_map(p, map, active);
            KernelPath::Packed
        }
        MatrixHandle::Tiled(t) => {
            let m = t.tile_exp();
            let inner = active.positions().iter().filter(|&&p| p < m).count();
            if active.len() == 1 {
                let a = active.positions()[0] as usize;
                if inner == 1 {
                    intra_map(t, map, a);
                    KernelPath::TiledIntra
                } else {
                    counts = cross_map(t, map, a);
                    KernelPath::TiledCross
                }
            } else {
                group_map(t, map, active);
                match inner {
                    i if i == active.len() => KernelPath::TiledIntra,
                    0 => KernelPath::TiledCross,
                    _ => KernelPath::TiledMixed,
                }
            }
        }
    };
    (regime, counts)
}

pub(crate) fn check_transfer(s: &TransferMatrix, active: &ActiveQubits, n: usize) -> Result<()> {
    if s.locality() != active.len() {
        return Err(Error::ArityMismatch {
            expected: s.locality(),
            actual: active.len(),
        });
    }
    if active.max() >= n {
        return Err(Error::InvalidTargets {
            targets: active.to_vec(),
            n,
            reason: "position out of range",
        });
    }
    Ok(())
}

pub(crate) fn check_storage(h: &dyn HermitianStorage, active: &ActiveQubits) -> Result<()> {
    if active.max() >= h.qubits() {
        return Err(Error::InvalidTargets {
            targets: active.to_vec(),
            n: h.qubits(),
            reason: "position out of range",
        });
    }
    Ok(())
}
