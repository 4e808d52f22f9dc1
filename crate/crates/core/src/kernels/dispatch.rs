use super::{run_map, CrossTileCounts};
use crate::bits::ActiveQubits;
use crate::channel::{ChannelKind, ChannelSpec};
use crate::error::Result;
use crate::native::{HadamardMap, PauliXMap, PauliYMap, PermutationMap, PhaseMap};
use crate::store::{DenseHermitian, Format, MatrixHandle};

/// Traversal used for one application.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelPath {
    Dense,
    Packed,
    /// All targets inside the tile.
    TiledIntra,
    /// All targets select tiles.
    TiledCross,
    /// Targets on both sides of the tile boundary.
    TiledMixed,
    /// Converted to dense, updated there, converted back.
    DenseFallback,
}

/// What [`apply`] did.
#[derive(Debug, Clone, PartialEq)]
pub struct ApplyPlan {
    /// The channel in sorted-target bit order.
    pub channel: ChannelSpec,
    pub targets: ActiveQubits,
    pub path: KernelPath,
    /// Whether a native map replaced the transfer-matrix product.
    pub native: bool,
    /// Non-zero only for single-qubit cross-tile updates.
    pub cross_counts: CrossTileCounts,
}

/// Applies `channel` to `h` on gate-order `targets`, routing native gates to
/// their specialised maps.
pub fn apply(h: &mut MatrixHandle, channel: &ChannelSpec, targets: &[usize]) -> Result<ApplyPlan> {
    let (bound, active) = channel.bind(targets, h.qubits())?;
    Ok(apply_bound(h, bound, active, true))
}

/// Like [`apply`], but always multiplies by the transfer matrix.
pub fn apply_generic(h: &mut MatrixHandle, channel: &ChannelSpec, targets: &[usize]) -> Result<ApplyPlan> {
    let (bound, active) = channel.bind(targets, h.qubits())?;
    Ok(apply_bound(h, bound, active, false))
}

/// Applies an already bound channel. `active` must be in range for `h`.
pub fn apply_bound(h: &mut MatrixHandle, channel: ChannelSpec, active: ActiveQubits, native: bool) -> ApplyPlan {
    assert!(active.max() < h.qubits(), "targets out of range");
    let kind = if native { channel.kind().clone() } else { ChannelKind::GenericKraus };
    let (path, cross_counts) = match &kind {
        ChannelKind::PauliX => run_map(h, &PauliXMap, &active),
        ChannelKind::PauliY => run_map(h, &PauliYMap, &active),
        ChannelKind::DiagonalPhase(p) => run_map(h, &PhaseMap::new(*p), &active),
        ChannelKind::Hadamard => run_map(h, &HadamardMap, &active),
        ChannelKind::Permutation(g) => run_map(h, &PermutationMap::new(g), &active),
        ChannelKind::GenericKraus => {
            if active.len() == 3 && h.format() != Format::Dense {
                dense_fallback(h, &channel, &active)
            } else {
                run_map(h, channel.transfer(), &active)
            }
        }
    };
    ApplyPlan {
        channel,
        targets: active,
        path,
        native: !matches!(kind, ChannelKind::GenericKraus),
        cross_counts,
    }
}

fn dense_fallback(h: &mut MatrixHandle, channel: &ChannelSpec, active: &ActiveQubits) -> (KernelPath, CrossTileCounts) {
    let (format, m) = (h.format(), h.tile_exp());
    let dense: DenseHermitian = h.to_dense().expect("dense copy of a valid matrix");
    let mut dense = MatrixHandle::Dense(dense);
    run_map(&mut dense, channel.transfer(), active);
    *h = dense.convert(format, m).expect("conversion between valid layouts");
    (KernelPath::DenseFallback, CrossTileCounts::default())
}
