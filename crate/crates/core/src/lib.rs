//! Hermitian operators on `n` qubits stored in dense, packed and tiled
//! layouts, with in-place k-local channel application.
//!
//! A channel acting on qubits `A` updates every coupled `2^k x 2^k` block of
//! the operator through its transfer matrix `S = sum_alpha conj(L_alpha) (x) L_alpha`.
//! The tiled layout stores only lower-triangle tiles of edge `2^m`; its
//! kernels split into an intra-tile case (`a < m`) and a cross-tile case
//! (`a >= m`) that reaches upper-triangle tiles through their stored adjoints.

#[cfg(not(target_pointer_width = "64"))]
compile_error!("global indices need a 64-bit usize");

pub mod bits;
pub mod channel;
pub mod error;
pub mod kernels;
pub mod native;
pub mod observables;
pub mod oracle;
pub mod store;

pub use bits::{extract_bits, insert_bits, ActiveQubits};
pub use channel::{
    depolarising, dual_channel, library, native_gate, random_kraus_channel, transfer_from_kraus, validate_cptni,
    ChannelKind, ChannelSpec, KrausSet, NativeGate, Physicality, SquareMatrix, TransferMatrix, ValidationReport,
};
pub use error::{Error, Result};
pub use kernels::{apply, apply_bound, apply_generic, ApplyPlan, BlockMap, CrossTileCounts, KernelPath};
pub use native::PermutationGate;
pub use observables::{expectation, frobenius_inner, trace};
pub use store::{
    footprint_bytes, random_density_matrix, random_hermitian, DenseHermitian, Format, HermitianStorage,
    MatrixHandle, PackedHermitian, TiledHermitian,
};

/// Largest supported register; a dense operator at this size is 16 EiB.
pub const MAX_QUBITS: usize = 30;

/// Largest supported tile exponent, a 64 MiB tile.
pub const MAX_TILE_EXP: u32 = 11;

pub(crate) fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidQubitCount(n));
    }
    Ok(())
}

pub(crate) fn check_tile_exp(m: u32) -> Result<()> {
    if m > MAX_TILE_EXP {
        return Err(Error::InvalidTileExponent(m));
    }
    Ok(())
}

/// Runs `f` on a dedicated pool of `threads` workers (0 = rayon default).
///
/// Kernels have no cross-unit reductions, so results do not depend on the
/// pool size.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .expect("thread pool")
        .install(f)
}
