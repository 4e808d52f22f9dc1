//! Scalar functionals of stored operators.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::store::{MatrixHandle, TiledHermitian};

/// Real part of the trace.
pub fn trace(h: &MatrixHandle) -> f64 {
    let s = h.storage();
    let (mut re, mut im, mut scale) = (0.0, 0.0, 0.0);
    for i in 0..s.dim() {
        let d = s.element(i, i);
        re += d.re;
        im += d.im;
        scale += d.norm();
    }
    debug_assert!(im.abs() <= 1e-12 * (1.0 + scale), "trace has imaginary part {im}");
    re
}

/// `sum_l conj(a_l) b_l` over two equally sized contiguous slices.
pub fn frobenius_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len(), "tiles of different size");
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// `tr(rho O)` for hermitian `rho` and `O`.
///
/// Two tiled operands with the same tile size are reduced tile by tile:
/// diagonal tiles once, strictly lower tiles twice. Everything else goes
/// through dense copies.
pub fn expectation(rho: &MatrixHandle, obs: &MatrixHandle) -> Result<f64> {
    if rho.qubits() != obs.qubits() {
        return Err(Error::SizeMismatch(rho.qubits(), obs.qubits()));
    }
    if let (MatrixHandle::Tiled(r), MatrixHandle::Tiled(o)) = (rho, obs) {
        if r.tile_exp() == o.tile_exp() {
            return Ok(tiled_expectation(r, o));
        }
    }
    let (r, o) = (rho.to_dense()?, obs.to_dense()?);
    use crate::store::HermitianStorage;
    Ok(frobenius_inner(o.as_slice(), r.as_slice()).re)
}

fn tiled_expectation(rho: &TiledHermitian, obs: &TiledHermitian) -> f64 {
    let tile_len = rho.tile_edge() * rho.tile_edge();
    let pairs: Vec<((usize, usize), &[Complex64])> = rho.tiles().collect();
    let terms: Vec<f64> = pairs
        .par_iter()
        .zip(obs.tiles().collect::<Vec<_>>().par_iter())
        .map(|(((ti, tj), r), (_, o))| {
            debug_assert_eq!(r.len(), tile_len);
            let weight = if ti == tj { 1.0 } else { 2.0 };
            weight * frobenius_inner(o, r).re
        })
        .collect();
    pairwise_sum(&terms)
}

/// Fixed-order pairwise summation.
fn pairwise_sum(x: &[f64]) -> f64 {
    match x.len() {
        0 => 0.0,
        1..=8 => x.iter().sum(),
        len => {
            let (lo, hi) = x.split_at(len / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}
