#![allow(dead_code)]

use hermtile::oracle::{dense_kraus_apply, relative_frobenius_error};
use hermtile::{ChannelSpec, DenseHermitian, Format, MatrixHandle, SquareMatrix};
pub use num_complex::Complex64;

/// Layouts exercised by the sweeps: dense, packed and tiled at several `m`.
pub const LAYOUTS: [(Format, u32); 5] = [
    (Format::Dense, 0),
    (Format::Packed, 0),
    (Format::Tiled, 0),
    (Format::Tiled, 2),
    (Format::Tiled, 5),
];

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Reference result of `channel` on gate-order `targets`.
pub fn oracle(h: &MatrixHandle, channel: &ChannelSpec, targets: &[usize]) -> DenseHermitian {
    let (bound, active) = channel.bind(targets, h.qubits()).unwrap();
    dense_kraus_apply(&h.to_dense().unwrap(), bound.kraus(), &active).unwrap()
}

pub fn rel_err(h: &MatrixHandle, reference: &DenseHermitian) -> f64 {
    relative_frobenius_error(h.storage(), reference)
}

/// All ordered tuples of `k` distinct qubits below `n`.
pub fn ordered_targets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for q in 0..n {
            if !cur.contains(&q) {
                cur.push(q);
                rec(n, k, cur, out);
                cur.pop();
            }
        }
    }
    rec(n, k, &mut cur, &mut out);
    out
}

/// Logical entries equal under `==` (so `-0.0 == 0.0`).
pub fn logically_equal(a: &MatrixHandle, b: &MatrixHandle) -> bool {
    let (sa, sb) = (a.storage(), b.storage());
    (0..sa.dim()).all(|i| (0..=i).all(|j| sa.element(i, j) == sb.element(i, j)))
}

/// `L` placed on gate-order `targets`, first target most significant,
/// built without going through sorted active qubits.
pub fn gate_order_embed(l: &SquareMatrix, targets: &[usize], n: usize) -> SquareMatrix {
    let k = targets.len();
    let local = |g: usize| -> usize {
        targets
            .iter()
            .enumerate()
            .map(|(idx, &t)| ((g >> t) & 1) << (k - 1 - idx))
            .sum()
    };
    let mask: usize = targets.iter().map(|&t| 1 << t).sum();
    SquareMatrix::from_fn(1 << n, |g, g2| {
        if g & !mask == g2 & !mask {
            l.get(local(g), local(g2))
        } else {
            Complex64::ZERO
        }
    })
}
