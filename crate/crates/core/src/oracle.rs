//! Slow dense reference implementations.
//!
//! Naive triple loops only, with no linear-algebra dependency, so that the
//! kernels are checked against the smallest possible trust base. Like
//! reference BLAS, the products skip zero scalars, which makes embedded
//! Kraus operators cheap without changing the arithmetic on nonzero terms.

use num_complex::Complex64;

use crate::bits::{extract_bits, ActiveQubits};
use crate::channel::{KrausSet, SquareMatrix};
use crate::error::{Error, Result};
use crate::store::{DenseHermitian, HermitianStorage};

/// `1 (x) ... (x) L (x) ... (x) 1` with `L` on the qubits of `active`:
/// `K[g, g'] = L[a, a']` when `g` and `g'` agree outside `active`.
pub fn embed_kraus(l: &SquareMatrix, active: &ActiveQubits, n: usize) -> Result<SquareMatrix> {
    let d = 1usize << active.len();
    if l.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: l.dim(),
        });
    }
    if active.max() >= n {
        return Err(Error::InvalidTargets {
            targets: active.to_vec(),
            n,
            reason: "position out of range",
        });
    }
    let split: Vec<(usize, usize)> = (0..1usize << n).map(|g| extract_bits(g, active)).collect();
    Ok(SquareMatrix::from_fn(1 << n, |g, g2| {
        let ((s, a), (s2, a2)) = (split[g], split[g2]);
        if s == s2 {
            l.get(a, a2)
        } else {
            Complex64::ZERO
        }
    }))
}

/// `sum_alpha K_alpha H K_alpha^H` with explicit embedded operators.
pub fn dense_kraus_apply(h: &DenseHermitian, ks: &KrausSet, active: &ActiveQubits) -> Result<DenseHermitian> {
    let n = h.qubits();
    if ks.locality() != active.len() {
        return Err(Error::ArityMismatch {
            expected: ks.locality(),
            actual: active.len(),
        });
    }
    let embedded = ks
        .operators()
        .iter()
        .map(|l| embed_kraus(l, active, n))
        .collect::<Result<Vec<_>>>()?;
    kraus_sum_apply(h, &embedded)
}

/// `sum_alpha K_alpha H K_alpha^H` for already embedded `2^n x 2^n` operators.
pub fn kraus_sum_apply(h: &DenseHermitian, embedded: &[SquareMatrix]) -> Result<DenseHermitian> {
    let dim = h.dim();
    let mut out = vec![Complex64::ZERO; dim * dim];
    let mut tmp = vec![Complex64::ZERO; dim * dim];
    for k in embedded {
        if k.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: k.dim(),
            });
        }
        let k = k.as_slice();
        // tmp = K H
        tmp.fill(Complex64::ZERO);
        matmul_into(k, h.as_slice(), &mut tmp, dim);
        // out += tmp K^H
        for j in 0..dim {
            for x in 0..dim {
                let k_jx = k[j * dim + x].conj();
                if k_jx == Complex64::ZERO {
                    continue;
                }
                for i in 0..dim {
                    out[i * dim + j] += tmp[i * dim + x] * k_jx;
                }
            }
        }
    }
    DenseHermitian::from_data(h.qubits(), &out)
}

/// `c += a b`, row-major, i-k-j order. Zero scalars of `a` are skipped, as
/// in reference BLAS.
fn matmul_into(a: &[Complex64], b: &[Complex64], c: &mut [Complex64], dim: usize) {
    for i in 0..dim {
        for x in 0..dim {
            let a_ix = a[i * dim + x];
            if a_ix == Complex64::ZERO {
                continue;
            }
            for j in 0..dim {
                c[i * dim + j] += a_ix * b[x * dim + j];
            }
        }
    }
}

/// `||a - b||_F / max(||b||_F, tiny)` over two logical matrices of equal size.
pub fn relative_frobenius_error(a: &dyn HermitianStorage, b: &dyn HermitianStorage) -> f64 {
    assert_eq!(a.dim(), b.dim(), "matrices of different size");
    let (mut diff, mut norm) = (0.0, 0.0);
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let y = b.element(i, j);
            diff += (a.element(i, j) - y).norm_sqr();
            norm += y.norm_sqr();
        }
    }
    diff.sqrt() / norm.sqrt().max(f64::MIN_POSITIVE)
}
