//! Index arithmetic: splicing local qubit bits into subspace labels and
//! locating tiles in the packed lower-triangle tile grid.

use crate::error::{Error, Result};

/// Sorted set of one to three distinct active qubit positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ActiveQubits {
    pos: [u32; 3],
    len: u8,
}

impl ActiveQubits {
    pub const MAX_LOCALITY: usize = 3;

    /// Builds the set from strictly increasing positions.
    pub fn new(positions: &[usize]) -> Result<Self> {
        let invalid = |reason| Error::InvalidTargets {
            targets: positions.to_vec(),
            n: usize::MAX,
            reason,
        };
        if positions.is_empty() || positions.len() > Self::MAX_LOCALITY {
            return Err(invalid("between one and three targets are supported"));
        }
        if positions.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("positions must be strictly increasing"));
        }
        if positions[positions.len() - 1] >= 64 {
            return Err(invalid("position exceeds the 64-bit index width"));
        }
        let mut pos = [0u32; 3];
        for (slot, &p) in pos.iter_mut().zip(positions) {
            *slot = p as u32;
        }
        Ok(Self {
            pos,
            len: positions.len() as u8,
        })
    }

    /// Like [`ActiveQubits::new`] but also checks every position is below `n`.
    pub fn within(positions: &[usize], n: usize) -> Result<Self> {
        let set = Self::new(positions).map_err(|e| match e {
            Error::InvalidTargets { targets, reason, .. } => {
                Error::InvalidTargets { targets, n, reason }
            }
            other => other,
        })?;
        if positions.iter().any(|&p| p >= n) {
            return Err(Error::InvalidTargets {
                targets: positions.to_vec(),
                n,
                reason: "position out of range",
            });
        }
        Ok(set)
    }

    pub fn single(a: usize) -> Self {
        Self::new(&[a]).expect("single qubit position below 64")
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn positions(&self) -> &[u32] {
        &self.pos[..self.len as usize]
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.positions().iter().map(|&p| p as usize).collect()
    }

    /// Largest position in the set.
    #[inline]
    pub fn max(&self) -> usize {
        self.pos[self.len as usize - 1] as usize
    }

    /// Splits into the positions below `m` and the positions at or above
    /// `m` shifted down by `m`. Either part may be empty.
    pub(crate) fn split_at(&self, m: u32) -> (Vec<u32>, Vec<u32>) {
        let inner = self.positions().iter().copied().filter(|&p| p < m).collect();
        let outer = self
            .positions()
            .iter()
            .filter(|&&p| p >= m)
            .map(|&p| p - m)
            .collect();
        (inner, outer)
    }
}

/// Inserts bit `ℓ` of `a` into `s` at position `positions[ℓ]`, ascending.
///
/// `positions` must be sorted ascending; the splice of a lower position
/// shifts every higher bit of the running result, so the order matters.
#[inline]
pub fn insert_bits_at(s: usize, a: usize, positions: &[u32]) -> usize {
    let mut global = s;
    for (l, &pos) in positions.iter().enumerate() {
        let right = ((1usize << pos) - 1) & global;
        let mut left = (global >> pos) << 1;
        left |= (a >> l) & 1;
        left <<= pos;
        global = left | right;
    }
    global
}

/// Global index of local index `a` in the invariant subspace labelled `s`.
#[inline]
pub fn insert_bits(s: usize, a: usize, active: &ActiveQubits) -> usize {
    insert_bits_at(s, a, active.positions())
}

/// Inverse of [`insert_bits`]: returns `(subspace label, local index)`.
pub fn extract_bits(g: usize, active: &ActiveQubits) -> (usize, usize) {
    extract_bits_at(g, active.positions())
}

pub(crate) fn extract_bits_at(g: usize, positions: &[u32]) -> (usize, usize) {
    let mut s = g;
    let mut a = 0;
    // Remove from the highest position down so lower positions stay valid.
    for (l, &pos) in positions.iter().enumerate().rev() {
        a |= ((s >> pos) & 1) << l;
        let right = s & ((1usize << pos) - 1);
        s = ((s >> (pos + 1)) << pos) | right;
    }
    (s, a)
}

/// Global offsets `insert_bits(0, a, positions)` for every local index `a`.
pub(crate) fn local_offsets(positions: &[u32]) -> Vec<usize> {
    (0..1usize << positions.len())
        .map(|a| insert_bits_at(0, a, positions))
        .collect()
}

/// Element offset of tile `(ti, tj)`, `ti >= tj`, with tile edge `tile_edge`.
#[inline]
pub fn tile_offset(ti: usize, tj: usize, tile_edge: usize) -> usize {
    debug_assert!(ti >= tj, "tile ({ti}, {tj}) is not in the lower triangle");
    (ti * (ti + 1) / 2 + tj) * tile_edge * tile_edge
}

/// Linear index of tile `(ti, tj)`, `ti >= tj`, in the stored tile sequence.
#[inline]
pub(crate) fn tile_index(ti: usize, tj: usize) -> usize {
    ti * (ti + 1) / 2 + tj
}

#[cfg(test)]
mod tests {
    use super::*;

    // Oracle: splice characters into the binary string of `s`.
    fn splice_oracle(s: usize, a: usize, positions: &[u32]) -> usize {
        let mut bits: Vec<char> = format!("{s:b}").chars().rev().collect();
        for (l, &p) in positions.iter().enumerate() {
            let p = p as usize;
            while bits.len() < p {
                bits.push('0');
            }
            let c = if (a >> l) & 1 == 1 { '1' } else { '0' };
            bits.insert(p, c);
        }
        let text: String = bits.iter().rev().collect();
        usize::from_str_radix(&text, 2).unwrap()
    }

    #[test]
    fn insert_examples() {
        let q0 = ActiveQubits::single(0);
        let q1 = ActiveQubits::single(1);
        let q3 = ActiveQubits::single(3);
        let q02 = ActiveQubits::new(&[0, 2]).unwrap();
        assert_eq!(insert_bits(0, 0, &q0), 0);
        assert_eq!(insert_bits(0, 1, &q3), 8);
        assert_eq!(splice_oracle(5, 1, &[1]), 11);
        assert_eq!(insert_bits(5, 1, &q1), 11);
        assert_eq!(splice_oracle(3, 3, &[0, 2]), 15);
        assert_eq!(insert_bits(3, 3, &q02), 15);
    }

    #[test]
    fn insert_matches_splice_oracle() {
        for positions in [&[0u32][..], &[2], &[1, 4], &[0, 3, 5], &[2, 3, 4]] {
            let k = positions.len();
            for s in 0..1usize << (7 - k) {
                for a in 0..1usize << k {
                    assert_eq!(
                        insert_bits_at(s, a, positions),
                        splice_oracle(s, a, positions),
                        "s={s} a={a} A={positions:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn extract_examples() {
        assert_eq!(extract_bits(11, &ActiveQubits::single(1)), (5, 1));
        assert_eq!(extract_bits(0, &ActiveQubits::new(&[0, 2]).unwrap()), (0, 0));
        let a = ActiveQubits::new(&[1, 4]).unwrap();
        for g in 0..1usize << 6 {
            let (s, l) = extract_bits(g, &a);
            assert_eq!(insert_bits(s, l, &a), g);
        }
    }

    #[test]
    fn bijective_for_all_small_sets() {
        for n in 1..=12usize {
            for k in 1..=3.min(n) {
                for set in combinations(n, k) {
                    let active = ActiveQubits::new(&set).unwrap();
                    let mut seen = vec![false; 1 << n];
                    for s in 0..1usize << (n - k) {
                        for a in 0..1usize << k {
                            let g = insert_bits(s, a, &active);
                            assert!(g < 1 << n);
                            assert!(!seen[g], "duplicate {g} for {set:?}");
                            seen[g] = true;
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn block_order_preserved() {
        for n in 1..=10usize {
            for k in 1..=3.min(n) {
                for set in combinations(n, k) {
                    let active = ActiveQubits::new(&set).unwrap();
                    for s in (0..1usize << (n - k)).step_by(7) {
                        let globals: Vec<_> =
                            (0..1 << k).map(|a| insert_bits(s, a, &active)).collect();
                        assert!(globals.windows(2).all(|w| w[0] < w[1]));
                    }
                }
            }
        }
    }

    #[test]
    fn tile_offsets() {
        assert_eq!(tile_offset(0, 0, 32), 0);
        assert_eq!(tile_offset(1, 0, 32), 1024);
        assert_eq!(tile_offset(2, 1, 32), 4 * 32 * 32);
    }

    #[test]
    fn rejects_bad_sets() {
        assert!(ActiveQubits::new(&[]).is_err());
        assert!(ActiveQubits::new(&[2, 1]).is_err());
        assert!(ActiveQubits::new(&[1, 1]).is_err());
        assert!(ActiveQubits::new(&[0, 1, 2, 3]).is_err());
        assert!(ActiveQubits::within(&[0, 5], 5).is_err());
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    proptest::proptest! {
        #[test]
        fn extract_inverts_insert(s in 0usize..1 << 20, a in 0usize..8, p0 in 0u32..8, d1 in 1u32..8, d2 in 1u32..8) {
            let positions = [p0, p0 + d1, p0 + d1 + d2];
            let g = insert_bits_at(s, a, &positions);
            proptest::prop_assert_eq!(extract_bits_at(g, &positions), (s, a));
        }
    }
}
