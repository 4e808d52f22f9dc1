use hermtile::oracle::{dense_kraus_apply, relative_frobenius_error};
use hermtile::{apply, apply_generic, library, random_hermitian, random_kraus_channel, ChannelSpec, Format};

/// Relative Frobenius tolerance of the sweep.
pub const SWEEP_TOLERANCE: f64 = 1e-12;

pub const SWEEP_SEEDS: [u64; 3] = [11, 23, 37];

const LAYOUTS: [(Format, u32); 5] = [
    (Format::Dense, 0),
    (Format::Packed, 0),
    (Format::Tiled, 0),
    (Format::Tiled, 2),
    (Format::Tiled, 5),
];

/// Worst result over all target tuples and seeds for one
/// `(n, layout, channel)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCase {
    pub n: usize,
    pub format: Format,
    pub tile_exp: u32,
    pub channel: String,
    pub applications: usize,
    pub max_error: f64,
}

impl SweepCase {
    pub fn passed(&self) -> bool {
        self.max_error <= SWEEP_TOLERANCE
    }
}

/// Library gates and channels, then seeded random channels of locality 1, 2, 3.
pub fn sweep_channels() -> Vec<ChannelSpec> {
    let mut channels = library();
    for (k, rank, seed) in [(1, 4, 101), (2, 6, 102), (3, 4, 103)] {
        let ks = random_kraus_channel(k, rank, seed).expect("valid random channel");
        channels.push(ChannelSpec::generic(format!("random-k{k}"), ks));
    }
    channels
}

/// Compares native and generic kernel results against the dense Kraus sum
/// for every ordered target tuple, layout and seed, `n = 1..=max_n`.
pub fn oracle_sweep(max_n: usize, mut on_case: impl FnMut(&SweepCase)) -> hermtile::Result<Vec<SweepCase>> {
    let channels = sweep_channels();
    let mut cases = Vec::new();
    for n in 1..=max_n {
        for channel in &channels {
            let k = channel.locality();
            if k > n {
                continue;
            }
            let mut row: Vec<SweepCase> = LAYOUTS
                .iter()
                .map(|&(format, tile_exp)| SweepCase {
                    n,
                    format,
                    tile_exp,
                    channel: channel.name().to_string(),
                    applications: 0,
                    max_error: 0.0,
                })
                .collect();
            for &seed in &SWEEP_SEEDS {
                let h0 = random_hermitian(n, seed, Format::Dense, 0)?;
                let dense0 = h0.to_dense()?;
                for targets in ordered_targets(n, k) {
                    let (bound, active) = channel.bind(&targets, n)?;
                    let reference = dense_kraus_apply(&dense0, bound.kraus(), &active)?;
                    for (case, &(format, m)) in row.iter_mut().zip(&LAYOUTS) {
                        for generic in [false, true] {
                            let mut h = h0.convert(format, m)?;
                            if generic {
                                apply_generic(&mut h, channel, &targets)?;
                            } else {
                                apply(&mut h, channel, &targets)?;
                            }
                            let err = relative_frobenius_error(h.storage(), &reference);
                            case.max_error = case.max_error.max(err);
                            case.applications += 1;
                        }
                    }
                }
            }
            for case in row {
                on_case(&case);
                cases.push(case);
            }
        }
    }
    Ok(cases)
}

/// All ordered tuples of `k` distinct qubits below `n`.
fn ordered_targets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn extend(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == k {
            out.push(prefix.clone());
            return;
        }
        for q in 0..n {
            if !prefix.contains(&q) {
                prefix.push(q);
                extend(n, k, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(n, k, &mut Vec::with_capacity(k), &mut out);
    out
}
