use std::str::FromStr;
use std::time::{Duration, Instant};

use hermtile::oracle::{embed_kraus, kraus_sum_apply};
use hermtile::{
    apply_bound, depolarising, footprint_bytes, native_gate, random_hermitian, with_threads, ActiveQubits,
    ChannelSpec, Format, MatrixHandle, SquareMatrix,
};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::{BenchError, Result};

/// Lower bound on one timed repetition under [`LayerPolicy::Auto`].
pub const MIN_TIMED_INTERVAL: Duration = Duration::from_millis(50);

/// Upper bound on auto-tuned layers, reached only by sub-microsecond layers.
pub const MAX_AUTO_LAYERS: usize = 1 << 20;

/// Contracting channels restart from the seeded matrix after this many
/// layers, outside the timed region, so entries never decay into subnormals.
pub const REFRESH_LAYERS: usize = 32;

/// Storage under test. `Naive` is the explicit dense Kraus sum of the
/// reference oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchFormat {
    Tiled,
    Packed,
    Dense,
    Naive,
}

impl BenchFormat {
    pub fn name(self) -> &'static str {
        match self {
            BenchFormat::Tiled => "tiled",
            BenchFormat::Packed => "packed",
            BenchFormat::Dense => "dense",
            BenchFormat::Naive => "naive",
        }
    }

    fn storage(self) -> Format {
        match self {
            BenchFormat::Tiled => Format::Tiled,
            BenchFormat::Packed => Format::Packed,
            BenchFormat::Dense | BenchFormat::Naive => Format::Dense,
        }
    }
}

impl FromStr for BenchFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tiled" => Ok(BenchFormat::Tiled),
            "packed" => Ok(BenchFormat::Packed),
            "dense" => Ok(BenchFormat::Dense),
            "naive" => Ok(BenchFormat::Naive),
            _ => Err(BenchError::UnknownFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerPolicy {
    /// Enough layers that one repetition lasts [`MIN_TIMED_INTERVAL`].
    Auto,
    Fixed(usize),
}

impl FromStr for LayerPolicy {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(LayerPolicy::Auto);
        }
        match s.parse::<usize>() {
            Ok(l) if l > 0 => Ok(LayerPolicy::Fixed(l)),
            _ => Err(BenchError::InvalidConfig(format!("layers must be `auto` or a positive integer, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub operation: String,
    /// Depolarising probability.
    pub p: f64,
    /// Rotation angle for `rz`.
    pub theta: f64,
    pub min_qubits: usize,
    pub max_qubits: usize,
    pub formats: Vec<BenchFormat>,
    pub tile_exp: u32,
    pub reps: usize,
    pub layers: LayerPolicy,
    /// Worker threads, 0 for the rayon default.
    pub threads: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            operation: "h".into(),
            p: 0.1,
            theta: 0.7,
            min_qubits: 1,
            max_qubits: 10,
            formats: vec![BenchFormat::Tiled, BenchFormat::Packed, BenchFormat::Dense],
            tile_exp: 5,
            reps: 10,
            layers: LayerPolicy::Auto,
            threads: 0,
            seed: 0,
        }
    }
}

impl BenchConfig {
    fn validate(&self) -> Result<()> {
        if self.min_qubits == 0 || self.min_qubits > self.max_qubits {
            return Err(BenchError::InvalidConfig(format!(
                "qubit range [{}, {}] is empty or starts at zero",
                self.min_qubits, self.max_qubits
            )));
        }
        if self.reps == 0 {
            return Err(BenchError::InvalidConfig("reps must be at least 1".into()));
        }
        if self.formats.is_empty() {
            return Err(BenchError::InvalidConfig("no formats selected".into()));
        }
        Ok(())
    }
}

/// One `(operation, n, format)` measurement. Times are per single channel
/// application.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRecord {
    pub operation: String,
    pub n: usize,
    pub format: BenchFormat,
    pub mean_seconds: f64,
    pub ci95_seconds: f64,
    pub bandwidth_bytes_per_s: f64,
    pub layers: usize,
    pub reps: usize,
}

/// Channel for a CLI operation name.
pub fn resolve_operation(op: &str, p: f64, theta: f64) -> Result<ChannelSpec> {
    let lower = op.to_ascii_lowercase();
    let spec = match lower.as_str() {
        "depolarising" | "depolarizing" => depolarising(p)?,
        "rz" => native_gate("rz", &[theta])?,
        "x" | "y" | "z" | "s" | "t" | "h" | "cnot" | "swap" | "toffoli" => native_gate(&lower, &[])?,
        _ => return Err(BenchError::UnknownOperation(op.to_string())),
    };
    Ok(spec)
}

/// The `n` placements of one layer: cyclic windows `(a, a+1, ..., a+k-1) mod n`.
pub fn placements(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0..n).map(|a| (0..k).map(|l| (a + l) % n).collect()).collect()
}

pub fn run_benchmark(cfg: &BenchConfig) -> Result<Vec<BenchRecord>> {
    run_benchmark_with(cfg, |_, _| {})
}

/// Runs the protocol and hands every evolved matrix to `inspect` together
/// with its record.
pub fn run_benchmark_with(
    cfg: &BenchConfig,
    mut inspect: impl FnMut(&BenchRecord, &MatrixHandle) + Send,
) -> Result<Vec<BenchRecord>> {
    cfg.validate()?;
    let channel = resolve_operation(&cfg.operation, cfg.p, cfg.theta)?;
    let k = channel.locality();
    if cfg.min_qubits < k {
        return Err(BenchError::InvalidConfig(format!(
            "`{}` acts on {k} qubits, min-qubits is {}",
            cfg.operation, cfg.min_qubits
        )));
    }
    with_threads(cfg.threads, || {
        let mut records = Vec::new();
        for n in cfg.min_qubits..=cfg.max_qubits {
            for &format in &cfg.formats {
                let (record, matrix) = measure(cfg, &channel, n, format)?;
                inspect(&record, &matrix);
                records.push(record);
            }
        }
        Ok(records)
    })
}

/// A channel bound to every placement of a layer, plus the embedded Kraus
/// operators when the naive baseline needs them.
struct Layer {
    bound: Vec<(ChannelSpec, ActiveQubits)>,
    embedded: Vec<Vec<SquareMatrix>>,
}

impl Layer {
    fn new(channel: &ChannelSpec, n: usize, format: BenchFormat) -> Result<Self> {
        let mut bound = Vec::with_capacity(n);
        let mut embedded = Vec::new();
        for targets in placements(n, channel.locality()) {
            let (spec, active) = channel.bind(&targets, n)?;
            if format == BenchFormat::Naive {
                let ops = spec
                    .kraus()
                    .operators()
                    .iter()
                    .map(|l| embed_kraus(l, &active, n))
                    .collect::<hermtile::Result<Vec<_>>>()?;
                embedded.push(ops);
            }
            bound.push((spec, active));
        }
        Ok(Self { bound, embedded })
    }

    fn run(&self, h: &mut MatrixHandle) -> Result<()> {
        if self.embedded.is_empty() {
            for (spec, active) in &self.bound {
                apply_bound(h, spec.clone(), *active, true);
            }
        } else {
            for ops in &self.embedded {
                let dense = match h {
                    MatrixHandle::Dense(d) => d,
                    _ => unreachable!("naive baseline runs on dense storage"),
                };
                *dense = kraus_sum_apply(dense, ops)?;
            }
        }
        Ok(())
    }
}

/// The evolving matrix of one `(n, format)` measurement.
struct Workload {
    layer: Layer,
    h: MatrixHandle,
    /// Seeded start state, kept only for contracting channels.
    pristine: Option<MatrixHandle>,
    since_refresh: usize,
}

impl Workload {
    /// Wall time of `layers` layers, excluding refreshes.
    fn timed(&mut self, layers: usize) -> Result<Duration> {
        let mut elapsed = Duration::ZERO;
        let mut remaining = layers;
        while remaining > 0 {
            let batch = match self.pristine {
                Some(_) => remaining.min(REFRESH_LAYERS - self.since_refresh),
                None => remaining,
            };
            let start = Instant::now();
            for _ in 0..batch {
                self.layer.run(&mut self.h)?;
            }
            elapsed += start.elapsed();
            remaining -= batch;
            self.since_refresh += batch;
            if let Some(p) = &self.pristine {
                if self.since_refresh == REFRESH_LAYERS {
                    self.h.clone_from(p);
                    self.since_refresh = 0;
                }
            }
        }
        Ok(elapsed)
    }

    /// Times batches of 1, 2, 4, ... layers until a batch lasts a tenth of
    /// the target interval, then extrapolates.
    fn calibrate(&mut self) -> Result<usize> {
        let mut batch = 1usize;
        loop {
            let elapsed = self.timed(batch)?;
            if elapsed >= MIN_TIMED_INTERVAL / 10 || batch >= MAX_AUTO_LAYERS {
                return Ok(auto_layers(elapsed / batch as u32));
            }
            batch *= 2;
        }
    }
}

fn measure(cfg: &BenchConfig, channel: &ChannelSpec, n: usize, format: BenchFormat) -> Result<(BenchRecord, MatrixHandle)> {
    let m = if format == BenchFormat::Tiled { cfg.tile_exp } else { 0 };
    let h = random_hermitian(n, cfg.seed, format.storage(), m)?;
    let mut work = Workload {
        layer: Layer::new(channel, n, format)?,
        pristine: (channel.kraus().rank() > 1).then(|| h.clone()),
        h,
        since_refresh: 0,
    };

    work.timed(1)?;
    let mut layers = match cfg.layers {
        LayerPolicy::Fixed(l) => l,
        LayerPolicy::Auto => work.calibrate()?,
    };

    let mut samples = Vec::with_capacity(cfg.reps);
    while samples.len() < cfg.reps {
        let elapsed = work.timed(layers)?;
        if cfg.layers == LayerPolicy::Auto && elapsed < MIN_TIMED_INTERVAL && layers < MAX_AUTO_LAYERS {
            // Calibration undershot: grow L and restart the repetitions.
            let scale = MIN_TIMED_INTERVAL.as_secs_f64() / elapsed.as_secs_f64().max(1e-9);
            layers = ((layers as f64 * scale * 1.1).ceil() as usize).min(MAX_AUTO_LAYERS);
            samples.clear();
            continue;
        }
        samples.push(elapsed.as_secs_f64() / (layers * n) as f64);
    }

    let (mean, ci95) = mean_ci95(&samples);
    let bytes = footprint_bytes(n, m, format.storage()) as f64;
    let record = BenchRecord {
        operation: cfg.operation.to_ascii_lowercase(),
        n,
        format,
        mean_seconds: mean,
        ci95_seconds: ci95,
        bandwidth_bytes_per_s: if mean > 0.0 { bytes / mean } else { 0.0 },
        layers,
        reps: cfg.reps,
    };
    Ok((record, work.h))
}

/// Layers needed for one repetition to reach [`MIN_TIMED_INTERVAL`].
fn auto_layers(per_layer: Duration) -> usize {
    if per_layer >= MIN_TIMED_INTERVAL {
        return 1;
    }
    let per_layer = per_layer.as_secs_f64().max(1e-9);
    ((MIN_TIMED_INTERVAL.as_secs_f64() / per_layer).ceil() as usize).clamp(1, MAX_AUTO_LAYERS)
}

/// Sample mean and Student-t 95% half-width with `R - 1` degrees of freedom.
pub(crate) fn mean_ci95(samples: &[f64]) -> (f64, f64) {
    let r = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / r;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (r - 1.0);
    let t = StudentsT::new(0.0, 1.0, r - 1.0)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.975);
    (mean, t * (var / r).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn student_t_half_width() {
        // t_{0.975, 9} = 2.262157...
        let samples = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 9.0, 10.0];
        let (mean, ci) = mean_ci95(&samples);
        assert_eq!(mean, 5.5);
        let sd = (82.5f64 / 9.0).sqrt();
        assert!((ci - 2.262_157_163 * sd / 10f64.sqrt()).abs() < 1e-8);
        assert_eq!(mean_ci95(&[0.25]), (0.25, 0.0));
    }

    #[test]
    fn auto_layers_reach_the_floor() {
        assert_eq!(auto_layers(Duration::from_millis(80)), 1);
        assert_eq!(auto_layers(Duration::from_millis(50)), 1);
        assert_eq!(auto_layers(Duration::from_millis(10)), 5);
        assert_eq!(auto_layers(Duration::from_micros(3)), 16_667);
        assert_eq!(auto_layers(Duration::ZERO), MAX_AUTO_LAYERS);
    }

    #[test]
    fn placements_are_cyclic_windows() {
        assert_eq!(placements(3, 1), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(placements(3, 2), vec![vec![0, 1], vec![1, 2], vec![2, 0]]);
        assert_eq!(placements(3, 3)[2], vec![2, 0, 1]);
    }

    #[test]
    fn operations_resolve() {
        for op in ["x", "y", "z", "s", "t", "rz", "h", "cnot", "swap", "toffoli", "depolarising", "CNOT"] {
            resolve_operation(op, 0.1, 0.7).unwrap();
        }
        assert!(matches!(resolve_operation("cz", 0.1, 0.7), Err(BenchError::UnknownOperation(_))));
        assert!(resolve_operation("depolarising", 1.5, 0.0).is_err());
    }

    #[test]
    fn parse_policies_and_formats() {
        assert_eq!("auto".parse::<LayerPolicy>().unwrap(), LayerPolicy::Auto);
        assert_eq!("7".parse::<LayerPolicy>().unwrap(), LayerPolicy::Fixed(7));
        assert!("0".parse::<LayerPolicy>().is_err());
        assert_eq!(" Tiled".parse::<BenchFormat>().unwrap(), BenchFormat::Tiled);
        assert!("csr".parse::<BenchFormat>().is_err());
    }
}
