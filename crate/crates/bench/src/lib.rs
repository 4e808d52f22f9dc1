//! Benchmark protocol, CSV reporting and the oracle verification sweep for
//! `hermtile`.

mod protocol;
mod report;
mod verify;

pub use protocol::{
    placements, resolve_operation, run_benchmark, run_benchmark_with, BenchConfig, BenchFormat, BenchRecord,
    LayerPolicy, MAX_AUTO_LAYERS, MIN_TIMED_INTERVAL, REFRESH_LAYERS,
};
pub use report::{read_csv, write_csv, CSV_HEADER};
pub use verify::{oracle_sweep, sweep_channels, SweepCase, SWEEP_SEEDS, SWEEP_TOLERANCE};

/// Errors surfaced by the harness.
#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error(transparent)]
    Core(#[from] hermtile::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("unknown operation `{0}`")]
    UnknownOperation(String),
    #[error("unknown format `{0}` (expected tiled, packed, dense or naive)")]
    UnknownFormat(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, BenchError>;
