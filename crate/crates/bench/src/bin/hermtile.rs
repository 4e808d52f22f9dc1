use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hermtile_bench::{oracle_sweep, write_csv, BenchConfig, BenchFormat, LayerPolicy, SWEEP_TOLERANCE};

#[derive(Parser)]
#[command(name = "hermtile", version, about = "Benchmark and verify hermitian channel kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time one operation over a range of register sizes and write CSV.
    Bench {
        /// x, y, z, s, t, rz, h, cnot, swap, toffoli or depolarising.
        #[arg(long)]
        op: String,
        /// Depolarising probability.
        #[arg(long, default_value_t = 0.1)]
        p: f64,
        /// Rotation angle for rz.
        #[arg(long, default_value_t = 0.7)]
        theta: f64,
        #[arg(long)]
        min_qubits: usize,
        #[arg(long)]
        max_qubits: usize,
        /// Comma-separated subset of tiled, packed, dense, naive.
        #[arg(long, value_delimiter = ',', default_value = "tiled,packed,dense")]
        formats: Vec<BenchFormat>,
        #[arg(long, default_value_t = 5)]
        tile_exp: u32,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        /// `auto` or a fixed layer count.
        #[arg(long, default_value = "auto")]
        layers: LayerPolicy,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        threads: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare every kernel against the dense Kraus oracle.
    Verify {
        #[arg(long, default_value_t = 8)]
        max_qubits: usize,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    match cli.command {
        Command::Bench {
            op,
            p,
            theta,
            min_qubits,
            max_qubits,
            formats,
            tile_exp,
            reps,
            layers,
            threads,
            seed,
            out,
        } => {
            let cfg = BenchConfig {
                operation: op,
                p,
                theta,
                min_qubits,
                max_qubits,
                formats,
                tile_exp,
                reps,
                layers,
                threads,
                seed,
            };
            let records = hermtile_bench::run_benchmark_with(&cfg, |r, _| {
                eprintln!(
                    "{:>12} n={:<2} {:<6} {:.3e} s ± {:.1e} ({} layers)",
                    r.operation,
                    r.n,
                    r.format.name(),
                    r.mean_seconds,
                    r.ci95_seconds,
                    r.layers
                );
            })?;
            write_csv(&records, BufWriter::new(File::create(&out)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { max_qubits } => {
            let mut failed = 0usize;
            let cases = oracle_sweep(max_qubits, |c| {
                let status = if c.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{status} n={} format={} m={} channel={} applications={} max_rel_err={:.3e}",
                    c.n,
                    c.format,
                    c.tile_exp,
                    c.channel,
                    c.applications,
                    c.max_error
                );
                if !c.passed() {
                    failed += 1;
                }
            })?;
            println!("{} cases, {failed} failed (tolerance {SWEEP_TOLERANCE:e})", cases.len());
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
    }
}
