use std::io::{Read, Write};

use crate::{BenchRecord, Result};

pub const CSV_HEADER: [&str; 8] = [
    "operation",
    "n",
    "format",
    "mean_seconds",
    "ci95_seconds",
    "bandwidth_bytes_per_s",
    "layers",
    "reps",
];

/// Header line, then one row per record. The header is written even when
/// `records` is empty.
pub fn write_csv(records: &[BenchRecord], out: impl Write) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv(input: impl Read) -> Result<Vec<BenchRecord>> {
    let mut r = csv::Reader::from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(crate::BenchError::InvalidConfig(format!("unexpected header {header:?}")));
    }
    Ok(r.deserialize().collect::<std::result::Result<Vec<_>, _>>()?)
}
