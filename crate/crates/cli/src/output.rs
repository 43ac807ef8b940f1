use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

pub const SCHEMA_VERSION: &str = "1";

#[derive(Serialize)]
struct Envelope<'a, R: Serialize, S: Serialize> {
    schema_version: &'static str,
    records: &'a [R],
    summary: &'a S,
}

/// Writes `{"schema_version", "records", "summary"}` to stdout.
pub fn write_json<R: Serialize, S: Serialize>(records: &[R], summary: &S) -> io::Result<()> {
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        records,
        summary,
    };
    write_json_value(&envelope)
}

pub fn write_json_value<T: Serialize>(value: &T) -> io::Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()
}

/// Writes one CSV row per record, with the header taken from the field names.
pub fn write_csv<R: Serialize>(records: &[R], header: &[&str]) -> io::Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(io::stdout().lock());
    w.write_record(header)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()
}
