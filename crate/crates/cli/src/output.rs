use std::io::Write;
use std::path::Path;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

/// CSV with an explicit header, for rows whose width depends on the input.
pub fn csv_table(header: &[String], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

pub fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Writes the data to `out`, or to stdout when no path is given; the
/// one-line summary then goes to stderr so stdout stays machine-readable.
pub fn emit(out: Option<&Path>, data: &[u8], summary: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, data)?;
            println!("{summary}");
        }
        None => {
            std::io::stdout().write_all(data)?;
            eprintln!("{summary}");
        }
    }
    Ok(())
}

/// `c0 c1 …` for a coordinate vector in one CSV cell.
pub fn join(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(" ")
}
