//! CSV tables with a config-hash comment line and a JSON sidecar.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::Result;

/// Rows produced by one subcommand, plus a free-form summary for the
/// sidecar.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: serde_json::Value,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            summary: serde_json::Value::Null,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Hex SHA-256 of the config's canonical JSON.
pub fn config_hash<C: Serialize>(config: &C) -> Result<String> {
    let json = serde_json::to_vec(config)?;
    Ok(hex::encode(Sha256::digest(json)))
}

fn write_csv<W: Write>(mut w: W, hash: &str, table: &Table) -> Result<()> {
    writeln!(w, "# config_sha256={hash}")?;
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(&table.header)?;
    for row in &table.rows {
        csv.write_record(row)?;
    }
    csv.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct Sidecar<'a, C> {
    config_sha256: &'a str,
    config: &'a C,
    summary: &'a serde_json::Value,
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("json")
}

/// Writes the table to `out` (CSV plus sidecar) or to stdout (CSV only).
/// `hash` identifies the experiment; the sidecar stores the full `config`.
pub fn emit<C: Serialize>(config: &C, hash: &str, out: Option<&Path>, table: &Table) -> Result<()> {
    match out {
        None => write_csv(io::stdout().lock(), hash, table),
        Some(path) => {
            write_csv(File::create(path)?, hash, table)?;
            let sidecar = Sidecar {
                config_sha256: hash,
                config,
                summary: &table.summary,
            };
            let mut f = File::create(sidecar_path(path))?;
            serde_json::to_writer_pretty(&mut f, &sidecar)?;
            writeln!(f)?;
            Ok(())
        }
    }
}
