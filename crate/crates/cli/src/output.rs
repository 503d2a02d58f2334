//! CSV and JSON emission with atomic file replacement.

use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;

use crate::cli::Format;

/// First line of every CSV file.
pub const SCHEMA_LINE: &str = "# dk-green schema v1";
/// Schema tag embedded in JSON documents.
pub const SCHEMA: &str = "dk-green schema v1";

/// Rows as CSV (header comment, column header, one line per row).
pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    writeln!(buf, "{SCHEMA_LINE}")?;
    let mut w = csv::Writer::from_writer(buf);
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().context("flushing CSV")
}

/// Rows as a JSON document `{schema, command, rows}`.
pub fn json_rows_bytes<T: Serialize>(command: &str, rows: &[T]) -> Result<Vec<u8>> {
    json_bytes(&serde_json::json!({
        "schema": SCHEMA,
        "command": command,
        "rows": rows,
    }))
}

pub fn json_bytes<T: Serialize>(doc: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(doc)?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn rows_bytes<T: Serialize>(command: &str, rows: &[T], format: Format) -> Result<Vec<u8>> {
    match format {
        Format::Csv => csv_bytes(rows),
        Format::Json => json_rows_bytes(command, rows),
    }
}

/// Write to `dest` through a temporary file in the same directory followed
/// by a rename, or to standard output when `dest` is `None`.
pub fn write_atomic(dest: Option<&Path>, bytes: &[u8]) -> Result<()> {
    let Some(path) = dest else {
        let mut out = std::io::stdout().lock();
        out.write_all(bytes)?;
        out.flush()?;
        return Ok(());
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating temporary file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("renaming onto {}", path.display()))?;
    Ok(())
}
