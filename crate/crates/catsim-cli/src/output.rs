//! CSV and JSON writers.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use catsim::experiment::{Summary, Table};

pub fn write_table(path: &Path, table: &Table) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(&table.columns)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| format!("{v:e}")))?;
    }
    w.flush()
}

pub fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> std::io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()
}

pub fn write_outputs(dir: &Path, stem: &str, table: &Table, summary: &Summary) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    write_table(&dir.join(format!("{stem}.csv")), table)?;
    write_json(&dir.join(format!("{stem}.json")), summary)
}
