//! CSV and JSON files. Floats are written with `{:?}`, the shortest string
//! that parses back to the same `f64`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use fif_core::analysis::BoxCountTable;
use fif_core::fixed_point::SampledVectorFunction;

use crate::error::CliError;

pub const SAMPLES_CSV: &str = "samples.csv";

pub fn fmt(x: f64) -> String {
    format!("{x:?}")
}

fn writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>, CliError> {
    let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(csv::Writer::from_writer(BufWriter::new(file)))
}

/// Writes a header and rows of floats.
pub fn write_table<const K: usize>(path: &Path, header: [&str; K], rows: impl IntoIterator<Item = [f64; K]>) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row.map(fmt))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_samples(path: &Path, f: &SampledVectorFunction) -> Result<(), CliError> {
    let rows = f.grid().points().iter().zip(f.values()).map(|(&t, v)| [t, v[0], v[1]]);
    write_table(path, ["t", "f1", "f2"], rows)
}

/// Iteration number and sup-norm change.
pub fn write_trace(path: &Path, changes: &[f64]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(["iteration", "change"])?;
    for (k, c) in changes.iter().enumerate() {
        w.write_record([(k + 1).to_string(), fmt(*c)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_cloud(path: &Path, points: &[[f64; 3]]) -> Result<(), CliError> {
    write_table(path, ["t", "v", "w"], points.iter().copied())
}

/// One row per eps; one count column per named table.
pub fn write_boxcount(path: &Path, tables: &[(&str, &BoxCountTable)]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    let mut header = vec!["eps".to_string()];
    header.extend(tables.iter().map(|(name, _)| name.to_string()));
    w.write_record(&header)?;
    let rows = tables.first().map_or(0, |(_, t)| t.rows.len());
    for i in 0..rows {
        let mut rec = vec![fmt(tables[0].1.rows[i].eps)];
        rec.extend(tables.iter().map(|(_, t)| t.rows[i].count.to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Columns `t`, `f1`, `f2` of a samples file.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub t: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
}

pub fn read_samples(path: &Path) -> Result<Samples, CliError> {
    if !path.exists() {
        return Err(CliError::MissingInput(format!(
            "{} not found; run `fif solve` first",
            path.display()
        )));
    }
    let mut r = csv::Reader::from_path(path)?;
    let headers = r.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["t", "f1", "f2"] {
        return Err(CliError::Io(format!("{}: expected header t,f1,f2", path.display())));
    }
    let mut out = Samples {
        t: Vec::new(),
        f1: Vec::new(),
        f2: Vec::new(),
    };
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let parse = |i: usize| -> Result<f64, CliError> {
            rec[i]
                .parse()
                .map_err(|e| CliError::Io(format!("{} row {}: {e}", path.display(), line + 2)))
        };
        out.t.push(parse(0)?);
        out.f1.push(parse(1)?);
        out.f2.push(parse(2)?);
    }
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let file = File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
