// Copyright 2026 the Spiralwind Authors
// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON files.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use serde_json::Value;
use spiralwind_core::profiles::DecayProfile;
use spiralwind_core::Point;

use crate::error::{CliError, CliResult};

/// Shortest decimal form that parses back to the same `f64`.
pub fn real(x: f64) -> String {
    format!("{x:?}")
}

fn open_csv(path: &Path) -> CliResult<csv::Reader<File>> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file))
}

fn two_columns(path: &Path, names: [&str; 2]) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let fmt = |message: String| CliError::Format { path: path.into(), message };
    let mut rdr = open_csv(path)?;
    let headers = rdr.headers().map_err(|e| fmt(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| fmt(format!("missing column '{name}'")))
    };
    let (i, j) = (col(names[0])?, col(names[1])?);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| fmt(e.to_string()))?;
        let parse = |k: usize| {
            rec.get(k)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| fmt(format!("row {}: bad value in column {}", row + 2, k + 1)))
        };
        a.push(parse(i)?);
        b.push(parse(j)?);
    }
    Ok((a, b))
}

/// Profile table with columns `t,phi`.
pub fn read_table(path: &Path) -> CliResult<DecayProfile> {
    let (t, phi) = two_columns(path, ["t", "phi"])?;
    Ok(DecayProfile::table(t, phi)?)
}

/// Point cloud with columns `x,y`.
pub fn read_points(path: &Path) -> CliResult<Vec<Point>> {
    let (x, y) = two_columns(path, ["x", "y"])?;
    Ok(x.into_iter().zip(y).map(|(x, y)| Point::new(x, y)).collect())
}

pub fn write_csv<I>(path: &Path, header: &[&str], rows: I) -> CliResult<()>
where
    I: IntoIterator<Item = Vec<String>>,
{
    let file = File::create(path).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(file);
    let to_io = |e: csv::Error| CliError::io(path, e.into());
    w.write_record(header).map_err(to_io)?;
    for row in rows {
        w.write_record(&row).map_err(to_io)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> CliResult<()> {
    let mut f = File::create(path).map_err(|e| CliError::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))
}

pub fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout when no path is given.
pub fn emit_json(path: Option<&Path>, value: &Value) -> CliResult<()> {
    let text = json_text(value);
    match path {
        Some(p) => write_text(p, &text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::io("<stdout>", e))
        }
    }
}
