//! CSV tables with a header row and full double precision.
//!
//! Missing values (NaN) are written as empty fields.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        String::new()
    } else {
        // 17 significant digits round-trip any f64
        format!("{v:.16e}")
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

/// Writes next to `path` and renames into place, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp: PathBuf = dir.join(format!(".{name}.tmp{}", std::process::id()));
    let mut file = fs::File::create(&tmp).map_err(io_err(&tmp))?;
    file.write_all(bytes).map_err(io_err(&tmp))?;
    file.sync_all().map_err(io_err(&tmp))?;
    fs::rename(&tmp, path).map_err(io_err(path))
}

pub fn table_to_string(headers: &[&str], rows: &[Vec<f64>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(headers)?;
    for row in rows {
        if row.len() != headers.len() {
            return Err(Error::LengthMismatch { left: row.len(), right: headers.len() });
        }
        w.write_record(row.iter().map(|&v| format_value(v)))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_table(path: &Path, headers: &[&str], rows: &[Vec<f64>]) -> Result<()> {
    write_atomic(path, table_to_string(headers, rows)?.as_bytes())
}

pub fn parse_table(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let headers = r.headers()?.iter().map(str::to_owned).collect();
    let mut rows = vec![];
    for rec in r.records() {
        let rec = rec?;
        let row = rec
            .iter()
            .map(|s| {
                if s.is_empty() {
                    Ok(f64::NAN)
                } else {
                    s.parse::<f64>().map_err(|e| Error::config(format!("bad number `{s}`: {e}")))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    Ok((headers, rows))
}

pub fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    parse_table(&text)
}

/// Column `name` of a parsed table.
pub fn column(headers: &[String], rows: &[Vec<f64>], name: &str) -> Result<Vec<f64>> {
    let k = headers.iter().position(|h| h == name).ok_or_else(|| Error::config(format!("no column `{name}`")))?;
    Ok(rows.iter().map(|r| r[k]).collect())
}
