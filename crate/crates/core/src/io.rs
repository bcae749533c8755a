//! Output plumbing: atomic JSON writes and simple CSV tables.
//!
//! Floats are written with Rust's shortest round-trip formatting so that CSV
//! re-ingestion reproduces the in-memory values exactly.

use crate::Result;
use serde::Serialize;
use std::fs;
use std::io::Write;
use std::path::Path;

/// Write JSON via a temp file + rename so interrupted runs never leave a
/// partial file behind.
pub fn write_json_atomic<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp.json");
    let data = serde_json::to_vec_pretty(value)?;
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&data)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Column-oriented numeric table.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|s| s.to_string()).collect(),
            columns: headers.iter().map(|_| Vec::new()).collect(),
        }
    }

    pub fn push_row(&mut self, row: &[f64]) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        for (col, &v) in self.columns.iter_mut().zip(row) {
            col.push(v);
        }
    }

    pub fn n_rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.len())
    }

    pub fn column(&self, name: &str) -> Option<&Vec<f64>> {
        self.headers
            .iter()
            .position(|h| h == name)
            .map(|i| &self.columns[i])
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for r in 0..self.n_rows() {
            let row: Vec<String> = self.columns.iter().map(|c| format!("{}", c[r])).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Table> {
        let mut lines = text.lines();
        let headers: Vec<String> = lines
            .next()
            .ok_or_else(|| crate::LabError::Domain("empty csv".into()))?
            .split(',')
            .map(|s| s.to_string())
            .collect();
        let mut columns = vec![Vec::new(); headers.len()];
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            for (i, field) in line.split(',').enumerate() {
                let v: f64 = field.parse().map_err(|_| {
                    crate::LabError::Domain(format!("bad csv field {field:?}"))
                })?;
                columns[i].push(v);
            }
        }
        Ok(Table {
            headers,
            columns,
        })
    }

    /// Atomic write with the temp-rename discipline.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir)?;
        }
        let tmp = path.with_extension("tmp.csv");
        fs::write(&tmp, self.to_csv())?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}
