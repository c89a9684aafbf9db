//! Columnar report tables: TSV for reading, JSON for machines.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A named table of pre-formatted cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.to_string(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    /// Appends a row; panics if the width differs from the header.
    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch in table {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = self.columns.join("\t");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn parse_tsv(name: &str, text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(Error::Empty("table header"))?;
        let columns: Vec<String> = header.split('\t').map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let row: Vec<String> = line.split('\t').map(str::to_string).collect();
            if row.len() != columns.len() {
                return Err(Error::Parse { line: i + 2, msg: format!("expected {} cells, found {}", columns.len(), row.len()) });
            }
            rows.push(row);
        }
        Ok(Self { name: name.to_string(), columns, rows })
    }

    /// Writes `<dir>/<name>.tsv` and `<dir>/<name>.json`.
    pub fn write(&self, dir: &Path) -> Result<(PathBuf, PathBuf)> {
        let tsv = dir.join(format!("{}.tsv", self.name));
        let json = dir.join(format!("{}.json", self.name));
        fs::write(&tsv, self.to_tsv())?;
        fs::write(&json, serde_json::to_string_pretty(self)? + "\n")?;
        Ok((tsv, json))
    }

    pub fn read_tsv(path: &Path) -> Result<Self> {
        let name = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
        Self::parse_tsv(name, &fs::read_to_string(path)?)
    }
}

/// Writes every table into `dir`, creating it if needed.
pub fn emit_reports(tables: &[Table], dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for t in tables {
        let (a, b) = t.write(dir)?;
        paths.push(a);
        paths.push(b);
    }
    Ok(paths)
}

/// Fixed-precision cell for rates and real-valued metrics.
pub fn fmt_f(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.6}")
    }
}

/// Scientific cell for residuals.
pub fn fmt_e(x: f64) -> String {
    format!("{x:.3e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tsv_round_trip() {
        let mut t = Table::new("a1_rollout_grid", &["r", "lf", "success"]);
        t.push(vec!["4".into(), "0.02".into(), fmt_f(0.5)]);
        let back = Table::parse_tsv("a1_rollout_grid", &t.to_tsv()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn header_only_and_files() {
        let dir = tempfile::tempdir().unwrap();
        let t = Table::new("empty", &["x", "y"]);
        let paths = emit_reports(std::slice::from_ref(&t), dir.path()).unwrap();
        assert_eq!(fs::read_to_string(&paths[0]).unwrap(), "x\ty\n");
        assert_eq!(Table::read_tsv(&paths[0]).unwrap(), t);
        let json: Table = serde_json::from_str(&fs::read_to_string(&paths[1]).unwrap()).unwrap();
        assert_eq!(json, t);
    }

    #[test]
    fn ragged_row_rejected() {
        assert!(Table::parse_tsv("t", "a\tb\n1\n").is_err());
    }
}
