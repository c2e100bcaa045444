//! Deterministic CSV emission: fixed float formatting, fixed row order,
//! newline endings, '#'-prefixed provenance comments.

use crate::error::Result;
use std::io::Write;
use std::path::Path;

/// Nine significant digits, scientific notation; negative zero normalized.
pub fn fmt_float(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{:.8e}", x)
}

/// One CSV file: provenance comments, a header line and numeric rows.
#[derive(Debug, Clone)]
pub struct CsvFile {
    pub name: String,
    pub comments: Vec<String>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvFile {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = String::new();
        for c in &self.comments {
            out.push_str("# ");
            out.push_str(c);
            out.push('\n');
        }
        out.push_str(&self.header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| fmt_float(*v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out.into_bytes()
    }

    pub fn write_to(&self, dir: &Path) -> Result<std::path::PathBuf> {
        let path = dir.join(&self.name);
        let mut f = std::fs::File::create(&path)?;
        f.write_all(&self.to_bytes())?;
        Ok(path)
    }
}
