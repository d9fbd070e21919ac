use std::fs;
use std::path::{Path, PathBuf};

use mmqi::numfmt::format_sig;
use serde::Serialize;

use crate::error::CliError;

pub fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::failure(format!("cannot create output directory {}: {e}", dir.display())))
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<PathBuf, CliError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| CliError::failure(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(dir, name, &text)
}

/// A CSV cell: text or a number written with 12 significant digits.
pub enum Cell {
    Text(String),
    Num(f64),
    Int(u64),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Self::Int(x)
    }
}

impl From<u32> for Cell {
    fn from(x: u32) -> Self {
        Self::Int(u64::from(x))
    }
}

pub struct CsvTable {
    header: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width must match header");
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Text(t) => quote(t),
                    Cell::Num(x) => format_sig(*x),
                    Cell::Int(i) => i.to_string(),
                })
                .collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn write(&self, dir: &Path, name: &str) -> Result<PathBuf, CliError> {
        write_text(dir, name, &self.render())
    }
}

fn quote(t: &str) -> String {
    if t.contains([',', '"', '\n']) {
        format!("\"{}\"", t.replace('"', "\"\""))
    } else {
        t.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_rows() {
        let mut t = CsvTable::new(&["channel", "m", "S"]);
        t.push(vec!["CH1".into(), 14u32.into(), 2.36129902450035.into()]);
        assert_eq!(t.render(), "channel,m,S\nCH1,14,2.3612990245\n");
        t.push(vec!["(s, as)".into(), 1u32.into(), 0.5.into()]);
        assert!(t.render().ends_with("\"(s, as)\",1,0.5\n"));
    }
}
