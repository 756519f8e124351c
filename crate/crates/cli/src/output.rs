//! Tabular export in either CSV or JSON shape, written atomically
//! (temp file + rename).

use crate::config::OutputFormat;
use std::path::{Path, PathBuf};

pub const SCHEMA_VERSION: u32 = 1;

/// A rectangular table with named columns; every export goes through this
/// so the two formats stay column-compatible.
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &'static str, columns: Vec<&'static str>) -> Self {
        Table {
            name,
            columns: columns.into_iter().map(String::from).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Adopt pre-rendered CSV (header line + rows) produced by the core
    /// crate's exporters.
    pub fn from_csv(name: &'static str, csv: &str) -> Self {
        let mut lines = csv.lines();
        let header = lines.next().unwrap_or_default();
        let columns: Vec<String> = header.split(',').map(String::from).collect();
        let rows = lines
            .map(|l| l.split(',').map(|s| s.to_string()).collect())
            .collect();
        Table {
            name,
            columns,
            rows,
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut out = self.columns.join(",");
                out.push('\n');
                for row in &self.rows {
                    out.push_str(&row.join(","));
                    out.push('\n');
                }
                out
            }
            OutputFormat::Json => {
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|r| {
                        serde_json::Value::Array(
                            r.iter()
                                .map(|cell| match cell.parse::<f64>() {
                                    Ok(v) if v.is_finite() => serde_json::json!(v),
                                    _ => serde_json::json!(cell),
                                })
                                .collect(),
                        )
                    })
                    .collect();
                let doc = serde_json::json!({
                    "schema_version": SCHEMA_VERSION,
                    "table": self.name,
                    "columns": self.columns,
                    "rows": rows,
                });
                format!("{doc:#}\n")
            }
        }
    }
}

/// Write atomically: the data lands under a temporary name in the target
/// directory and is renamed into place.
pub fn write_atomic(dir: &Path, file_name: &str, contents: &str) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let final_path = dir.join(file_name);
    let tmp_path = dir.join(format!(".{file_name}.tmp"));
    std::fs::write(&tmp_path, contents)?;
    std::fs::rename(&tmp_path, &final_path)?;
    Ok(final_path)
}

/// Write a table under `stem.{csv|json}` according to the format.
pub fn write_table(
    dir: &Path,
    stem: &str,
    table: &Table,
    format: OutputFormat,
) -> std::io::Result<PathBuf> {
    let file_name = format!("{stem}.{}", format.extension());
    write_atomic(dir, &file_name, &table.render(format))
}

pub fn write_json(dir: &Path, file_name: &str, doc: &serde_json::Value) -> std::io::Result<PathBuf> {
    write_atomic(dir, file_name, &format!("{doc:#}\n"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_round_the_same_columns() {
        let mut t = Table::new("demo", vec!["a", "b"]);
        t.push(vec!["1".into(), "2.5".into()]);
        let csv = t.render(OutputFormat::Csv);
        assert_eq!(csv, "a,b\n1,2.5\n");
        let json = t.render(OutputFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["columns"][1], "b");
        assert_eq!(v["rows"][0][1], 2.5);
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = std::env::temp_dir().join("lemnis-test-out");
        let p = write_atomic(&dir, "x.txt", "one").unwrap();
        write_atomic(&dir, "x.txt", "two").unwrap();
        assert_eq!(std::fs::read_to_string(p).unwrap(), "two");
    }
}
