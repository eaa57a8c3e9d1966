//! Versioned JSON results and their CSV mirror.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{Map, Value};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub config: Value,
    pub results: Vec<Value>,
    pub pass: bool,
}

impl Report {
    pub fn new(command: &str, config: Value) -> Self {
        Report { schema_version: SCHEMA_VERSION, command: command.into(), config, results: Vec::new(), pass: true }
    }

    /// Adds a result row and folds its verdict into `pass`.
    pub fn push(&mut self, row: Value, ok: bool) {
        self.results.push(row);
        self.pass &= ok;
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| CliError::Output(e.to_string()))?;
        text.push('\n');
        Ok(text)
    }

    /// One line per result row; nested values are written as JSON.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut columns: Vec<String> = Vec::new();
        for row in &self.results {
            for key in flatten(row).keys() {
                if !columns.contains(key) {
                    columns.push(key.clone());
                }
            }
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Output(e.to_string());
        if !columns.is_empty() {
            w.write_record(&columns).map_err(io)?;
        }
        for row in &self.results {
            let flat = flatten(row);
            let record: Vec<String> = columns
                .iter()
                .map(|c| match flat.get(c) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                })
                .collect();
            w.write_record(&record).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
    }

    /// Writes `path` and, next to it, the CSV mirror with extension `csv`.
    pub fn write(&self, path: &Path) -> Result<PathBuf, CliError> {
        let io = |p: &Path, e: std::io::Error| CliError::Output(format!("{}: {e}", p.display()));
        std::fs::write(path, self.to_json()?).map_err(|e| io(path, e))?;
        let csv_path = path.with_extension("csv");
        std::fs::write(&csv_path, self.to_csv()?).map_err(|e| io(&csv_path, e))?;
        Ok(csv_path)
    }
}

/// Objects are flattened one level deep with `outer.inner` column names.
fn flatten(row: &Value) -> Map<String, Value> {
    let mut out = Map::new();
    match row {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(inner) => {
                        for (ik, iv) in inner {
                            out.insert(format!("{k}.{ik}"), iv.clone());
                        }
                    }
                    _ => {
                        out.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        other => {
            out.insert("value".into(), other.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_mirrors_rows() {
        let mut r = Report::new("game", json!({"seed": 1}));
        r.push(json!({"game": "ind", "est": {"p_real": 1.0, "p_ideal": 0.0}}), true);
        r.push(json!({"game": "sem, flipped", "extra": [1, 2]}), false);
        assert!(!r.pass);
        let csv = r.to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "est.p_ideal,est.p_real,game,extra");
        assert_eq!(lines[1], "0.0,1.0,ind,");
        assert_eq!(lines[2], ",,\"sem, flipped\",\"[1,2]\"");
    }

    #[test]
    fn json_field_order_is_fixed() {
        let r = Report::new("vectors", json!({}));
        let text = r.to_json().unwrap();
        let keys: Vec<usize> =
            ["schema_version", "command", "config", "results", "pass"].iter().map(|k| text.find(k).unwrap()).collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn empty_report_has_empty_csv() {
        assert_eq!(Report::new("qotp-mix", json!({})).to_csv().unwrap(), "");
    }
}
