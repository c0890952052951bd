//! CSV and JSON emission for computed tables and curves.
//!
//! Float formatting is fixed at 12 significant digits so that rerunning a
//! command reproduces byte-identical files (apart from the optional
//! timestamp header line). Infinite exponent entries serialize as `"inf"`.

use std::io::Write;

use serde_json::{json, Value};

use crate::error::Result;

/// Formats a float with 12 significant digits; infinities become `inf`.
pub fn fmt_float(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let abs = v.abs();
    if (1e-4..1e12).contains(&abs) {
        let digits = abs.log10().floor() as i32;
        let decimals = (11 - digits).max(0) as usize;
        let plain = format!("{v:.decimals$}");
        return plain
            .trim_end_matches('0')
            .trim_end_matches('.')
            .to_string();
    }
    // Scientific notation with a trimmed mantissa for extreme magnitudes.
    let formatted = format!("{v:.11e}");
    match formatted.split_once('e') {
        Some((mantissa, exponent)) => {
            let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
            format!("{mantissa}e{exponent}")
        }
        None => formatted,
    }
}

/// JSON value for a possibly-infinite float (`"inf"` as a string).
pub fn json_float(v: f64) -> Value {
    if v.is_infinite() {
        json!(if v > 0.0 { "inf" } else { "-inf" })
    } else {
        json!(v)
    }
}

/// A simple CSV table with a fixed schema.
#[derive(Clone, Debug)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Writes the table; `timestamp` adds a leading comment line that is the
    /// only part allowed to differ between identical reruns.
    pub fn write_csv(&self, out: &mut impl Write, timestamp: bool) -> Result<()> {
        if timestamp {
            let now = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0);
            writeln!(out, "# generated-at-unix: {now}")?;
        }
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// JSON mirror: an array of objects keyed by column name.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = serde_json::Map::new();
                for (col, cell) in self.columns.iter().zip(row) {
                    // Numeric cells stay numeric in JSON; "inf" and labels stay strings.
                    let val = cell
                        .parse::<f64>()
                        .ok()
                        .filter(|v| v.is_finite())
                        .map(|v| json!(v))
                        .unwrap_or_else(|| json!(cell));
                    obj.insert(col.clone(), val);
                }
                Value::Object(obj)
            })
            .collect();
        Value::Array(rows)
    }
}
