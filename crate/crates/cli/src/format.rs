//! Number and row formatting for CSV and JSON lines output.

use std::io::Write;

use serde_json::{Map, Value};

use crate::error::CliResult;

/// Shortest `%.17g`-style rendering: 17 significant digits, trailing zeros
/// dropped, exponent form outside `1e-4 <= |x| < 1e17`.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// A table with a fixed column list; cells are optional numbers plus a
/// trailing free-text `error` column.
pub struct Table {
    columns: Vec<String>,
    rows: Vec<(Vec<Option<f64>>, String)>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, cells: Vec<Option<f64>>, error: String) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push((cells, error));
    }

    pub fn write(&self, out: &mut dyn Write, format: Format) -> CliResult<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Jsonl => self.write_jsonl(out),
        }
    }

    fn write_csv(&self, out: &mut dyn Write) -> CliResult<()> {
        let mut header = self.columns.clone();
        header.push("error".into());
        let header = header.join(",");
        writeln!(out, "# nikolskii-bounds v1, columns: {header}")?;
        writeln!(out, "{header}")?;
        for (cells, error) in &self.rows {
            let mut fields: Vec<String> = cells.iter().map(|c| c.map(g17).unwrap_or_default()).collect();
            fields.push(csv_text(error));
            writeln!(out, "{}", fields.join(","))?;
        }
        Ok(())
    }

    fn write_jsonl(&self, out: &mut dyn Write) -> CliResult<()> {
        for (cells, error) in &self.rows {
            let mut obj = Map::new();
            for (name, cell) in self.columns.iter().zip(cells) {
                let v = cell
                    .and_then(serde_json::Number::from_f64)
                    .map(Value::Number)
                    .unwrap_or(Value::Null);
                obj.insert(name.clone(), v);
            }
            let e = if error.is_empty() { Value::Null } else { Value::String(error.clone()) };
            obj.insert("error".into(), e);
            writeln!(out, "{}", Value::Object(obj))?;
        }
        Ok(())
    }
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
