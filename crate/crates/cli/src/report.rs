//! Output tables and summaries rendered as CSV or JSON.
//!
//! CSV carries an optional table (header plus rows) followed by summary
//! entries on `# key,value` lines; a report without a table is written as a
//! `key,value` listing. JSON holds the same fields under `summary`,
//! `columns` and `rows`.

use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Num(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Missing,
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Num(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<Option<f64>> for Value {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Value::Missing, Value::Num)
    }
}

/// 17 significant digits, enough to round-trip any double.
pub fn format_number(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

impl Value {
    fn csv(&self) -> String {
        match self {
            Value::Num(v) => format_number(*v),
            Value::Int(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => s.clone(),
            Value::Missing => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Value::Num(v) if v.is_finite() => format_number(*v),
            Value::Num(_) | Value::Missing => "null".into(),
            Value::Int(v) => v.to_string(),
            Value::Bool(v) => v.to_string(),
            Value::Text(s) => serde_json::to_string(s).expect("string serialization"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, Value)>,
    /// Printed to stderr, not part of the rendered output.
    pub warnings: Vec<String>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.into(),
            ..Self::default()
        }
    }

    pub fn with_columns(mut self, columns: &[&str]) -> Self {
        self.columns = columns.iter().map(|c| c.to_string()).collect();
        self
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.summary.push((key.into(), value.into()));
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        if self.columns.is_empty() {
            out.push_str("key,value\n");
            for (k, v) in &self.summary {
                let _ = writeln!(out, "{k},{}", v.csv());
            }
            return out;
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Value::csv).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        for (k, v) in &self.summary {
            let _ = writeln!(out, "# {k},{}", v.csv());
        }
        out
    }

    fn to_json(&self) -> String {
        let quote = |s: &str| serde_json::to_string(s).expect("string serialization");
        let mut out = String::from("{\n");
        let _ = writeln!(out, "  \"command\": {},", quote(&self.command));
        out.push_str("  \"summary\": {");
        for (i, (k, v)) in self.summary.iter().enumerate() {
            let sep = if i == 0 { "\n" } else { ",\n" };
            let _ = write!(out, "{sep}    {}: {}", quote(k), v.json());
        }
        out.push_str(if self.summary.is_empty() { "},\n" } else { "\n  },\n" });
        let cols: Vec<String> = self.columns.iter().map(|c| quote(c)).collect();
        let _ = writeln!(out, "  \"columns\": [{}],", cols.join(", "));
        out.push_str("  \"rows\": [");
        for (i, row) in self.rows.iter().enumerate() {
            let sep = if i == 0 { "\n" } else { ",\n" };
            let cells: Vec<String> = row.iter().map(Value::json).collect();
            let _ = write!(out, "{sep}    [{}]", cells.join(", "));
        }
        out.push_str(if self.rows.is_empty() { "]\n" } else { "\n  ]\n" });
        out.push_str("}\n");
        out
    }
}
