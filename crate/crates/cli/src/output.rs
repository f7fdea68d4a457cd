use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
    Csv,
}

/// A report: named columns of text cells. Exact rationals are stored as `p/q` text.
#[derive(Clone, Debug, Default)]
pub struct Table {
    headers: Vec<String>,
    numeric: Vec<bool>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), numeric: vec![false; headers.len()], rows: Vec::new() }
    }

    /// Marks columns that get a decimal companion under `--float`.
    pub fn numeric(mut self, columns: &[&str]) -> Self {
        for (i, h) in self.headers.iter().enumerate() {
            if columns.contains(&h.as_str()) {
                self.numeric[i] = true;
            }
        }
        self
    }

    pub fn push<I, S>(&mut self, row: I)
    where
        I: IntoIterator<Item = S>,
        S: ToString,
    {
        let row: Vec<String> = row.into_iter().map(|s| s.to_string()).collect();
        assert_eq!(row.len(), self.headers.len(), "row width");
        self.rows.push(row);
    }

    fn expanded(&self, float: bool) -> (Vec<String>, Vec<Vec<String>>) {
        if !float || !self.numeric.iter().any(|&n| n) {
            return (self.headers.clone(), self.rows.clone());
        }
        let mut headers = Vec::new();
        for (h, &n) in self.headers.iter().zip(&self.numeric) {
            headers.push(h.clone());
            if n {
                headers.push(format!("{h}_float"));
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut out = Vec::new();
                for (cell, &n) in row.iter().zip(&self.numeric) {
                    out.push(cell.clone());
                    if n {
                        out.push(decimal(cell).map(|x| format!("{x:.12}")).unwrap_or_default());
                    }
                }
                out
            })
            .collect();
        (headers, rows)
    }

    pub fn render(&self, format: Format, float: bool) -> String {
        let (headers, rows) = self.expanded(float);
        match format {
            Format::Tsv => {
                let mut out = headers.join("\t");
                out.push('\n');
                for row in &rows {
                    out.push_str(&row.join("\t"));
                    out.push('\n');
                }
                out
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&headers).expect("write to memory");
                for row in &rows {
                    w.write_record(row).expect("write to memory");
                }
                String::from_utf8(w.into_inner().expect("flush to memory")).expect("utf-8 input")
            }
            Format::Json => {
                let items: Vec<Value> = rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> =
                            headers.iter().cloned().zip(row.iter().map(|c| Value::String(c.clone()))).collect();
                        Value::Object(obj)
                    })
                    .collect();
                let mut out = serde_json::to_string_pretty(&Value::Array(items)).expect("json values serialize");
                out.push('\n');
                out
            }
        }
    }
}

/// Decimal value of an integer, `p/q` or decimal string.
pub fn decimal(cell: &str) -> Option<f64> {
    match cell.split_once('/') {
        Some((p, q)) => Some(p.trim().parse::<f64>().ok()? / q.trim().parse::<f64>().ok()?),
        None => cell.trim().parse::<f64>().ok(),
    }
}
