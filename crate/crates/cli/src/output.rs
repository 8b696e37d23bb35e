use std::fmt::Write as _;
use std::io;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Plain,
    Json,
    Csv,
    Latex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

/// A query with its result table. Every value is already rendered: exact
/// values as integers or reduced fractions, float values as decimals.
#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub query: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub mode: Mode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

#[derive(Serialize)]
struct JsonRecord<'a> {
    command: &'a str,
    query: serde_json::Map<String, serde_json::Value>,
    mode: Mode,
    rows: Vec<serde_json::Map<String, serde_json::Value>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    elapsed_ms: Option<u128>,
}

fn object<'a>(pairs: impl Iterator<Item = (&'a String, &'a String)>) -> serde_json::Map<String, serde_json::Value> {
    pairs
        .map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone())))
        .collect()
}

impl OutputRecord {
    pub fn new(command: &str, query: &[(&str, String)], columns: &[&str]) -> Self {
        OutputRecord {
            command: command.to_string(),
            query: query.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            mode: Mode::Exact,
            elapsed_ms: None,
        }
    }

    pub fn row(&mut self, values: Vec<String>) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(values);
    }

    pub fn render(&self, format: Format) -> io::Result<String> {
        match format {
            Format::Plain => Ok(self.plain()),
            Format::Json => self.json(),
            Format::Csv => self.csv(),
            Format::Latex => Ok(self.latex()),
        }
    }

    fn plain(&self) -> String {
        let mut out = String::new();
        if self.rows.len() == 1 && self.columns.len() == 1 {
            let _ = writeln!(out, "{}", self.rows[0][0]);
        } else {
            let widths: Vec<usize> = (0..self.columns.len())
                .map(|i| {
                    self.rows
                        .iter()
                        .map(|r| r[i].chars().count())
                        .chain([self.columns[i].chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:>w$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            let _ = writeln!(out, "{}", line(&self.columns));
            for r in &self.rows {
                let _ = writeln!(out, "{}", line(r));
            }
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "elapsed: {ms} ms");
        }
        out
    }

    fn json(&self) -> io::Result<String> {
        let rec = JsonRecord {
            command: &self.command,
            query: object(self.query.iter().map(|(k, v)| (k, v))),
            mode: self.mode,
            rows: self
                .rows
                .iter()
                .map(|r| object(self.columns.iter().zip(r)))
                .collect(),
            elapsed_ms: self.elapsed_ms,
        };
        let mut s = serde_json::to_string_pretty(&rec)?;
        s.push('\n');
        Ok(s)
    }

    /// Query parameters are repeated as leading columns on every row.
    fn csv(&self) -> io::Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = self.query.iter().map(|(k, _)| k.as_str()).chain(self.columns.iter().map(String::as_str));
        w.write_record(header)?;
        for r in &self.rows {
            w.write_record(self.query.iter().map(|(_, v)| v.as_str()).chain(r.iter().map(String::as_str)))?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        String::from_utf8(bytes).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
    }

    fn latex(&self) -> String {
        let cell = |s: &str| {
            if let Some((p, q)) = s.split_once('/') {
                format!("$\\frac{{{p}}}{{{q}}}$")
            } else {
                s.replace('_', "\\_")
            }
        };
        let mut out = String::new();
        let params: Vec<String> = self.query.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "% {} {}", self.command, params.join(" "));
        let _ = writeln!(out, "\\begin{{tabular}}{{{}}}", "r".repeat(self.columns.len()));
        let _ = writeln!(out, "\\hline");
        let head: Vec<String> = self.columns.iter().map(|c| cell(c)).collect();
        let _ = writeln!(out, "{} \\\\", head.join(" & "));
        let _ = writeln!(out, "\\hline");
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| cell(c)).collect();
            let _ = writeln!(out, "{} \\\\", cells.join(" & "));
        }
        let _ = writeln!(out, "\\hline");
        let _ = writeln!(out, "\\end{{tabular}}");
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> OutputRecord {
        let mut rec = OutputRecord::new("split", &[("g", "1".into())], &["omega", "m"]);
        rec.row(vec!["1".into(), "2".into()]);
        rec.row(vec!["3".into(), "8/9".into()]);
        rec
    }

    #[test]
    fn formats_carry_the_same_values() {
        let rec = sample();
        let json = rec.render(Format::Json).unwrap();
        assert!(json.contains("\"m\": \"8/9\""));
        let csv = rec.render(Format::Csv).unwrap();
        assert_eq!(csv, "g,omega,m\n1,1,2\n1,3,8/9\n");
        let tex = rec.render(Format::Latex).unwrap();
        assert!(tex.contains("$\\frac{8}{9}$"));
        let plain = rec.render(Format::Plain).unwrap();
        assert!(plain.contains("8/9"));
    }
}
