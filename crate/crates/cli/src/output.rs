//! Report emission in text, JSON-lines and CSV.
//!
//! Every verb emits zero or more stream rows followed by one summary
//! object. JSON output is one compact object per line with fields in
//! declaration order; big integers are decimal strings.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::{Serialize, Serializer};
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// Three-valued search outcome; budget exhaustion is never a `false`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    BudgetExceeded,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Verdict::True => s.serialize_bool(true),
            Verdict::False => s.serialize_bool(false),
            Verdict::BudgetExceeded => s.serialize_str("budget-exceeded"),
        }
    }
}

pub struct Emitter<W: Write> {
    format: Format,
    out: W,
    csv_header_done: bool,
}

impl<W: Write> Emitter<W> {
    pub fn new(format: Format, out: W) -> Self {
        Emitter {
            format,
            out,
            csv_header_done: false,
        }
    }

    pub fn format(&self) -> Format {
        self.format
    }

    /// A stream row. In CSV mode the first row's keys become the header.
    pub fn row<T: Serialize>(&mut self, row: &T) -> io::Result<()> {
        let v = serde_json::to_value(row).map_err(io::Error::other)?;
        match self.format {
            Format::Json => writeln!(self.out, "{v}"),
            Format::Text => writeln!(self.out, "{}", text_line(&v)),
            Format::Csv => {
                let Value::Object(map) = &v else {
                    return writeln!(self.out, "{}", csv_cell(&v));
                };
                if !self.csv_header_done {
                    let keys: Vec<&str> = map.keys().map(String::as_str).collect();
                    writeln!(self.out, "{}", keys.join(","))?;
                    self.csv_header_done = true;
                }
                let cells: Vec<String> = map.values().map(csv_cell).collect();
                writeln!(self.out, "{}", cells.join(","))
            }
        }
    }

    /// The closing summary. CSV output carries rows only.
    pub fn summary<T: Serialize>(&mut self, summary: &T) -> io::Result<()> {
        let v = serde_json::to_value(summary).map_err(io::Error::other)?;
        match self.format {
            Format::Json => writeln!(self.out, "{v}"),
            Format::Text => {
                if let Value::Object(map) = &v {
                    for (k, val) in map {
                        writeln!(self.out, "{k}: {}", plain(val))?;
                    }
                    Ok(())
                } else {
                    writeln!(self.out, "{}", plain(&v))
                }
            }
            Format::Csv => Ok(()),
        }
    }

    pub fn raw(&mut self) -> &mut W {
        &mut self.out
    }

    pub fn flush(&mut self) -> io::Result<()> {
        self.out.flush()
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn text_line(v: &Value) -> String {
    match v {
        Value::Object(map) => map
            .iter()
            .map(|(k, val)| format!("{k}={}", plain(val)))
            .collect::<Vec<_>>()
            .join(" "),
        other => plain(other),
    }
}

fn csv_cell(v: &Value) -> String {
    let s = match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn emit(format: Format, rows: &[Value], summary: Value) -> String {
        let mut e = Emitter::new(format, Vec::new());
        for r in rows {
            e.row(r).unwrap();
        }
        e.summary(&summary).unwrap();
        String::from_utf8(e.out).unwrap()
    }

    #[test]
    fn verdicts_serialize_tri_state() {
        let v = serde_json::to_string(&[Verdict::True, Verdict::False, Verdict::BudgetExceeded]).unwrap();
        assert_eq!(v, r#"[true,false,"budget-exceeded"]"#);
    }

    #[test]
    fn formats() {
        let rows = [json!({"i": 0, "value": "3"}), json!({"i": 1, "value": null})];
        let summary = json!({"status": "terminated", "length": 1});
        assert_eq!(
            emit(Format::Json, &rows, summary.clone()),
            "{\"i\":0,\"value\":\"3\"}\n{\"i\":1,\"value\":null}\n{\"status\":\"terminated\",\"length\":1}\n"
        );
        assert_eq!(
            emit(Format::Text, &rows, summary.clone()),
            "i=0 value=3\ni=1 value=-\nstatus: terminated\nlength: 1\n"
        );
        assert_eq!(emit(Format::Csv, &rows, summary), "i,value\n0,3\n1,\n");
    }

    #[test]
    fn csv_quotes_commas() {
        assert_eq!(csv_cell(&json!("a,b")), "\"a,b\"");
        assert_eq!(csv_cell(&json!([1, 2])), "\"[1,2]\"");
    }
}
