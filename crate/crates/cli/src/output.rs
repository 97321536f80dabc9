//! Number formatting, JSON reports and trace/table writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{Context, Result};
use closedcurve::oracle::CurveTrace;
use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{Map, Value};

use crate::config::Format;

/// 17 significant digits, enough to round-trip every `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Pretty JSON whose floats carry 17 significant digits.
struct Precise<'a>(PrettyFormatter<'a>);

impl Formatter for Precise<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, x: f64) -> io::Result<()> {
        w.write_all(fmt_f64(x).as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Single-line JSON with 17-digit floats.
struct CompactPrecise;

impl Formatter for CompactPrecise {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, x: f64) -> io::Result<()> {
        w.write_all(fmt_f64(x).as_bytes())
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Precise(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf)?)
}

pub fn to_json_line<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, CompactPrecise);
    value.serialize(&mut ser)?;
    Ok(String::from_utf8(buf)?)
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

/// An ordered table of named columns, rendered as CSV or JSON lines.
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn write_to(&self, out: &mut dyn Write, format: Format) -> Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "{}", self.columns.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(csv_cell).collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Jsonl => {
                for row in &self.rows {
                    let record: Map<String, Value> =
                        self.columns.iter().cloned().zip(row.iter().cloned()).collect();
                    writeln!(out, "{}", to_json_line(&record)?)?;
                }
            }
        }
        Ok(())
    }

    /// Writes to `path`, or stdout when `None`.
    pub fn write(&self, path: Option<&Path>, format: Format) -> Result<()> {
        match path {
            Some(p) => {
                let file = File::create(p).with_context(|| format!("cannot write {}", p.display()))?;
                let mut out = BufWriter::new(file);
                self.write_to(&mut out, format)?;
                out.flush().with_context(|| format!("cannot write {}", p.display()))?;
            }
            None => {
                let stdout = io::stdout();
                let mut out = stdout.lock();
                self.write_to(&mut out, format)?;
            }
        }
        Ok(())
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Number(n) if n.is_f64() => fmt_f64(n.as_f64().unwrap_or(f64::NAN)),
        Value::Number(n) => n.to_string(),
        Value::String(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A float cell; non-finite values become empty/null.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// Rows `s, x1..xn[, f11..fnn]` with the frame in world coordinates.
pub fn trace_table(trace: &CurveTrace, frames: bool) -> Table {
    let n = trace.signature.n();
    let mut columns = vec!["s".to_string()];
    columns.extend((1..=n).map(|i| format!("x{i}")));
    if frames {
        for i in 1..=n {
            columns.extend((1..=n).map(|j| format!("f{i}{j}")));
        }
    }
    let rows = (0..trace.len())
        .map(|k| {
            let mut row = vec![num(trace.s[k])];
            row.extend(trace.positions[k].iter().map(|x| num(*x)));
            if frames {
                let f = trace.world_frame(k).vectors;
                for i in 0..n {
                    row.extend((0..n).map(|j| num(f[(i, j)])));
                }
            }
            row
        })
        .collect();
    Table { columns, rows }
}
