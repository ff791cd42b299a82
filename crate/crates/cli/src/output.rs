//! Number formatting and artifact writers.
//!
//! JSON numbers carry 17 significant digits; CSV cells use the shortest
//! representation that round-trips. Non-finite values become the strings
//! `inf`, `-inf` and `nan` in both formats.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use serde_json::{Number, Value};

fn non_finite(x: f64) -> Option<&'static str> {
    if x.is_nan() {
        Some("nan")
    } else if x == f64::INFINITY {
        Some("inf")
    } else if x == f64::NEG_INFINITY {
        Some("-inf")
    } else {
        None
    }
}

/// A JSON number with 17 significant digits.
pub fn num(x: f64) -> Value {
    match non_finite(x) {
        Some(s) => Value::String(s.into()),
        None => {
            let text = format!("{x:.16e}");
            Value::Number(text.parse::<Number>().expect("formatted float is a JSON number"))
        }
    }
}

pub fn cell(x: f64) -> String {
    match non_finite(x) {
        Some(s) => s.into(),
        None => format!("{x}"),
    }
}

/// RFC 4180 table with a single header line.
pub fn csv_bytes(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.into_inner().context("flushing CSV buffer")
}

pub fn json_bytes(value: &Value) -> Result<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value)?;
    out.push(b'\n');
    Ok(out)
}

/// Writes to `out`, or stdout when no path is given.
pub fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                fs::create_dir_all(parent)
                    .with_context(|| format!("creating {}", parent.display()))?;
            }
            fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            Ok(stdout.flush()?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_17_digits() {
        assert_eq!(num(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(num(f64::NEG_INFINITY), Value::String("-inf".into()));
        assert_eq!(num(0.5).to_string(), "5.0000000000000000e-1");
        let back: f64 = num(std::f64::consts::PI).to_string().parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }

    #[test]
    fn csv_cells() {
        assert_eq!(cell(f64::NEG_INFINITY), "-inf");
        assert_eq!(cell(0.25), "0.25");
        let bytes = csv_bytes(&["a", "b"], &[vec!["1".into(), "x,y".into()]]).unwrap();
        assert_eq!(String::from_utf8(bytes).unwrap(), "a,b\r\n1,\"x,y\"\r\n");
    }
}
