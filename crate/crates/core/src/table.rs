//! Plain CSV rows with shortest round-trip float formatting.

use std::io::{self, Write};

/// Shortest decimal that parses back to the same `f64`; scientific notation
/// outside `[1e−5, 1e16)`.
pub fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn write_row<W: Write, S: AsRef<str>>(w: &mut W, cells: impl IntoIterator<Item = S>) -> io::Result<()> {
    let mut first = true;
    for c in cells {
        if !first {
            w.write_all(b",")?;
        }
        first = false;
        w.write_all(c.as_ref().as_bytes())?;
    }
    w.write_all(b"\n")
}

pub fn write_floats<W: Write>(w: &mut W, values: &[f64]) -> io::Result<()> {
    write_row(w, values.iter().map(|&v| format_float(v)))
}

pub fn parse_floats(line: &str, expected: usize) -> Result<Vec<f64>, String> {
    let values: Vec<f64> = line
        .split(',')
        .map(|c| c.trim().parse::<f64>().map_err(|e| format!("{c:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if values.len() != expected {
        return Err(format!("expected {expected} columns, found {}", values.len()));
    }
    Ok(values)
}
