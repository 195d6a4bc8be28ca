//! Plain-text matrix files.
//!
//! One row per line, entries separated by spaces, each entry written as
//! `re+imi` or `re-imi` with 17 significant digits in both parts. Reading
//! such a file back reproduces every entry bit for bit, signed zeros
//! included.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};

pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { "" } else { "+" };
    format!("{:.16e}{sign}{:.16e}i", z.re, z.im)
}

/// Parses `a`, `bi`, `a+bi` or `a-bi`. A bare `i` stands for a unit
/// imaginary part.
pub fn parse_complex(token: &str) -> Option<C64> {
    let t = token.trim();
    if t.is_empty() {
        return None;
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().ok().map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (body[..k].parse::<f64>().ok()?, imaginary(&body[k..])?),
        None => (0.0, imaginary(body)?),
    };
    Some(C64::new(re, im))
}

fn imaginary(s: &str) -> Option<f64> {
    match s {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => s.parse().ok(),
    }
}

pub fn format_matrix(m: &ComplexMatrix) -> Result<String> {
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut out = String::new();
    for r in 0..m.dim() {
        let row: Vec<String> = m.row(r).iter().map(|z| format_complex(*z)).collect();
        writeln!(out, "{}", row.join(" ")).expect("writing to a String");
    }
    Ok(out)
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let mut rows = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split_whitespace()
            .map(|tok| {
                parse_complex(tok).ok_or_else(|| Error::MatrixFormat {
                    line: idx + 1,
                    message: format!("cannot parse entry `{tok}`"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push((idx + 1, row));
    }
    let n = rows.len();
    if n == 0 {
        return Err(Error::MatrixFormat {
            line: 1,
            message: "no rows".into(),
        });
    }
    if let Some((line, row)) = rows.iter().find(|(_, r)| r.len() != n) {
        return Err(Error::MatrixFormat {
            line: *line,
            message: format!("expected {n} entries, found {}", row.len()),
        });
    }
    ComplexMatrix::from_rows(&rows.into_iter().map(|(_, r)| r).collect::<Vec<_>>())
}

pub fn dump_matrix(m: &ComplexMatrix, path: &Path) -> Result<()> {
    fs::write(path, format_matrix(m)?)?;
    Ok(())
}

pub fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    parse_matrix(&fs::read_to_string(path)?)
}
