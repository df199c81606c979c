//! Deterministic emission: fixed float formatting and output routing.
//! Identical invocations must produce byte-identical files, so CSV floats
//! use the shortest round-trip form capped at 12 significant digits.

use rainbow_core::{Error, Result};
use std::io::Write;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// Shortest round-trip decimal, capped at 12 significant digits.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    // Display never uses scientific notation, so extreme magnitudes become
    // long zero runs; bound the plain form by length as well as precision.
    let plain = format!("{v}");
    if significant_digits(&plain) <= 12 && plain.len() <= 18 {
        return plain;
    }
    let sci = format!("{v:e}");
    if significant_digits(&sci) <= 12 {
        sci
    } else {
        format!("{v:.11e}")
    }
}

fn significant_digits(s: &str) -> usize {
    let mantissa = s.split(['e', 'E']).next().unwrap_or(s);
    mantissa
        .chars()
        .filter(char::is_ascii_digit)
        .collect::<String>()
        .trim_start_matches('0')
        .len()
}

/// Write to the given path, or stdout when no path is set.
pub fn write_out(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| {
            Error::InvalidInput(format!("cannot write {}: {e}", path.display()))
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::Numerical(format!("cannot write to stdout: {e}"))),
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: serde::Serialize>(value: &T) -> Result<String> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Error::Numerical(format!("JSON serialization failed: {e}")))
}
