use std::fs::File;
use std::io::{self, Write};

use hill_core::C64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Format, OutSpec};
use crate::CliError;

/// Significant digits of floats in JSON output.
pub const JSON_DIGITS: usize = 17;
/// Significant digits of floats in CSV output.
pub const CSV_DIGITS: usize = 12;

pub fn sig(v: f64, digits: usize) -> String {
    if v.is_finite() {
        format!("{:.*e}", digits - 1, v)
    } else {
        v.to_string()
    }
}

pub fn complex(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

struct FixedDigits;

impl serde_json::ser::Formatter for FixedDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(sig(v, JSON_DIGITS).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }
}

/// Compact JSON with every float written to 17 significant digits.
pub fn to_json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedDigits);
    value
        .serialize(&mut ser)
        .map_err(|e| CliError::Io(io::Error::other(e)))?;
    buf.push(b'\n');
    Ok(buf)
}

/// CSV rows; numeric cells are preformatted by [`cell`].
pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    let io_err = |e: csv::Error| CliError::Io(io::Error::other(e));
    w.write_record(header).map_err(io_err)?;
    for r in rows {
        w.write_record(r).map_err(io_err)?;
    }
    w.into_inner().map_err(|e| CliError::Io(io::Error::other(e.to_string())))
}

pub fn cell(v: f64) -> String {
    sig(v, CSV_DIGITS)
}

pub fn emit(out: &OutSpec, bytes: &[u8]) -> Result<(), CliError> {
    match &out.path {
        Some(p) => File::create(p).and_then(|mut f| f.write_all(bytes))?,
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
        }
    }
    Ok(())
}

pub fn require_json(out: &OutSpec, what: &str) -> Result<(), CliError> {
    if out.format == Format::Csv {
        return Err(CliError::usage("--out", format!("{what} only writes JSON")));
    }
    Ok(())
}
