//! Mode-function file formats.
//!
//! JSON: `{"q": number, "modes": [{"k": int, "l": int, "re": number, "im": number}, ...]}`.
//! CSV: header `k,l,re,im`, one coefficient per row; the lattice parameter
//! comes from the caller. Coefficients with modulus below 1e-300 are dropped
//! on write. Numbers are written with 17 significant digits.

use num_complex::Complex64;
use serde::Deserialize;

use crate::error::FileError;
use crate::lattice::QLattice;
use crate::modes::ModeFunction;

const DROP_THRESHOLD: f64 = 1e-300;

/// 17-significant-digit rendering used by every emitted number.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_json(f: &ModeFunction) -> String {
    let mut out = String::new();
    out.push_str("{\"q\": ");
    out.push_str(&fmt_f64(f.q()));
    out.push_str(", \"modes\": [");
    let mut first = true;
    for (k, l, c) in f.iter() {
        if c.norm() < DROP_THRESHOLD {
            continue;
        }
        if !first {
            out.push_str(", ");
        }
        first = false;
        out.push_str(&format!(
            "{{\"k\": {k}, \"l\": {l}, \"re\": {}, \"im\": {}}}",
            fmt_f64(c.re),
            fmt_f64(c.im)
        ));
    }
    out.push_str("]}\n");
    out
}

#[derive(Deserialize)]
struct ModeEntry {
    k: i32,
    l: i32,
    re: f64,
    im: f64,
}

#[derive(Deserialize)]
struct ModeFile {
    q: f64,
    modes: Vec<ModeEntry>,
}

pub fn read_json(text: &str) -> Result<ModeFunction, FileError> {
    let parsed: ModeFile = serde_json::from_str(text).map_err(|e| FileError::Json {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let lattice = QLattice::new(parsed.q)?;
    let coeffs = parsed
        .modes
        .into_iter()
        .map(|m| ((m.k, m.l), Complex64::new(m.re, m.im)));
    Ok(ModeFunction::from_coeffs(lattice, coeffs)?)
}

pub fn write_csv(f: &ModeFunction) -> String {
    let mut out = String::from("k,l,re,im\n");
    for (k, l, c) in f.iter() {
        if c.norm() < DROP_THRESHOLD {
            continue;
        }
        out.push_str(&format!("{k},{l},{},{}\n", fmt_f64(c.re), fmt_f64(c.im)));
    }
    out
}

pub fn read_csv(text: &str, lattice: QLattice) -> Result<ModeFunction, FileError> {
    let mut coeffs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if idx == 0 {
            let header: Vec<&str> = line.split(',').map(str::trim).collect();
            if header != ["k", "l", "re", "im"] {
                return Err(FileError::Csv {
                    line: line_no,
                    message: format!("expected header `k,l,re,im`, got `{line}`"),
                });
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(FileError::Csv {
                line: line_no,
                message: format!("expected 4 fields, got {}", fields.len()),
            });
        }
        let k: i32 = fields[0].parse().map_err(|e| FileError::Csv {
            line: line_no,
            message: format!("bad k: {e}"),
        })?;
        let l: i32 = fields[1].parse().map_err(|e| FileError::Csv {
            line: line_no,
            message: format!("bad l: {e}"),
        })?;
        let re: f64 = fields[2].parse().map_err(|e| FileError::Csv {
            line: line_no,
            message: format!("bad re: {e}"),
        })?;
        let im: f64 = fields[3].parse().map_err(|e| FileError::Csv {
            line: line_no,
            message: format!("bad im: {e}"),
        })?;
        coeffs.push(((k, l), Complex64::new(re, im)));
    }
    Ok(ModeFunction::from_coeffs(lattice, coeffs)?)
}
