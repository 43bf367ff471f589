//! Tabular output of wavefunction samples.
//!
//! CSV uses the fixed header `x1,x2,re_psi,im_psi,abs_psi` and writes every
//! value with 17 significant digits, so a float survives a write/read cycle
//! bit for bit. JSON holds the same rows as an array of objects.

use std::io::{BufRead, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec2;

pub const FIELD_HEADER: &str = "x1,x2,re_psi,im_psi,abs_psi";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldRow {
    pub x1: f64,
    pub x2: f64,
    pub re_psi: f64,
    pub im_psi: f64,
    pub abs_psi: f64,
}

impl FieldRow {
    pub fn new(x: Vec2, psi: Complex64) -> Self {
        Self {
            x1: x[0],
            x2: x[1],
            re_psi: psi.re,
            im_psi: psi.im,
            abs_psi: psi.norm(),
        }
    }

    fn values(&self) -> [f64; 5] {
        [self.x1, self.x2, self.re_psi, self.im_psi, self.abs_psi]
    }
}

/// A float with 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_field_csv<W: Write>(mut out: W, rows: &[FieldRow]) -> Result<()> {
    writeln!(out, "{FIELD_HEADER}")?;
    for row in rows {
        let cells: Vec<String> = row.values().iter().map(|v| format_float(*v)).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_field_csv<R: BufRead>(input: R) -> Result<Vec<FieldRow>> {
    let mut lines = input.lines();
    let header = lines.next().transpose()?.unwrap_or_default();
    if header.trim() != FIELD_HEADER {
        return Err(Error::Io(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let values = line
            .split(',')
            .map(|c| c.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Io(format!("line {}: {e}", n + 2)))?;
        let [x1, x2, re_psi, im_psi, abs_psi] = values[..] else {
            return Err(Error::Io(format!(
                "line {}: expected 5 columns, got {}",
                n + 2,
                values.len()
            )));
        };
        rows.push(FieldRow {
            x1,
            x2,
            re_psi,
            im_psi,
            abs_psi,
        });
    }
    Ok(rows)
}

pub fn write_field_json<W: Write>(mut out: W, rows: &[FieldRow]) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, rows)?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

pub fn read_field_json<R: std::io::Read>(input: R) -> Result<Vec<FieldRow>> {
    Ok(serde_json::from_reader(input)?)
}
