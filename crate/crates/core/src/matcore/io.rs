//! Plain-text matrix format.
//!
//! Header line `rows cols field` where field is `real` or `complex`, followed
//! by entries in row-major order separated by whitespace. Complex entries are
//! written as a `re im` pair. Values are printed with 17 significant digits,
//! which round-trips every `f64`.

use super::{is_real, CMat, C64};
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn of(m: &CMat) -> Self {
        if is_real(m) {
            Field::Real
        } else {
            Field::Complex
        }
    }

    fn name(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

pub fn parse_matrix(text: &str) -> Result<(CMat, Field)> {
    let mut tok = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or(""))
        .flat_map(str::split_whitespace);
    let rows = parse_usize(tok.next(), "rows")?;
    let cols = parse_usize(tok.next(), "cols")?;
    let field = match tok.next() {
        Some("real") => Field::Real,
        Some("complex") => Field::Complex,
        other => return Err(Error::Parse(format!("bad field {other:?}"))),
    };
    let mut m = CMat::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let r = parse_f64(tok.next(), i, j)?;
            let im = match field {
                Field::Real => 0.0,
                Field::Complex => parse_f64(tok.next(), i, j)?,
            };
            m[(i, j)] = C64::new(r, im);
        }
    }
    if let Some(extra) = tok.next() {
        return Err(Error::Parse(format!("trailing token {extra:?}")));
    }
    Ok((m, field))
}

/// Writes `m`, choosing the real field when every imaginary part is zero.
pub fn format_matrix(m: &CMat) -> String {
    format_matrix_as(m, Field::of(m))
}

pub fn format_matrix_as(m: &CMat, field: Field) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{} {} {}", m.nrows(), m.ncols(), field.name());
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .map(|j| {
                let z = m[(i, j)];
                match field {
                    Field::Real => format!("{:.16e}", z.re),
                    Field::Complex => format!("{:.16e} {:.16e}", z.re, z.im),
                }
            })
            .collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

pub fn read_matrix(path: &Path) -> Result<(CMat, Field)> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn write_matrix(path: &Path, m: &CMat) -> Result<()> {
    std::fs::write(path, format_matrix(m))?;
    Ok(())
}

fn parse_usize(t: Option<&str>, what: &str) -> Result<usize> {
    t.ok_or_else(|| Error::Parse(format!("missing {what}")))?
        .parse()
        .map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn parse_f64(t: Option<&str>, i: usize, j: usize) -> Result<f64> {
    t.ok_or_else(|| Error::Parse(format!("missing entry ({i}, {j})")))?
        .parse()
        .map_err(|e| Error::Parse(format!("entry ({i}, {j}): {e}")))
}
