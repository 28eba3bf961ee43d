//! Number formatting and the three output formats.

use std::fmt::Write as _;

use bellflow::Scalar;
use clap::ValueEnum;
use serde::{Serialize, Serializer};

use crate::error::CliError;

pub const MACHINE_DIGITS: usize = 15;
pub const TABLE_DIGITS: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Json,
    Csv,
}

/// Scientific notation with `digits` significant digits and a signed
/// exponent; `-0` prints as `0`.
pub fn sci(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let x = if x == 0.0 { 0.0 } else { x };
    let text = format!("{:.*e}", digits - 1, x);
    match text.split_once('e') {
        Some((m, e)) if !e.starts_with('-') => format!("{m}e+{e}"),
        _ => text,
    }
}

/// A real number serialized with 15 significant digits, or `null` when not
/// finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Num(pub f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return s.serialize_none();
        }
        let n: serde_json::Number = sci(self.0, MACHINE_DIGITS).parse().map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

/// A complex number serialized as `[re, im]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx(pub Scalar);

impl Serialize for Cx {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [Num(self.0.re), Num(self.0.im)].serialize(s)
    }
}

pub fn cx_list(values: &[Scalar]) -> Vec<Cx> {
    values.iter().copied().map(Cx).collect()
}

/// Table presentation: 6 significant digits, `(re, im)` pairs, and imaginary
/// parts dropped below `real_tol` when set.
#[derive(Clone, Copy, Debug, Default)]
pub struct TextStyle {
    pub real_tol: Option<f64>,
}

impl TextStyle {
    pub fn num(&self, x: f64) -> String {
        sci(x, TABLE_DIGITS)
    }

    pub fn cx(&self, z: Scalar) -> String {
        match self.real_tol {
            Some(tol) if z.im.abs() <= tol => self.num(z.re),
            _ => format!("({}, {})", self.num(z.re), self.num(z.im)),
        }
    }
}

/// Left-aligned text columns separated by two spaces.
pub fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &mut dyn Iterator<Item = &str>| {
        let mut text = String::new();
        for (i, cell) in cells.enumerate() {
            if i > 0 {
                text.push_str("  ");
            }
            let _ = write!(text, "{cell:<width$}", width = widths[i]);
        }
        out.push_str(text.trim_end());
        out.push('\n');
    };
    line(&mut headers.iter().copied());
    for row in rows {
        line(&mut row.iter().map(String::as_str));
    }
    out
}

pub fn csv(headers: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(headers)?;
    for row in rows {
        w.write_record(row)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn csv_num(x: f64) -> String {
    sci(x, MACHINE_DIGITS)
}

/// `<prefix>_re`, `<prefix>_im`.
pub fn cx_headers(prefix: &str) -> [String; 2] {
    [format!("{prefix}_re"), format!("{prefix}_im")]
}

pub fn cx_cells(z: Scalar) -> [String; 2] {
    [csv_num(z.re), csv_num(z.im)]
}

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.into()))?;
    text.push('\n');
    Ok(text)
}
