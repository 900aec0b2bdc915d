//! Dense matrices as CSV, label files, and PGM heatmaps.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::Array2;

use crate::error::{Error, Result};

/// Formats `v` with 9 significant digits in the style of C's `%.9g`.
pub fn format_significant(v: f64) -> String {
    const DIGITS: i32 = 9;
    if v == 0.0 {
        return "0".to_string();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..DIGITS).contains(&exp) {
        format!("{}e{exp}", trim_fraction(mantissa))
    } else {
        let decimals = (DIGITS - 1 - exp) as usize;
        trim_fraction(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn matrix_to_csv(m: &Array2<f64>) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(|&x| format_significant(x)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// One row per line, comma-separated, 9 significant digits, `\n` endings.
pub fn write_matrix_csv(m: &Array2<f64>, path: &Path) -> Result<()> {
    fs::write(path, matrix_to_csv(m)).map_err(|e| Error::io(path, e))
}

pub fn parse_matrix_csv(text: &str, path: &Path) -> Result<Array2<f64>> {
    let mut values = Vec::new();
    let mut cols = None;
    let mut rows = 0;
    for (i, line) in text.lines().enumerate() {
        let no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let mut count = 0;
        for (c, cell) in line.split(',').enumerate() {
            let cell = cell.trim();
            values.push(cell.parse::<f64>().map_err(|_| {
                Error::parse(path, no, Some(c + 1), format!("expected a number, found {cell:?}"))
            })?);
            count += 1;
        }
        match cols {
            None => cols = Some(count),
            Some(expected) if expected != count => {
                return Err(Error::parse(
                    path,
                    no,
                    None,
                    format!("ragged row: expected {expected} columns, found {count}"),
                ))
            }
            _ => {}
        }
        rows += 1;
    }
    let cols = cols.ok_or_else(|| Error::parse(path, 1, None, "empty matrix"))?;
    Ok(Array2::from_shape_vec((rows, cols), values).expect("row lengths checked above"))
}

pub fn read_matrix_csv(path: &Path) -> Result<Array2<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_matrix_csv(&text, path)
}

pub fn labels_to_string(labels: &[usize]) -> String {
    let mut out = String::new();
    for l in labels {
        writeln!(out, "{l}").unwrap();
    }
    out
}

/// One non-negative integer per line.
pub fn write_labels(labels: &[usize], path: &Path) -> Result<()> {
    fs::write(path, labels_to_string(labels)).map_err(|e| Error::io(path, e))
}

pub fn read_labels(path: &Path) -> Result<Vec<usize>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            l.trim().parse::<usize>().map_err(|_| {
                Error::parse(path, i + 1, Some(1), format!("label {l:?} is not a class id"))
            })
        })
        .collect()
}

/// Pixel value for a similarity in `[-1, 1]`: `round((v + 1) / 2 * 255)`,
/// rounding half up. Values outside the range are clamped.
pub fn quantize(v: f64) -> u8 {
    let v = v.clamp(-1.0, 1.0);
    ((v + 1.0) / 2.0 * 255.0 + 0.5).floor() as u8
}

pub fn heatmap_pgm(m: &Array2<f64>) -> String {
    let mut out = format!("P2\n{} {}\n255\n", m.ncols(), m.nrows());
    for row in m.rows() {
        let px: Vec<String> = row.iter().map(|&v| quantize(v).to_string()).collect();
        out.push_str(&px.join(" "));
        out.push('\n');
    }
    out
}

/// ASCII PGM (`P2`, maxval 255), row-major.
pub fn write_heatmap_pgm(m: &Array2<f64>, path: &Path) -> Result<()> {
    fs::write(path, heatmap_pgm(m)).map_err(|e| Error::io(path, e))
}
