//! Signal files.
//!
//! 1D: one sample per line, `re` or `re,im`. 2D: `N` rows of `N`
//! comma-separated values, each `re` or `re:im`. An optional first line
//! `# dim=<d> n=<N>` is checked against the grid; other `#` lines and blank
//! lines are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use microlocal_core::{Grid, GridFunction};
use num_complex::Complex64;

use crate::error::CliError;

fn bad_token(line: usize, column: usize, token: &str) -> CliError {
    CliError::Parse(format!("line {line}, column {column}: not a number: `{token}`"))
}

fn number(token: &str, line: usize, column: usize) -> Result<f64, CliError> {
    let t = token.trim();
    match t.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(bad_token(line, column, t)),
    }
}

/// Column (1-based) of byte offset `at` in `text`.
fn column(text: &str, at: usize) -> usize {
    text[..at].chars().count() + 1
}

fn check_header(line: &str, grid: &Grid) -> Result<(), CliError> {
    let mut dim = None;
    let mut n = None;
    for field in line.trim_start_matches('#').split_whitespace() {
        if let Some(v) = field.strip_prefix("dim=") {
            dim = v.parse::<usize>().ok();
        } else if let Some(v) = field.strip_prefix("n=") {
            n = v.parse::<usize>().ok();
        }
    }
    if let Some(d) = dim {
        if d != grid.dim() {
            return Err(CliError::Parse(format!(
                "header declares dim={d}, grid has dim={}",
                grid.dim()
            )));
        }
    }
    if let Some(n) = n {
        if n != grid.points_per_axis() {
            return Err(CliError::Parse(format!(
                "header declares n={n}, grid has n={}",
                grid.points_per_axis()
            )));
        }
    }
    Ok(())
}

fn is_header(line: &str) -> bool {
    let t = line.trim_start_matches('#');
    line.starts_with('#') && (t.contains("dim=") || t.contains("n="))
}

pub fn parse_signal(text: &str, grid: &Grid) -> Result<GridFunction, CliError> {
    let n = grid.points_per_axis();
    let mut samples = Vec::with_capacity(grid.len());
    let mut rows = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end();
        if line.starts_with('#') {
            if is_header(line) {
                check_header(line, grid)?;
            }
            continue;
        }
        if line.trim().is_empty() {
            continue;
        }
        if grid.dim() == 1 {
            let value = match line.split_once(',') {
                None => Complex64::new(number(line, line_no, 1)?, 0.0),
                Some((re, im)) => Complex64::new(
                    number(re, line_no, 1)?,
                    number(im, line_no, column(line, re.len() + 1))?,
                ),
            };
            samples.push(value);
        } else {
            rows += 1;
            let mut offset = 0;
            let mut count = 0;
            for token in line.split(',') {
                let col = column(line, offset);
                let value = match token.split_once(':') {
                    None => Complex64::new(number(token, line_no, col)?, 0.0),
                    Some((re, im)) => Complex64::new(number(re, line_no, col)?, number(im, line_no, col)?),
                };
                samples.push(value);
                offset += token.len() + 1;
                count += 1;
            }
            if count != n {
                return Err(CliError::Parse(format!(
                    "line {line_no}: expected {n} values in a row, found {count}"
                )));
            }
        }
    }
    if grid.dim() == 2 && rows != n {
        return Err(CliError::Parse(format!("expected {n} rows, found {rows}")));
    }
    Ok(GridFunction::new(*grid, samples)?)
}

pub fn load_signal(path: &Path, grid: &Grid) -> Result<GridFunction, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_signal(&text, grid)
}

fn token(z: Complex64, sep: char, out: &mut String) {
    // `{:?}` prints the shortest representation that reads back exactly
    if z.im == 0.0 && z.im.is_sign_positive() {
        let _ = write!(out, "{:?}", z.re);
    } else {
        let _ = write!(out, "{:?}{sep}{:?}", z.re, z.im);
    }
}

pub fn format_signal(f: &GridFunction) -> String {
    let grid = f.grid();
    let n = grid.points_per_axis();
    let mut out = format!("# dim={} n={n}\n", grid.dim());
    if grid.dim() == 1 {
        for &z in f.samples() {
            token(z, ',', &mut out);
            out.push('\n');
        }
    } else {
        for row in f.samples().chunks(n) {
            for (i, &z) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                token(z, ':', &mut out);
            }
            out.push('\n');
        }
    }
    out
}

pub fn save_signal(path: &Path, f: &GridFunction) -> Result<(), CliError> {
    fs::write(path, format_signal(f)).map_err(|e| CliError::io(path, e))
}
