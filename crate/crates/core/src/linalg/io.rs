//! Plain-text matrix format.
//!
//! ```text
//! # optional comments
//! m n
//! a11 a12 ... a1n
//! ...
//! am1 ... amn
//! ```
//!
//! A real entry is a decimal literal; a complex entry is `(re,im)`. Blank
//! lines and `#` comments are ignored, LF and CRLF line endings are accepted.

use std::fmt::Write as _;

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Splits a line into entry tokens; a parenthesized group is one token even
/// if it contains spaces.
fn tokenize(line: &str, lineno: usize) -> Result<Vec<String>> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let mut depth = 0usize;
    for ch in line.chars() {
        match ch {
            '(' => {
                if depth > 0 {
                    return Err(parse_err(lineno, "nested parenthesis"));
                }
                depth = 1;
                current.push(ch);
            }
            ')' => {
                if depth == 0 {
                    return Err(parse_err(lineno, "unbalanced ')'"));
                }
                depth = 0;
                current.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
            }
            c if c.is_whitespace() => {}
            c => current.push(c),
        }
    }
    if depth != 0 {
        return Err(parse_err(lineno, "unterminated '('"));
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    Ok(tokens)
}

fn parse_real(tok: &str, lineno: usize) -> Result<f64> {
    let v: f64 = tok.parse().map_err(|_| parse_err(lineno, format!("invalid number '{tok}'")))?;
    if !v.is_finite() {
        return Err(parse_err(lineno, format!("non-finite entry '{tok}'")));
    }
    Ok(v)
}

fn parse_entry(tok: &str, lineno: usize) -> Result<Complex64> {
    if let Some(inner) = tok.strip_prefix('(') {
        let inner = inner
            .strip_suffix(')')
            .ok_or_else(|| parse_err(lineno, format!("malformed complex entry '{tok}'")))?;
        let (re, im) = inner
            .split_once(',')
            .ok_or_else(|| parse_err(lineno, format!("complex entry '{tok}' needs 're,im'")))?;
        Ok(Complex64::new(parse_real(re, lineno)?, parse_real(im, lineno)?))
    } else {
        Ok(Complex64::new(parse_real(tok, lineno)?, 0.0))
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
}

pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut lines = text
        .split('\n')
        .enumerate()
        .map(|(i, l)| (i + 1, strip_comment(l.strip_suffix('\r').unwrap_or(l)).trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing 'm n' header"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(parse_err(hline, "header must be 'm n'"));
    }
    let parse_dim = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(parse_err(hline, format!("invalid dimension '{s}'"))),
        }
    };
    let (m, n) = (parse_dim(dims[0])?, parse_dim(dims[1])?);

    let mut data = Vec::with_capacity(m.saturating_mul(n).min(1 << 24));
    let mut rows_read = 0;
    for (lineno, line) in lines {
        if rows_read == m {
            return Err(parse_err(lineno, format!("more than {m} rows")));
        }
        let toks = tokenize(line, lineno)?;
        if toks.len() != n {
            return Err(parse_err(lineno, format!("expected {n} entries, found {}", toks.len())));
        }
        for t in &toks {
            data.push(parse_entry(t, lineno)?);
        }
        rows_read += 1;
    }
    if rows_read != m {
        return Err(parse_err(hline, format!("expected {m} rows, found {rows_read}")));
    }
    ComplexMatrix::new(m, n, data)
}

/// Serializes with shortest round-trip float formatting, so
/// `parse_matrix(&format_matrix(a)) == a` entrywise.
pub fn format_matrix(a: &ComplexMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", a.rows(), a.cols());
    for i in 0..a.rows() {
        let row: Vec<String> = a
            .row(i)
            .iter()
            .map(|z| if z.im == 0.0 { format!("{}", z.re) } else { format!("({},{})", z.re, z.im) })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
