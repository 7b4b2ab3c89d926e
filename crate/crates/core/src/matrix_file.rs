//! Plain-text matrix files.
//!
//! ```text
//! # optional comment lines and blank lines are ignored
//! 2 3
//! 1 0 -4
//! 0 1  7
//! ```
//!
//! The first line holds the dimensions `k n`; each of the next `k` lines
//! holds `n` base-10 integers separated by spaces or tabs. Writing uses the
//! `Display` impl of [`IntMatrix`].

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A whitespace-separated token with its 1-based column.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0;
    std::iter::from_fn(move || {
        let start = rest.find(|c| c != ' ' && c != '\t')?;
        let tail = &rest[start..];
        let len = tail.find([' ', '\t']).unwrap_or(tail.len());
        let tok = &tail[..len];
        let col = offset + start + 1;
        offset += start + len;
        rest = &tail[len..];
        Some((col, tok))
    })
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_integer(tok: &str, line: usize, column: usize) -> Result<BigInt> {
    let digits = tok.strip_prefix('-').unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(parse_err(line, column, format!("invalid integer {tok:?}")));
    }
    tok.parse()
        .map_err(|_| parse_err(line, column, format!("invalid integer {tok:?}")))
}

fn parse_dimension(tok: &str, line: usize, column: usize) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(v) if v > 0 && tok.bytes().all(|b| b.is_ascii_digit()) => Ok(v),
        _ => Err(parse_err(line, column, format!("expected a positive dimension, got {tok:?}"))),
    }
}

pub fn parse(text: &str) -> Result<IntMatrix> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| {
            let t = l.trim_matches([' ', '\t']);
            !t.is_empty() && !t.starts_with('#')
        });

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "missing header line"))?;
    let htoks: Vec<_> = tokens(header).collect();
    if htoks.len() != 2 {
        let col = htoks.get(2).map_or(1, |t| t.0);
        return Err(parse_err(hline, col, "header must contain exactly two integers: k n"));
    }
    let k = parse_dimension(htoks[0].1, hline, htoks[0].0)?;
    let n = parse_dimension(htoks[1].1, hline, htoks[1].0)?;

    let mut entries = Vec::with_capacity(k * n);
    let mut last_line = hline;
    for row in 0..k {
        let (lno, line) = lines.next().ok_or_else(|| {
            parse_err(last_line + 1, 1, format!("expected {k} rows, found {row}"))
        })?;
        last_line = lno;
        let mut count = 0;
        for (col, tok) in tokens(line) {
            if count == n {
                return Err(parse_err(lno, col, format!("row has more than {n} entries")));
            }
            entries.push(parse_integer(tok, lno, col)?);
            count += 1;
        }
        if count < n {
            return Err(parse_err(lno, line.len() + 1, format!("row has {count} entries, expected {n}")));
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(parse_err(lno, 1, format!("unexpected content after {k} rows")));
    }
    IntMatrix::new(k, n, entries)
}
