//! Plain-text sparse triplet format.
//!
//! ```text
//! % rows cols nnz
//! 3 3 2
//! 0 0 1
//! 2 1 -1/2
//! ```
//!
//! Lines starting with `%` are comments. Indices are zero-based; values are
//! exact rationals written as `p` or `p/q`.

use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use super::matrix::{RationalMatrix, Q};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TripletError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("header promised {expected} entries, found {found}")]
    CountMismatch { expected: usize, found: usize },
}

pub fn write_triplets(m: &RationalMatrix) -> String {
    let mut out = String::new();
    out.push_str("% rows cols nnz\n");
    let _ = writeln!(out, "{} {} {}", m.rows(), m.cols(), m.nnz());
    for (r, c, v) in m.triplets() {
        let _ = writeln!(out, "{r} {c} {v}");
    }
    out
}

pub fn read_triplets(text: &str) -> Result<RationalMatrix, TripletError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let bad = |line: usize, message: &str| TripletError::Malformed {
        line,
        message: message.to_string(),
    };
    let (hline, header) = lines.next().ok_or_else(|| bad(0, "missing header"))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(usize::from_str)
        .collect::<Result<_, _>>()
        .map_err(|_| bad(hline, "header must be three integers"))?;
    let [rows, cols, nnz] = nums[..] else {
        return Err(bad(hline, "header must be three integers"));
    };
    let mut entries = Vec::with_capacity(nnz);
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [r, c, v] = parts[..] else {
            return Err(bad(ln, "expected `row col value`"));
        };
        let r: usize = r.parse().map_err(|_| bad(ln, "bad row index"))?;
        let c: usize = c.parse().map_err(|_| bad(ln, "bad column index"))?;
        let v: Q = v.parse().map_err(|_| bad(ln, "bad rational value"))?;
        if r >= rows || c >= cols {
            return Err(bad(ln, "index out of range"));
        }
        entries.push((r, c, v));
    }
    if entries.len() != nnz {
        return Err(TripletError::CountMismatch {
            expected: nnz,
            found: entries.len(),
        });
    }
    Ok(RationalMatrix::from_triplets(rows, cols, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{q, q_frac};

    #[test]
    fn round_trip() {
        let m = RationalMatrix::from_triplets(3, 2, vec![(0, 1, q(-3)), (2, 0, q_frac(5, 7))]);
        let text = write_triplets(&m);
        assert_eq!(read_triplets(&text).unwrap(), m);
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(read_triplets("1 1 1\n0 3 1\n").is_err());
        assert!(matches!(
            read_triplets("2 2 2\n0 0 1\n"),
            Err(TripletError::CountMismatch { .. })
        ));
    }
}
