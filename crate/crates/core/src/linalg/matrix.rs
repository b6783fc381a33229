use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Zero};

/// Exact rational scalar used throughout the crate.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Sparse exact matrix, stored row-major with sorted column indices.
///
/// No explicit zeros are ever stored, so structural equality is value
/// equality.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<(usize, Q)>>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "RationalMatrix({}x{}, nnz={})",
            self.rows,
            self.cols,
            self.nnz()
        )?;
        if self.rows <= 24 && self.cols <= 24 {
            for r in 0..self.rows {
                let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
                writeln!(f, "  [{}]", row.join(", "))?;
            }
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        RationalMatrix {
            rows: n,
            cols: n,
            data: (0..n).map(|i| vec![(i, Q::one())]).collect(),
        }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are
    /// summed and zeros dropped.
    ///
    /// Panics if an index is out of range.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Q)>,
    {
        let mut data: Vec<Vec<(usize, Q)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(
                r < rows && c < cols,
                "triplet ({r}, {c}) outside {rows}x{cols}"
            );
            data[r].push((c, v));
        }
        for row in &mut data {
            *row = normalize_row(std::mem::take(row));
        }
        RationalMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: usize, cols: usize, data: Vec<Vec<(usize, Q)>>) -> Self {
        assert_eq!(data.len(), rows);
        let data = data
            .into_iter()
            .map(|row| {
                debug_assert!(row.iter().all(|(c, _)| *c < cols));
                normalize_row(row)
            })
            .collect();
        RationalMatrix { rows, cols, data }
    }

    pub fn from_dense(dense: &[Vec<Q>]) -> Self {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        let data = dense
            .iter()
            .map(|row| {
                assert_eq!(row.len(), cols, "ragged dense matrix");
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(c, v)| (c, v.clone()))
                    .collect()
            })
            .collect();
        RationalMatrix { rows, cols, data }
    }

    pub fn from_i64_rows(dense: &[&[i64]]) -> Self {
        let rows: Vec<Vec<Q>> = dense
            .iter()
            .map(|r| r.iter().map(|&v| q(v)).collect())
            .collect();
        if rows.is_empty() {
            return RationalMatrix::zeros(0, 0);
        }
        Self::from_dense(&rows)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<Q>]) -> Self {
        let triplets = columns.iter().enumerate().flat_map(|(c, col)| {
            assert_eq!(col.len(), rows);
            col.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(r, v)| (r, c, v.clone()))
        });
        Self::from_triplets(rows, columns.len(), triplets)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    pub fn row(&self, r: usize) -> &[(usize, Q)] {
        &self.data[r]
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        match self.data[r].binary_search_by_key(&c, |(col, _)| *col) {
            Ok(i) => self.data[r][i].1.clone(),
            Err(_) => Q::zero(),
        }
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Q)> + '_ {
        self.data
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |(c, v)| (r, *c, v)))
    }

    pub fn to_dense(&self) -> Vec<Vec<Q>> {
        let mut out = vec![vec![Q::zero(); self.cols]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut data: Vec<Vec<(usize, Q)>> = vec![Vec::new(); self.cols];
        for (r, row) in self.data.iter().enumerate() {
            for (c, v) in row {
                data[*c].push((r, v.clone()));
            }
        }
        RationalMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && self
                .data
                .iter()
                .enumerate()
                .all(|(r, row)| row.len() == 1 && row[0].0 == r && row[0].1.is_one())
    }

    /// True when every column and every row holds exactly one entry equal to 1.
    pub fn is_permutation(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let mut seen = vec![false; self.cols];
        for row in &self.data {
            if row.len() != 1 || !row[0].1.is_one() || seen[row[0].0] {
                return false;
            }
            seen[row[0].0] = true;
        }
        true
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in mul_vec");
        self.data
            .iter()
            .map(|row| {
                let mut acc = Q::zero();
                for (c, a) in row {
                    if !v[*c].is_zero() {
                        acc += a * &v[*c];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, s: &Q) -> Self {
        if s.is_zero() {
            return RationalMatrix::zeros(self.rows, self.cols);
        }
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|row| row.iter().map(|(c, v)| (*c, v * s)).collect())
                .collect(),
        }
    }

    /// `[self | other]`
    pub fn hstack(&self, other: &RationalMatrix) -> Self {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| {
                let mut row = a.clone();
                row.extend(b.iter().map(|(c, v)| (c + self.cols, v.clone())));
                row
            })
            .collect();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            data,
        }
    }

    pub fn vstack(&self, other: &RationalMatrix) -> Self {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        RationalMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    /// Keeps only rows for which `keep(row)` holds; the others become zero.
    pub fn mask_rows<F: Fn(usize) -> bool>(&self, keep: F) -> Self {
        let data = self
            .data
            .iter()
            .enumerate()
            .map(|(r, row)| if keep(r) { row.clone() } else { Vec::new() })
            .collect();
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Returns the first entry where `self` and `other` differ.
    pub fn first_difference(&self, other: &RationalMatrix) -> Option<(usize, usize, Q, Q)> {
        if self.shape() != other.shape() {
            return Some((self.rows, self.cols, Q::zero(), Q::zero()));
        }
        for r in 0..self.rows {
            if self.data[r] != other.data[r] {
                let mut cols: Vec<usize> = self.data[r]
                    .iter()
                    .chain(&other.data[r])
                    .map(|(c, _)| *c)
                    .collect();
                cols.sort_unstable();
                for c in cols {
                    let (a, b) = (self.get(r, c), other.get(r, c));
                    if a != b {
                        return Some((r, c, a, b));
                    }
                }
            }
        }
        None
    }
}

fn normalize_row(mut row: Vec<(usize, Q)>) -> Vec<(usize, Q)> {
    row.sort_by_key(|(c, _)| *c);
    let mut out: Vec<(usize, Q)> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match out.last_mut() {
            Some((lc, lv)) if *lc == c => *lv += v,
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

fn merge_rows(a: &[(usize, Q)], b: &[(usize, Q)], sign: bool) -> Vec<(usize, Q)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            let v = if sign { b[j].1.clone() } else { -&b[j].1 };
            out.push((b[j].0, v));
            j += 1;
        } else {
            let v = if sign {
                &a[i].1 + &b[j].1
            } else {
                &a[i].1 - &b[j].1
            };
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl Add for &RationalMatrix {
    type Output = RationalMatrix;

    fn add(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| merge_rows(a, b, true))
                .collect(),
        }
    }
}

impl Sub for &RationalMatrix {
    type Output = RationalMatrix;

    fn sub(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        RationalMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| merge_rows(a, b, false))
                .collect(),
        }
    }
}

impl Neg for &RationalMatrix {
    type Output = RationalMatrix;

    fn neg(self) -> RationalMatrix {
        self.scale(&q(-1))
    }
}

impl Mul for &RationalMatrix {
    type Output = RationalMatrix;

    fn mul(self, rhs: &RationalMatrix) -> RationalMatrix {
        assert_eq!(
            self.cols, rhs.rows,
            "product of {}x{} and {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut acc: Vec<Option<Q>> = vec![None; rhs.cols];
        let mut touched: Vec<usize> = Vec::new();
        let data = self
            .data
            .iter()
            .map(|row| {
                for (k, a) in row {
                    for (c, b) in &rhs.data[*k] {
                        let prod = a * b;
                        match &mut acc[*c] {
                            Some(v) => *v += prod,
                            slot @ None => {
                                *slot = Some(prod);
                                touched.push(*c);
                            }
                        }
                    }
                }
                touched.sort_unstable();
                let out: Vec<(usize, Q)> = touched
                    .drain(..)
                    .filter_map(|c| acc[c].take().filter(|v| !v.is_zero()).map(|v| (c, v)))
                    .collect();
                out
            })
            .collect();
        RationalMatrix {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }
}
