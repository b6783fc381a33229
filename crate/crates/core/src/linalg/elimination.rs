//! Fraction-free sparse row reduction over the integers.
//!
//! Rows are cleared of denominators once, then reduced against pivots with
//! `row <- b*row - a*pivot` followed by removal of the row content, so entries
//! never leave the integers and stay small on the sparse, unimodular-ish
//! boundary matrices this crate produces.

use num::{BigInt, Integer, One, Signed, Zero};

use super::matrix::{RationalMatrix, Q};

type IntRow = Vec<(usize, BigInt)>;

fn to_integer_row(row: &[(usize, Q)]) -> IntRow {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
    let mut out: IntRow = row
        .iter()
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect();
    remove_content(&mut out);
    out
}

fn remove_content(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
    if let Some((_, lead)) = row.first() {
        if lead.is_negative() {
            for (_, v) in row.iter_mut() {
                *v = -&*v;
            }
        }
    }
}

/// `b*row - a*pivot` where `a`, `b` are the entries of `row` and `pivot` at
/// column `col`, scaled down by their gcd.
fn eliminate(row: &IntRow, pivot: &IntRow, col: usize) -> IntRow {
    let a = lookup(row, col).expect("eliminate: row has no entry at col");
    let b = lookup(pivot, col).expect("eliminate: pivot has no entry at col");
    let g = a.gcd(b);
    let (fa, fb) = (a / &g, b / &g);
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        if j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0) {
            out.push((row[i].0, &fb * &row[i].1));
            i += 1;
        } else if i >= row.len() || pivot[j].0 < row[i].0 {
            out.push((pivot[j].0, -(&fa * &pivot[j].1)));
            j += 1;
        } else {
            let v = &fb * &row[i].1 - &fa * &pivot[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    remove_content(&mut out);
    out
}

fn lookup(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

/// Row echelon form built by inserting rows one at a time.
struct Echelon {
    // pivot row keyed by its leading column
    pivots: Vec<Option<IntRow>>,
    count: usize,
}

impl Echelon {
    fn new(cols: usize) -> Self {
        Echelon {
            pivots: vec![None; cols],
            count: 0,
        }
    }

    fn insert(&mut self, mut row: IntRow) -> bool {
        loop {
            let Some(&(lead, _)) = row.first() else {
                return false;
            };
            match &self.pivots[lead] {
                Some(pivot) => row = eliminate(&row, pivot, lead),
                None => {
                    self.pivots[lead] = Some(row);
                    self.count += 1;
                    return true;
                }
            }
        }
    }

    /// Back-substitutes so every pivot column is zero outside its pivot row.
    fn reduce(&mut self) {
        let pivot_cols: Vec<usize> = (0..self.pivots.len())
            .filter(|&c| self.pivots[c].is_some())
            .collect();
        for &p in pivot_cols.iter().rev() {
            let pivot = self.pivots[p].clone().expect("pivot present");
            for &other in &pivot_cols {
                if other >= p {
                    break;
                }
                let needs = self.pivots[other]
                    .as_ref()
                    .is_some_and(|r| lookup(r, p).is_some());
                if needs {
                    let r = self.pivots[other].take().expect("pivot present");
                    self.pivots[other] = Some(eliminate(&r, &pivot, p));
                }
            }
        }
    }
}

fn echelon_of(m: &RationalMatrix) -> Echelon {
    let mut rows: Vec<IntRow> = (0..m.rows())
        .map(|r| to_integer_row(m.row(r)))
        .filter(|r| !r.is_empty())
        .collect();
    // sparse rows first keeps fill-in down
    rows.sort_by_key(|r| (r.len(), r.first().map_or(0, |(c, _)| *c)));
    let mut ech = Echelon::new(m.cols());
    for row in rows {
        ech.insert(row);
    }
    ech
}

/// Exact rank over the rationals.
pub fn rank(m: &RationalMatrix) -> usize {
    if m.rows() > m.cols() {
        return echelon_of(&m.transpose()).count;
    }
    echelon_of(m).count
}

/// Basis of the right null space `{v : m v = 0}`; one vector per free column.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vec<Q>> {
    let mut ech = echelon_of(m);
    ech.reduce();
    let cols = m.cols();
    let mut basis = Vec::new();
    for free in 0..cols {
        if ech.pivots[free].is_some() {
            continue;
        }
        let mut v = vec![Q::zero(); cols];
        v[free] = Q::one();
        for (p, row) in ech.pivots.iter().enumerate() {
            let Some(row) = row else { continue };
            if let Some(entry) = lookup(row, free) {
                let lead = lookup(row, p).expect("pivot entry");
                v[p] = -Q::new(entry.clone(), lead.clone());
            }
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::q;

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&RationalMatrix::zeros(3, 4)), 0);
        assert_eq!(rank(&RationalMatrix::identity(5)), 5);
        assert_eq!(rank(&RationalMatrix::from_i64_rows(&[&[1, 2], &[2, 4]])), 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&RationalMatrix::identity(4)).is_empty());
        assert_eq!(kernel_basis(&RationalMatrix::zeros(3, 3)).len(), 3);
        let k = kernel_basis(&RationalMatrix::from_i64_rows(&[&[1, 1]]));
        assert_eq!(k.len(), 1);
        // proportional to (1, -1)
        assert_eq!(&k[0][0] + &k[0][1], q(0));
        assert!(k[0][0] != q(0));
    }

    #[test]
    fn rational_entries_are_cleared() {
        let m = RationalMatrix::from_dense(&[
            vec![Q::new(1.into(), 2.into()), Q::new(1.into(), 3.into())],
            vec![q(3), q(2)],
        ]);
        assert_eq!(rank(&m), 1);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Zero::is_zero));
    }
}
