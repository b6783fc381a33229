//! Exact two-phase simplex with Bland's anti-cycling rule.
//!
//! Problems are stated as: maximize `c·x` subject to `A x <= b`, `C x = d`,
//! `x >= 0`. Free variables are handled by the caller via the usual
//! `x = x⁺ - x⁻` split.

use super::matrix::Q;
use num::{One, Signed, Zero};

#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    pub objective: Vec<Q>,
    /// Rows `(a, b)` meaning `a·x <= b`.
    pub upper: Vec<(Vec<Q>, Q)>,
    /// Rows `(a, b)` meaning `a·x = b`.
    pub equal: Vec<(Vec<Q>, Q)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, vertex: Vec<Q> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Q> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(objective: Vec<Q>) -> Self {
        LinearProgram {
            objective,
            ..Default::default()
        }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_upper(&mut self, row: Vec<Q>, rhs: Q) {
        assert_eq!(row.len(), self.num_vars());
        self.upper.push((row, rhs));
    }

    pub fn add_equal(&mut self, row: Vec<Q>, rhs: Q) {
        assert_eq!(row.len(), self.num_vars());
        self.equal.push((row, rhs));
    }

    /// True when `x` satisfies every constraint exactly.
    pub fn is_feasible(&self, x: &[Q]) -> bool {
        x.len() == self.num_vars()
            && x.iter().all(|v| !v.is_negative())
            && self.upper.iter().all(|(a, b)| dot(a, x) <= *b)
            && self.equal.iter().all(|(a, b)| dot(a, x) == *b)
    }

    pub fn evaluate(&self, x: &[Q]) -> Q {
        dot(&self.objective, x)
    }
}

fn dot(a: &[Q], x: &[Q]) -> Q {
    a.iter()
        .zip(x)
        .filter(|(ai, xi)| !ai.is_zero() && !xi.is_zero())
        .fold(Q::zero(), |acc, (ai, xi)| acc + ai * xi)
}

struct Tableau {
    // m rows of length ncols + 1; the last column is the right-hand side
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Q {
        &self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost·x` over the columns allowed by `allowed`.
    /// Returns false when unbounded.
    fn optimize(&mut self, cost: &[Q], allowed: &dyn Fn(usize) -> bool) -> bool {
        loop {
            // Bland: lowest-index column with positive reduced cost
            let entering = (0..self.ncols).filter(|&j| allowed(j)).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() && !cost[b].is_zero() {
                        reduced -= &cost[b] * &self.rows[i][j];
                    }
                }
                reduced.is_positive()
            });
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(Q, usize, usize)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                };
                if better {
                    best = Some((ratio, i, self.basis[i]));
                }
            }
            let Some((_, row, _)) = best else {
                return false;
            };
            self.pivot(row, col);
        }
    }

    fn value(&self, cost: &[Q]) -> Q {
        self.basis
            .iter()
            .enumerate()
            .fold(Q::zero(), |acc, (i, &b)| acc + &cost[b] * self.rhs(i))
    }
}

pub fn solve_lp(lp: &LinearProgram) -> LpOutcome {
    let n = lp.num_vars();
    let n_slack = lp.upper.len();
    let m = lp.upper.len() + lp.equal.len();

    // Assemble rows with slacks, flipping signs so every rhs is >= 0.
    let mut raw: Vec<(Vec<Q>, Q, bool)> = Vec::with_capacity(m);
    for (k, (a, b)) in lp.upper.iter().enumerate() {
        let mut row = a.clone();
        row.resize(n + n_slack, Q::zero());
        row[n + k] = Q::one();
        if b.is_negative() {
            row.iter_mut().for_each(|v| *v = -&*v);
            raw.push((row, -b, true));
        } else {
            raw.push((row, b.clone(), false));
        }
    }
    for (a, b) in &lp.equal {
        let mut row = a.clone();
        row.resize(n + n_slack, Q::zero());
        if b.is_negative() {
            row.iter_mut().for_each(|v| *v = -&*v);
            raw.push((row, -b, true));
        } else {
            raw.push((row, b.clone(), true));
        }
    }
    let needs_art: Vec<usize> = raw
        .iter()
        .enumerate()
        .filter(|(i, (_, _, flipped))| *flipped || *i >= n_slack)
        .map(|(i, _)| i)
        .collect();
    let n_art = needs_art.len();
    let ncols = n + n_slack + n_art;
    let first_art = n + n_slack;

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (i, (mut row, rhs, _)) in raw.into_iter().enumerate() {
        row.resize(ncols + 1, Q::zero());
        match needs_art.iter().position(|&r| r == i) {
            Some(k) => {
                row[first_art + k] = Q::one();
                basis.push(first_art + k);
            }
            None => basis.push(n + i),
        }
        row[ncols] = rhs;
        rows.push(row);
    }
    let mut tab = Tableau { rows, basis, ncols };

    if n_art > 0 {
        let phase1: Vec<Q> = (0..ncols)
            .map(|j| if j >= first_art { -Q::one() } else { Q::zero() })
            .collect();
        tab.optimize(&phase1, &|_| true);
        if !tab.value(&phase1).is_zero() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < tab.rows.len() {
            if tab.basis[i] >= first_art {
                match (0..first_art).find(|&j| !tab.rows[i][j].is_zero()) {
                    Some(j) => tab.pivot(i, j),
                    None => {
                        tab.rows.remove(i);
                        tab.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = lp.objective.clone();
    cost.resize(ncols, Q::zero());
    if !tab.optimize(&cost, &|j| j < first_art) {
        return LpOutcome::Unbounded;
    }
    let mut vertex = vec![Q::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            vertex[b] = tab.rhs(i).clone();
        }
    }
    let value = lp.evaluate(&vertex);
    LpOutcome::Optimal { value, vertex }
}
