//! Exact rational linear algebra: sparse matrices, rank and kernels, and a
//! simplex LP solver.

mod elimination;
mod matrix;
mod simplex;
pub mod triplet;

pub use elimination::{kernel_basis, rank};
pub use matrix::{q, q_frac, RationalMatrix, Q};
pub use simplex::{solve_lp, LinearProgram, LpOutcome};

/// Rank of `[a | b]`, used to compare column spaces.
pub fn column_spaces_equal(a: &RationalMatrix, b: &RationalMatrix) -> bool {
    let ra = rank(a);
    ra == rank(b) && rank(&a.hstack(b)) == ra
}
