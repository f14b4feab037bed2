//! Exact dense linear algebra over a [`Field`].

use crate::field::Field;

/// Brings `rows` to reduced row echelon form in place and returns the pivot
/// column of every nonzero row, in order. Zero rows end up at the bottom.
pub fn rref<C: Field>(rows: &mut [Vec<C>]) -> Vec<usize> {
    let width = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv();
        for v in rows[r].iter_mut() {
            *v = v.clone() * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v = v.clone() - f.clone() * p;
            }
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}

/// Solution set of an affine system `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub enum Solution<C> {
    Unique(Vec<C>),
    /// Consistent with `unknowns - rank` free directions. `rows` holds the
    /// echelon form of the augmented matrix without zero rows.
    Underdetermined {
        rank: usize,
        rows: Vec<Vec<C>>,
    },
    Inconsistent,
}

/// Solves `A x = b` given the augmented rows `[A | b]` over `unknowns` columns.
pub fn solve_affine<C: Field>(mut rows: Vec<Vec<C>>, unknowns: usize) -> Solution<C> {
    debug_assert!(rows.iter().all(|r| r.len() == unknowns + 1));
    let pivots = rref(&mut rows);
    if pivots.last() == Some(&unknowns) {
        return Solution::Inconsistent;
    }
    let rank = pivots.len();
    rows.truncate(rank);
    if rank < unknowns {
        return Solution::Underdetermined { rank, rows };
    }
    Solution::Unique(rows.into_iter().map(|mut r| r.pop().expect("augmented")).collect())
}
