//! Smith and Hermite normal forms, Gale duals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{abs_lt, IntMatrix};
use crate::error::{Error, Result};

/// `U * M * V = S` with `U`, `V` unimodular and `S` diagonal, `d_1 | d_2 | ...`.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl Snf {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s[(i, i)].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);

    for t in 0..r.min(c) {
        // smallest nonzero entry in the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..r {
            for j in t..c {
                if !s[(i, j)].is_zero() && best.map_or(true, |(bi, bj)| abs_lt(&s[(i, j)], &s[(bi, bj)])) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        s.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            let mut changed = false;
            for i in t + 1..r {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !s[(i, t)].is_zero() {
                    s.swap_rows(t, i);
                    u.swap_rows(t, i);
                    changed = true;
                }
            }
            for j in t + 1..c {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                if !s[(t, j)].is_zero() {
                    s.swap_cols(t, j);
                    v.swap_cols(t, j);
                    changed = true;
                }
            }
            if changed {
                continue;
            }
            // divisibility: pull in any row whose entries the pivot does not divide
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !s[(i, j)].is_multiple_of(&s[(t, t)])));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    Snf { u, s, v }
}

/// Row-style Hermite normal form `H = W * M` with `W` unimodular.
///
/// Pivots are positive, entries above each pivot lie in `[0, pivot)`, zero rows last.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let (r, c) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut row = 0;
    for col in 0..c {
        if row == r {
            break;
        }
        // gcd-combine all entries of this column below `row` into `row`
        loop {
            let nz: Vec<usize> = (row..r).filter(|&i| !h[(i, col)].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by(|&&a, &&b| h[(a, col)].abs().cmp(&h[(b, col)].abs())).unwrap();
            h.swap_rows(row, p);
            let mut done = true;
            for i in row + 1..r {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = -h[(i, col)].div_floor(&h[(row, col)]);
                h.add_row_multiple(i, row, &q);
                if !h[(i, col)].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(row, col)].is_zero() {
            continue;
        }
        if h[(row, col)].is_negative() {
            h.negate_row(row);
        }
        for i in 0..row {
            let q = -h[(i, col)].div_floor(&h[(row, col)]);
            h.add_row_multiple(i, row, &q);
        }
        row += 1;
    }
    h
}

/// Integer matrix `A` (d x n, d = n - m) with `A B = 0` whose columns span `Z^d`.
///
/// The kernel basis is put in Hermite normal form so the output is deterministic.
pub fn gale_dual(b: &IntMatrix) -> Result<IntMatrix> {
    let (n, m) = (b.rows(), b.cols());
    let snf = smith_normal_form(&b.transpose());
    let rank = snf.rank();
    if rank < m {
        return Err(Error::RankDeficient { rank, expected: m });
    }
    // U B^T V = S, so the trailing n - m columns of V span the integer kernel of B^T
    let kernel_cols: Vec<usize> = (m..n).collect();
    let a = snf.v.select_cols(&kernel_cols).transpose();
    Ok(hermite_normal_form(&a))
}

/// Sum over rows: the k-th entry is the sum of column k.
pub fn row_sums(b: &IntMatrix) -> Vec<BigInt> {
    (0..b.cols()).map(|k| b.column(k).into_iter().sum()).collect()
}
