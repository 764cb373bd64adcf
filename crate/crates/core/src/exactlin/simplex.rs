//! Exact-rational phase-one simplex (Bland's rule) and the nonnegative
//! column-span test built on it.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::rational::{denominator_lcm, Rational};

/// Finds `y >= 0` with `A y = b`, or `None` if infeasible.
///
/// Dense tableau, artificial variables for every row, Bland's smallest-index
/// rule for both entering and leaving variables.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let nvars = a.first().map_or(0, Vec::len);
    let width = nvars + rows;
    // tableau rows: [coeffs | artificials | rhs]
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(rows);
    for i in 0..rows {
        let flip = b[i].is_negative();
        let mut row: Vec<Rational> = a[i].iter().map(|x| if flip { -x } else { x.clone() }).collect();
        row.extend((0..rows).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
        row.push(if flip { -&b[i] } else { b[i].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (nvars..width).collect();
    // reduced costs of the phase-one objective: minimise the sum of artificials
    let mut cost: Vec<Rational> = vec![Rational::zero(); width + 1];
    for row in &t {
        for j in 0..nvars {
            cost[j] -= &row[j];
        }
        cost[width] -= &row[width];
    }

    loop {
        let Some(enter) = (0..width).find(|&j| cost[j].is_negative()) else { break };
        let mut leave: Option<(usize, Rational)> = None;
        for i in 0..rows {
            if t[i][enter].is_positive() {
                let ratio = &t[i][width] / &t[i][enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // phase one is bounded below by zero, so an entering column always has a pivot row
        let (pr, _) = leave.expect("phase-one simplex unbounded");
        let inv = t[pr][enter].recip();
        for x in t[pr].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != pr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        if !cost[enter].is_zero() {
            let f = cost[enter].clone();
            for (x, p) in cost.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        basis[pr] = enter;
    }

    if !cost[width].is_zero() {
        return None;
    }
    let mut y = vec![Rational::zero(); nvars];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < nvars {
            y[bv] = t[i][width].clone();
        }
    }
    Some(y)
}

/// Result of the nonnegative column-span test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonnegVerdict {
    pub exists: bool,
    /// Integer combination `c` with `B c = v`.
    pub combination: Option<Vec<BigInt>>,
    /// Nonzero `v >= 0` in the column span.
    pub witness: Option<Vec<BigInt>>,
}

/// Decides whether the column span of `B` contains a nonzero vector with all
/// entries nonnegative.
///
/// For each row `i` it solves the LP feasibility problem `B c >= 0`,
/// `(B c)_i >= 1`. A rational solution is scaled to an integer witness, which is
/// checked by direct multiplication before it is returned.
pub fn has_nonneg_kernel_vector(b: &IntMatrix) -> NonnegVerdict {
    let (n, m) = (b.rows(), b.cols());
    let br = b.to_rational();
    for i in 0..n {
        // variables: c+ (m), c- (m), slack s (n); B c+ - B c- - s = e_i
        let mut a = vec![vec![Rational::zero(); 2 * m + n]; n];
        for r in 0..n {
            for k in 0..m {
                a[r][k] = br[r][k].clone();
                a[r][m + k] = -&br[r][k];
            }
            a[r][2 * m + r] = -Rational::one();
        }
        let rhs: Vec<Rational> = (0..n).map(|r| if r == i { Rational::one() } else { Rational::zero() }).collect();
        if let Some(y) = feasible_point(&a, &rhs) {
            let c: Vec<Rational> = (0..m).map(|k| &y[k] - &y[m + k]).collect();
            let scale = Rational::from_integer(denominator_lcm(c.iter()));
            let c_int: Vec<BigInt> = c.iter().map(|x| (x * &scale).to_integer()).collect();
            let v = b.mul_vec(&c_int);
            assert!(
                v.iter().all(|x| !x.is_negative()) && v.iter().any(|x| !x.is_zero()),
                "simplex produced an invalid witness"
            );
            return NonnegVerdict { exists: true, combination: Some(c_int), witness: Some(v) };
        }
    }
    NonnegVerdict { exists: false, combination: None, witness: None }
}
