use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::op::{WeylMono, WeylOp};
use super::poly::Poly;
use crate::exactlin::Rational;

/// Commutative polynomial in `theta_1, ..., theta_n` where `theta_i = x_i d_i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ThetaPoly(pub Poly);

impl ThetaPoly {
    pub fn zero(n: usize) -> Self {
        ThetaPoly(Poly::zero(n))
    }

    pub fn one(n: usize) -> Self {
        ThetaPoly(Poly::one(n))
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        ThetaPoly(Poly::constant(n, c))
    }

    pub fn theta(n: usize, i: usize) -> Self {
        ThetaPoly(Poly::var(n, i))
    }

    /// `c + sum_i coeffs[i] theta_i`.
    pub fn linear(coeffs: &[Rational], c: Rational) -> Self {
        ThetaPoly(Poly::linear(coeffs, c))
    }

    pub fn nvars(&self) -> usize {
        self.0.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn degree(&self) -> u32 {
        self.0.total_degree().unwrap_or(0)
    }

    /// `t(theta + v)`.
    pub fn shift(&self, v: &[i64]) -> ThetaPoly {
        let v: Vec<Rational> = v.iter().map(|&k| Rational::from_integer(k.into())).collect();
        ThetaPoly(self.0.shift(&v))
    }

    /// Evaluates at integer theta values, i.e. the eigenvalue on `x^u`.
    pub fn eval_int(&self, u: &[i64]) -> Rational {
        let pt: Vec<Rational> = u.iter().map(|&k| Rational::from_integer(k.into())).collect();
        self.0.eval(&pt)
    }

    /// Normally ordered Weyl operator with `theta_i = x_i d_i`.
    ///
    /// Uses `theta^k = sum_j S(k, j) x^j d^j` with Stirling numbers of the second kind.
    pub fn to_weyl(&self) -> WeylOp {
        let n = self.nvars();
        let maxdeg = (0..n).map(|i| self.0.degree_in(i)).max().unwrap_or(0) as usize;
        let stirling = stirling2_table(maxdeg);
        let mut out = WeylOp::zero(n);
        for (e, c) in self.0.terms() {
            // product over variables of sum_j S(e_i, j) x_i^j d_i^j; variables are independent
            let mut acc: Vec<(Vec<u32>, BigInt)> = vec![(vec![0; n], BigInt::one())];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let mut next = Vec::new();
                for (ex, co) in &acc {
                    for j in 1..=k as usize {
                        let s = &stirling[k as usize][j];
                        if s.is_zero() {
                            continue;
                        }
                        let mut ne = ex.clone();
                        ne[i] = j as u32;
                        next.push((ne, co * s));
                    }
                }
                acc = next;
            }
            for (ex, co) in acc {
                out.add_term(WeylMono { x: ex.clone(), d: ex }, c * Rational::from_integer(co));
            }
        }
        out
    }

    /// Inverse of [`ThetaPoly::to_weyl`]: succeeds iff every term is `x^a d^a`.
    ///
    /// Uses `x^k d^k = theta (theta - 1) ... (theta - k + 1)`.
    pub fn from_weyl(op: &WeylOp) -> Option<ThetaPoly> {
        let n = op.nvars();
        let mut out = Poly::zero(n);
        for (m, c) in op.terms() {
            if m.x != m.d {
                return None;
            }
            let mut t = Poly::constant(n, c.clone());
            for (i, &k) in m.x.iter().enumerate() {
                for l in 0..k {
                    let f = &Poly::var(n, i) - &Poly::constant(n, Rational::from_integer(l.into()));
                    t = &t * &f;
                }
            }
            out = &out + &t;
        }
        Some(ThetaPoly(out))
    }

    pub fn render(&self) -> String {
        let names: Vec<String> = (1..=self.nvars()).map(|i| format!("t{i}")).collect();
        self.0.render(&names)
    }
}

/// `S(k, j)` for `0 <= j <= k <= max`.
fn stirling2_table(max: usize) -> Vec<Vec<BigInt>> {
    let mut s = vec![vec![BigInt::zero(); max + 1]; max + 1];
    s[0][0] = BigInt::one();
    for k in 1..=max {
        for j in 1..=k {
            s[k][j] = BigInt::from(j) * &s[k - 1][j] + &s[k - 1][j - 1];
        }
    }
    s
}

/// Whether the operator is a theta-polynomial.
pub fn weyl_is_theta(op: &WeylOp) -> Option<ThetaPoly> {
    ThetaPoly::from_weyl(op)
}

pub fn theta_to_weyl(t: &ThetaPoly) -> WeylOp {
    t.to_weyl()
}

impl Add for &ThetaPoly {
    type Output = ThetaPoly;
    fn add(self, rhs: &ThetaPoly) -> ThetaPoly {
        ThetaPoly(&self.0 + &rhs.0)
    }
}

impl Sub for &ThetaPoly {
    type Output = ThetaPoly;
    fn sub(self, rhs: &ThetaPoly) -> ThetaPoly {
        ThetaPoly(&self.0 - &rhs.0)
    }
}

impl Mul for &ThetaPoly {
    type Output = ThetaPoly;
    fn mul(self, rhs: &ThetaPoly) -> ThetaPoly {
        ThetaPoly(&self.0 * &rhs.0)
    }
}

impl Neg for &ThetaPoly {
    type Output = ThetaPoly;
    fn neg(self) -> ThetaPoly {
        ThetaPoly(-&self.0)
    }
}
