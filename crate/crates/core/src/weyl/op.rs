use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::{push_term, LaurentPoly};
use crate::error::{Error, Result};
use crate::exactlin::rational::falling_factorial;
use crate::exactlin::Rational;

/// Normally ordered monomial `x^a d^b`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeylMono {
    pub x: Vec<u32>,
    pub d: Vec<u32>,
}

impl WeylMono {
    pub fn one(n: usize) -> Self {
        WeylMono { x: vec![0; n], d: vec![0; n] }
    }

    pub fn degree(&self) -> u32 {
        self.x.iter().sum::<u32>() + self.d.iter().sum::<u32>()
    }

    pub fn d_degree(&self) -> u32 {
        self.d.iter().sum()
    }
}

/// Graded lexicographic on `(a, b)`.
impl Ord for WeylMono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.x.cmp(&other.x))
            .then_with(|| self.d.cmp(&other.d))
    }
}

impl PartialOrd for WeylMono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of the Weyl algebra `D_n` over the rationals, stored in normal
/// order (every `x` to the left of every `d`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WeylOp {
    n: usize,
    terms: BTreeMap<WeylMono, Rational>,
}

impl WeylOp {
    pub fn zero(n: usize) -> Self {
        WeylOp { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Rational) -> Self {
        Self::monomial(WeylMono::one(n), c)
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, Rational::one())
    }

    pub fn monomial(m: WeylMono, c: Rational) -> Self {
        let mut op = Self::zero(m.x.len());
        op.add_term(m, c);
        op
    }

    pub fn x(n: usize, i: usize) -> Self {
        let mut m = WeylMono::one(n);
        m.x[i] = 1;
        Self::monomial(m, Rational::one())
    }

    pub fn d(n: usize, i: usize) -> Self {
        let mut m = WeylMono::one(n);
        m.d[i] = 1;
        Self::monomial(m, Rational::one())
    }

    /// `theta_i = x_i d_i`.
    pub fn theta(n: usize, i: usize) -> Self {
        let mut m = WeylMono::one(n);
        m.x[i] = 1;
        m.d[i] = 1;
        Self::monomial(m, Rational::one())
    }

    /// `x^a` with `a` given as exponents.
    pub fn x_monomial(exps: &[u32]) -> Self {
        Self::monomial(WeylMono { x: exps.to_vec(), d: vec![0; exps.len()] }, Rational::one())
    }

    /// `d^b` with `b` given as exponents.
    pub fn d_monomial(exps: &[u32]) -> Self {
        Self::monomial(WeylMono { x: vec![0; exps.len()], d: exps.to_vec() }, Rational::one())
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&WeylMono, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &WeylMono) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: WeylMono, c: Rational) {
        debug_assert_eq!(m.x.len(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> WeylOp {
        if c.is_zero() {
            return WeylOp::zero(self.n);
        }
        WeylOp { n: self.n, terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect() }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(WeylMono::degree).max()
    }

    /// Highest canonical term, if any.
    pub fn leading(&self) -> Option<(&WeylMono, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Normally ordered product; fails if the ambient counts differ.
    pub fn try_mul(&self, rhs: &WeylOp) -> Result<WeylOp> {
        if self.n != rhs.n {
            return Err(Error::DimensionMismatch(format!("D_{} * D_{}", self.n, rhs.n)));
        }
        let mut out = WeylOp::zero(self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca * cb;
                for_each_leibniz_term(ma, mb, |m, k| out.add_term(m, &c * Rational::from_integer(k)));
            }
        }
        Ok(out)
    }

    /// Image under the automorphism `x_j -> x_j + c`, `d_j -> d_j`.
    pub fn substitute_x_shift(&self, j: usize, c: &Rational) -> WeylOp {
        let mut out = WeylOp::zero(self.n);
        for (m, a) in &self.terms {
            let e = m.x[j];
            // (x_j + c)^e = sum_t binom(e, t) c^(e-t) x_j^t
            let mut binom = BigInt::one();
            for t in (0..=e).rev() {
                let mut nm = m.clone();
                nm.x[j] = t;
                let power = num_traits::pow(c.clone(), (e - t) as usize);
                out.add_term(nm, a * Rational::from_integer(binom.clone()) * power);
                // binom(e, t-1) = binom(e, t) * t / (e - t + 1)
                binom = binom * BigInt::from(t) / BigInt::from(e - t + 1);
            }
        }
        out
    }

    /// Sets `x_j = value` in an operator not involving `d_j`.
    pub fn specialize_x(&self, j: usize, value: &Rational) -> Result<WeylOp> {
        let mut out = WeylOp::zero(self.n);
        for (m, a) in &self.terms {
            if m.d[j] != 0 {
                return Err(Error::Internal(format!("specializing x{} in a term containing dx{}", j + 1, j + 1)));
            }
            let mut nm = m.clone();
            let e = std::mem::replace(&mut nm.x[j], 0);
            out.add_term(nm, a * num_traits::pow(value.clone(), e as usize));
        }
        Ok(out)
    }

    /// Drops variables not listed in `keep` (their exponents must be zero).
    pub fn restrict_vars(&self, keep: &[usize]) -> Result<WeylOp> {
        let mut out = WeylOp::zero(keep.len());
        for (m, a) in &self.terms {
            for i in 0..self.n {
                if !keep.contains(&i) && (m.x[i] != 0 || m.d[i] != 0) {
                    return Err(Error::Internal(format!("variable {} still present", i + 1)));
                }
            }
            let nm = WeylMono {
                x: keep.iter().map(|&i| m.x[i]).collect(),
                d: keep.iter().map(|&i| m.d[i]).collect(),
            };
            out.add_term(nm, a.clone());
        }
        Ok(out)
    }

    /// Embeds into `D_n` with variable `i` mapped to `map[i]`.
    pub fn embed(&self, n: usize, map: &[usize]) -> WeylOp {
        let mut out = WeylOp::zero(n);
        for (m, a) in &self.terms {
            let mut nm = WeylMono::one(n);
            for i in 0..self.n {
                nm.x[map[i]] = m.x[i];
                nm.d[map[i]] = m.d[i];
            }
            out.add_term(nm, a.clone());
        }
        out
    }

    /// Weight `u.a + v.b` of each term; `None` for the zero operator.
    pub fn max_weight(&self, u: &[i64], v: &[i64]) -> Option<i64> {
        self.terms.keys().map(|m| mono_weight(m, u, v)).max()
    }

    /// Sum of the terms of maximal `(u, v)`-weight.
    pub fn initial_form(&self, u: &[i64], v: &[i64]) -> WeylOp {
        let Some(top) = self.max_weight(u, v) else { return self.clone() };
        WeylOp {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| mono_weight(m, u, v) == top)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Action on a Laurent polynomial: `x^a d^b . x^e = prod falling(e_i, b_i) x^(e - b + a)`.
    pub fn act(&self, f: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::new();
        for (e, c) in &f.terms {
            assert_eq!(e.len(), self.n);
            for (m, a) in &self.terms {
                let mut k = BigInt::one();
                for i in 0..self.n {
                    k *= falling_factorial(e[i], m.d[i]);
                    if k.is_zero() {
                        break;
                    }
                }
                if k.is_zero() {
                    continue;
                }
                let ne: Vec<i64> = (0..self.n).map(|i| e[i] - m.d[i] as i64 + m.x[i] as i64).collect();
                out.add_term(ne, a * c * Rational::from_integer(k));
            }
        }
        out
    }

    /// Canonical rendering: descending canonical order, `coeff*x1^a1*...*dxn^bn`.
    pub fn render(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let mut factors = Vec::new();
            for (name, exps) in [("x", &m.x), ("dx", &m.d)] {
                for (i, &k) in exps.iter().enumerate() {
                    match k {
                        0 => {}
                        1 => factors.push(format!("{}{}", name, i + 1)),
                        _ => factors.push(format!("{}{}^{}", name, i + 1, k)),
                    }
                }
            }
            push_term(&mut out, idx == 0, c, &factors);
        }
        out
    }
}

pub(crate) fn mono_weight(m: &WeylMono, u: &[i64], v: &[i64]) -> i64 {
    m.x.iter().zip(u).map(|(&a, &w)| a as i64 * w).sum::<i64>()
        + m.d.iter().zip(v).map(|(&b, &w)| b as i64 * w).sum::<i64>()
}

/// Leibniz rule for `x^a d^b * x^c d^e`:
/// `sum_k prod_i binom(b_i,k_i) binom(c_i,k_i) k_i! x^(a+c-k) d^(b+e-k)`.
pub(crate) fn for_each_leibniz_term(lhs: &WeylMono, rhs: &WeylMono, mut f: impl FnMut(WeylMono, BigInt)) {
    let n = lhs.x.len();
    // per-variable options (k_i, factor)
    let options: Vec<Vec<(u32, BigInt)>> = (0..n)
        .map(|i| {
            let top = lhs.d[i].min(rhs.x[i]);
            let mut v = Vec::with_capacity(top as usize + 1);
            let mut factor = BigInt::one();
            for k in 0..=top {
                if k > 0 {
                    // binom(b,k) binom(c,k) k! from the k-1 value
                    factor = factor * BigInt::from(lhs.d[i] - k + 1) * BigInt::from(rhs.x[i] - k + 1) / BigInt::from(k);
                }
                v.push((k, factor.clone()));
            }
            v
        })
        .collect();
    let mut idx = vec![0usize; n];
    loop {
        let mut m = WeylMono::one(n);
        let mut coef = BigInt::one();
        for i in 0..n {
            let (k, ref fac) = options[i][idx[i]];
            m.x[i] = lhs.x[i] + rhs.x[i] - k;
            m.d[i] = lhs.d[i] + rhs.d[i] - k;
            if idx[i] > 0 {
                coef *= fac;
            }
        }
        f(m, coef);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            idx[i] += 1;
            if idx[i] < options[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

impl fmt::Display for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for WeylOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylOp[D_{}]({})", self.n, self.render())
    }
}

impl Add for &WeylOp {
    type Output = WeylOp;
    fn add(self, rhs: &WeylOp) -> WeylOp {
        assert_eq!(self.n, rhs.n, "ambient dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WeylOp {
    type Output = WeylOp;
    fn sub(self, rhs: &WeylOp) -> WeylOp {
        self + &(-rhs)
    }
}

impl Neg for &WeylOp {
    type Output = WeylOp;
    fn neg(self) -> WeylOp {
        WeylOp { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

/// Panics on dimension mismatch; use [`WeylOp::try_mul`] for a checked product.
impl Mul for &WeylOp {
    type Output = WeylOp;
    fn mul(self, rhs: &WeylOp) -> WeylOp {
        self.try_mul(rhs).expect("ambient dimension mismatch")
    }
}
