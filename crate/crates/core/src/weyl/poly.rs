//! Sparse commutative polynomials with rational coefficients.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::exactlin::{format_rational, Rational};

/// Commutative polynomial in `nvars` indeterminates.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Vec<u32>, c: Rational) -> Self {
        let mut p = Self::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// Affine form `c + sum_i coeffs[i] * v_i`.
    pub fn linear(coeffs: &[Rational], c: Rational) -> Self {
        let n = coeffs.len();
        let mut p = Self::constant(n, c);
        for (i, a) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, a.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: Rational) {
        debug_assert_eq!(exps.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
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

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.nvars), |acc, _| &acc * self)
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars);
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(point).fold(c.clone(), |acc, (&k, x)| acc * num_traits::pow(x.clone(), k as usize))
            })
            .sum()
    }

    /// Replaces variable `i` by the polynomial `q` (same ring).
    pub fn substitute(&self, i: usize, q: &Poly) -> Poly {
        assert_eq!(q.nvars, self.nvars);
        let mut powers: Vec<Poly> = vec![Poly::one(self.nvars)];
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            while powers.len() <= e[i] as usize {
                let next = powers.last().unwrap() * q;
                powers.push(next);
            }
            let mut rest = e.clone();
            rest[i] = 0;
            out = &out + &(&Poly::monomial(rest, c.clone()) * &powers[e[i] as usize]);
        }
        out
    }

    /// `t(v + shift)`.
    pub fn shift(&self, shift: &[Rational]) -> Poly {
        assert_eq!(shift.len(), self.nvars);
        let mut out = self.clone();
        for (i, s) in shift.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            let lin = &Poly::var(self.nvars, i) + &Poly::constant(self.nvars, s.clone());
            out = out.substitute(i, &lin);
        }
        out
    }

    /// Quotient `h` with `self - self|_{v_i = s} = (v_i - s) h`; `s` must not involve `v_i`.
    pub fn divided_difference(&self, i: usize, s: &Poly) -> Poly {
        assert_eq!(s.degree_in(i), 0);
        let n = self.nvars;
        let vi = Poly::var(n, i);
        let mut s_pows = vec![Poly::one(n)];
        let mut vi_pows = vec![Poly::one(n)];
        let mut h = Poly::zero(n);
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            if k == 0 {
                continue;
            }
            while s_pows.len() < k {
                let next = s_pows.last().unwrap() * s;
                s_pows.push(next);
                let next = vi_pows.last().unwrap() * &vi;
                vi_pows.push(next);
            }
            let mut rest = e.clone();
            rest[i] = 0;
            let coef = Poly::monomial(rest, c.clone());
            for t in 0..k {
                h = &h + &(&(&coef * &vi_pows[t]) * &s_pows[k - 1 - t]);
            }
        }
        h
    }

    /// Re-embeds into `nvars` indeterminates; variable `i` goes to `map[i]`.
    pub fn remap(&self, nvars: usize, map: &[usize]) -> Poly {
        let mut out = Poly::zero(nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[map[i]] += k;
            }
            out.add_term(ne, c.clone());
        }
        out
    }

    /// Renders with the given variable names, highest total degree first.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut sorted: Vec<(&Vec<u32>, &Rational)> = self.terms.iter().collect();
        sorted.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (idx, (e, c)) in sorted.into_iter().enumerate() {
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
                .collect();
            push_term(&mut out, idx == 0, c, &factors);
        }
        out
    }
}

/// Appends `coeff*f1*f2...` using ` + ` / ` - ` separators.
pub(crate) fn push_term(out: &mut String, first: bool, c: &Rational, factors: &[String]) {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let mut parts = Vec::new();
    if !abs.is_one() || factors.is_empty() {
        parts.push(format_rational(&abs));
    }
    parts.extend(factors.iter().cloned());
    out.push_str(&parts.join("*"));
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect() }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars);
        let mut out = Poly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

/// Laurent polynomial in `nvars` variables (integer exponents), the domain
/// on which operators act in oracle checks.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    pub terms: BTreeMap<Vec<i64>, Rational>,
}

impl LaurentPoly {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn monomial(e: Vec<i64>, c: Rational) -> Self {
        let mut p = Self::new();
        p.add_term(e, c);
        p
    }

    pub fn add_term(&mut self, e: Vec<i64>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl From<&Poly> for LaurentPoly {
    fn from(p: &Poly) -> Self {
        let mut out = LaurentPoly::new();
        for (e, c) in p.terms() {
            out.add_term(e.iter().map(|&k| k as i64).collect(), c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, ratio};

    #[test]
    fn shift_of_product() {
        // t = v(v + c - 1) with c = 5/2, shifted by 1 gives (v + 1)(v + c)
        let c = ratio(5, 2);
        let v = Poly::var(1, 0);
        let t = &v * &(&v + &Poly::constant(1, &c - rat(1)));
        let shifted = t.shift(&[rat(1)]);
        let expected = &(&v + &Poly::constant(1, rat(1))) * &(&v + &Poly::constant(1, c));
        assert_eq!(shifted, expected);
    }

    #[test]
    fn divided_difference_identity() {
        let n = 3;
        let f = &(&Poly::var(n, 2).pow(3) * &Poly::var(n, 0)) + &Poly::var(n, 2);
        let s = &Poly::var(n, 0) + &Poly::constant(n, rat(2));
        let h = f.divided_difference(2, &s);
        let lhs = &f - &f.substitute(2, &s);
        let rhs = &(&Poly::var(n, 2) - &s) * &h;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn render_order() {
        let n = 1;
        let v = Poly::var(n, 0);
        let p = &(&v.pow(2) - &v.scale(&rat(3))) + &Poly::constant(n, ratio(-1, 2));
        assert_eq!(p.render(&["t1".to_string()]), "t1^2 - 3*t1 - 1/2");
        assert_eq!((-&v).render(&["t1".to_string()]), "-t1");
    }
}
