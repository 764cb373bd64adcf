//! Buchberger's algorithm over integer (fraction-free) coefficients for the
//! Weyl algebra, the homogenized Weyl algebra and commutative polynomial rings.
//!
//! Polynomials keep their terms in ascending order so the leading term is the
//! last element. Every polynomial handed out is primitive with positive leading
//! coefficient.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::order::CompiledOrder;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum RingKind {
    /// Exponents `x_1..x_n, d_1..d_n`.
    Weyl { n: usize },
    /// Exponents `x_1..x_n, d_1..d_n, h` with `d_i x_i = x_i d_i + h^2`.
    WeylHomog { n: usize },
    Commutative,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub e: Vec<u16>,
    pub c: BigInt,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct IPoly {
    /// Ascending in the ring's order; the leading term is last.
    pub terms: Vec<Term>,
}

impl IPoly {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &Term {
        self.terms.last().expect("leading term of zero polynomial")
    }

    pub fn lm(&self) -> &[u16] {
        &self.lead().e
    }
}

pub(crate) struct Ring {
    pub kind: RingKind,
    pub order: CompiledOrder,
}

pub(crate) fn divides(a: &[u16], b: &[u16]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub(crate) fn lcm(a: &[u16], b: &[u16]) -> Vec<u16> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn degree(e: &[u16]) -> u32 {
    e.iter().map(|&k| k as u32).sum()
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Vec<u16>,
    deg: u32,
    seq: usize,
}

/// Outcome of a Buchberger run.
pub(crate) enum GbOutcome {
    Done(Vec<IPoly>),
    Exhausted,
}

impl Ring {
    pub fn new(kind: RingKind, order: CompiledOrder) -> Self {
        Ring { kind, order }
    }

    fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        self.order.cmp(a, b)
    }

    /// Sorts ascending and merges equal monomials.
    pub fn normalize(&self, mut terms: Vec<Term>) -> IPoly {
        terms.sort_by(|a, b| self.cmp(&a.e, &b.e));
        let mut out: Vec<Term> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.e == t.e => last.c += t.c,
                _ => out.push(t),
            }
            if out.last().is_some_and(|l| l.c.is_zero()) {
                out.pop();
            }
        }
        IPoly { terms: out }
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive(&self, mut p: IPoly) -> IPoly {
        if p.is_zero() {
            return p;
        }
        let mut g = BigInt::zero();
        for t in &p.terms {
            g = g.gcd(&t.c);
            if g.is_one() {
                break;
            }
        }
        if p.lead().c.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for t in &mut p.terms {
                t.c = &t.c / &g;
            }
        }
        p
    }

    /// Left product `x^alpha d^beta (h^gamma) * g`.
    pub fn mul_mono_left(&self, t: &[u16], g: &IPoly) -> IPoly {
        let (n, homog) = match self.kind {
            RingKind::Commutative => return self.shift(t, g),
            RingKind::Weyl { n } => (n, false),
            RingKind::WeylHomog { n } => (n, true),
        };
        // without overlap between d's of t and x's of g the product is a plain shift
        let overlap = g.terms.iter().any(|term| (0..n).any(|i| t[n + i] > 0 && term.e[i] > 0));
        if !overlap {
            return self.shift(t, g);
        }
        let mut out = Vec::new();
        let mut k = vec![0u16; n];
        for term in &g.terms {
            let a = &term.e;
            let tops: Vec<u16> = (0..n).map(|i| t[n + i].min(a[i])).collect();
            k.iter_mut().for_each(|x| *x = 0);
            loop {
                let mut coef = term.c.clone();
                let mut e: Vec<u16> = t.iter().zip(a.iter()).map(|(x, y)| x + y).collect();
                let mut ksum = 0u16;
                for i in 0..n {
                    if k[i] > 0 {
                        coef *= leibniz_factor(t[n + i], a[i], k[i]);
                        e[i] -= k[i];
                        e[n + i] -= k[i];
                        ksum += k[i];
                    }
                }
                if homog {
                    e[2 * n] += 2 * ksum;
                }
                out.push(Term { e, c: coef });
                // next multi-index
                let mut i = 0;
                loop {
                    if i == n {
                        break;
                    }
                    if k[i] < tops[i] {
                        k[i] += 1;
                        break;
                    }
                    k[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
        self.normalize(out)
    }

    fn shift(&self, t: &[u16], g: &IPoly) -> IPoly {
        IPoly {
            terms: g
                .terms
                .iter()
                .map(|term| Term { e: term.e.iter().zip(t).map(|(a, b)| a + b).collect(), c: term.c.clone() })
                .collect(),
        }
    }

    /// `a * f - b * g`, both inputs ascending.
    fn lin_comb(&self, a: &BigInt, f: &IPoly, b: &BigInt, g: &IPoly) -> IPoly {
        let mut out = Vec::with_capacity(f.terms.len() + g.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < f.terms.len() || j < g.terms.len() {
            let o = if i == f.terms.len() {
                Ordering::Greater
            } else if j == g.terms.len() {
                Ordering::Less
            } else {
                self.cmp(&f.terms[i].e, &g.terms[j].e)
            };
            match o {
                Ordering::Less => {
                    out.push(Term { e: f.terms[i].e.clone(), c: a * &f.terms[i].c });
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(Term { e: g.terms[j].e.clone(), c: -(b * &g.terms[j].c) });
                    j += 1;
                }
                Ordering::Equal => {
                    let c = a * &f.terms[i].c - b * &g.terms[j].c;
                    if !c.is_zero() {
                        out.push(Term { e: f.terms[i].e.clone(), c });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        IPoly { terms: out }
    }

    pub fn spoly(&self, f: &IPoly, g: &IPoly) -> IPoly {
        let l = lcm(f.lm(), g.lm());
        let tf: Vec<u16> = l.iter().zip(f.lm()).map(|(a, b)| a - b).collect();
        let tg: Vec<u16> = l.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
        let ff = self.mul_mono_left(&tf, f);
        let gg = self.mul_mono_left(&tg, g);
        let (a, b) = (&f.lead().c, &g.lead().c);
        let d = a.gcd(b);
        self.lin_comb(&(b / &d), &ff, &(a / &d), &gg)
    }

    /// Full normal form of `f` with respect to `basis`, up to a nonzero integer factor.
    pub fn reduce(&self, f: IPoly, basis: &[IPoly]) -> IPoly {
        self.reduce_by(f, basis, &[])
    }

    /// As [`Ring::reduce`], skipping basis elements flagged in `skip`.
    fn reduce_by(&self, f: IPoly, basis: &[IPoly], skip: &[bool]) -> IPoly {
        let mut acc: BTreeMap<Vec<i64>, Term> = f.terms.into_iter().map(|t| (self.order.key(&t.e), t)).collect();
        let mut rem: Vec<Term> = Vec::new(); // descending
        let mut steps = 0usize;
        while let Some((_, lead)) = acc.last_key_value() {
            let Some(g) = basis
                .iter()
                .enumerate()
                .filter(|(i, g)| !skip.get(*i).copied().unwrap_or(false) && divides(g.lm(), &lead.e))
                .map(|(_, g)| g)
                .min_by_key(|g| g.terms.len())
            else {
                rem.push(acc.pop_last().unwrap().1);
                continue;
            };
            let t: Vec<u16> = lead.e.iter().zip(g.lm()).map(|(a, b)| a - b).collect();
            let tg = self.mul_mono_left(&t, g);
            let (a, b) = (&lead.c, &g.lead().c);
            let d = a.gcd(b);
            let fa = b / &d;
            let gb = a / &d;
            if !fa.is_one() {
                for term in acc.values_mut().chain(rem.iter_mut()) {
                    term.c *= &fa;
                }
            }
            for term in tg.terms {
                let c = -(&gb * term.c);
                match acc.entry(self.order.key(&term.e)) {
                    Entry::Vacant(v) => {
                        v.insert(Term { e: term.e, c });
                    }
                    Entry::Occupied(mut o) => {
                        o.get_mut().c += c;
                        if o.get().c.is_zero() {
                            o.remove();
                        }
                    }
                }
            }
            steps += 1;
            if steps % 8 == 0 {
                remove_content(acc.values_mut().chain(rem.iter_mut()));
            }
        }
        rem.reverse();
        self.primitive(IPoly { terms: rem })
    }

    /// Buchberger with the normal selection strategy and Gebauer-Moeller
    /// pair criteria (the coprime criterion only in the commutative case).
    pub fn groebner(&self, gens: Vec<IPoly>, budget: usize) -> GbOutcome {
        let commutative = self.kind == RingKind::Commutative;
        let mut basis: Vec<IPoly> = Vec::new();
        // elements whose leading monomial is divisible by a later one; kept for
        // pair bookkeeping but not used as reducers
        let mut redundant: Vec<bool> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut seq = 0usize;
        let mut processed = 0usize;

        let mut todo: Vec<IPoly> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        // insert the smallest generators first
        todo.sort_by(|a, b| self.cmp(b.lm(), a.lm()));
        while let Some(g) = todo.pop() {
            let h = self.reduce_by(g, &basis, &redundant);
            if self.is_unit_lm(&h) {
                return GbOutcome::Done(vec![h]);
            }
            if !h.is_zero() {
                self.update(&mut basis, &mut redundant, &mut pairs, h, &mut seq, commutative);
            }
        }

        while !pairs.is_empty() {
            let idx = (0..pairs.len())
                .min_by(|&a, &b| {
                    pairs[a].deg.cmp(&pairs[b].deg).then_with(|| pairs[a].seq.cmp(&pairs[b].seq))
                })
                .unwrap();
            let p = pairs.swap_remove(idx);
            processed += 1;
            if processed > budget {
                return GbOutcome::Exhausted;
            }
            let s = self.spoly(&basis[p.i], &basis[p.j]);
            let h = self.reduce_by(s, &basis, &redundant);
            if self.is_unit_lm(&h) {
                return GbOutcome::Done(vec![h]);
            }
            if !h.is_zero() {
                self.update(&mut basis, &mut redundant, &mut pairs, h, &mut seq, commutative);
            }
        }
        GbOutcome::Done(basis)
    }

    /// Nonzero with a leading monomial free of `x` and `d` (a unit after dehomogenizing).
    fn is_unit_lm(&self, h: &IPoly) -> bool {
        let k = match self.kind {
            RingKind::Weyl { n } | RingKind::WeylHomog { n } => 2 * n,
            RingKind::Commutative => usize::MAX,
        };
        !h.is_zero() && h.lm().iter().take(k).all(|&e| e == 0)
    }

    fn update(
        &self,
        basis: &mut Vec<IPoly>,
        redundant: &mut Vec<bool>,
        pairs: &mut Vec<Pair>,
        h: IPoly,
        seq: &mut usize,
        commutative: bool,
    ) {
        let hi = basis.len();
        let hlm = h.lm().to_vec();
        for (g, r) in basis.iter().zip(redundant.iter_mut()) {
            *r |= divides(&hlm, g.lm());
        }
        // old pairs whose lcm is strictly "covered" by lm(h) (chain criterion)
        pairs.retain(|p| {
            !(divides(&hlm, &p.lcm)
                && lcm(basis[p.i].lm(), &hlm) != p.lcm
                && lcm(basis[p.j].lm(), &hlm) != p.lcm)
        });
        let mut cands: Vec<(usize, Vec<u16>, bool)> = basis
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let l = lcm(g.lm(), &hlm);
                let coprime = commutative && degree(&l) == degree(g.lm()) + degree(&hlm);
                (i, l, coprime)
            })
            .collect();
        // drop candidates whose lcm is properly divisible by another candidate's lcm
        let lcms: Vec<Vec<u16>> = cands.iter().map(|c| c.1.clone()).collect();
        cands.retain(|(_, l, _)| !lcms.iter().any(|m| m != l && divides(m, l)));
        // one pair per lcm; in the commutative case skip the whole group if any is coprime
        let mut kept: Vec<(usize, Vec<u16>)> = Vec::new();
        let mut groups: Vec<(Vec<u16>, bool, usize)> = Vec::new();
        for (i, l, coprime) in cands {
            match groups.iter_mut().find(|g| g.0 == l) {
                Some(g) => g.1 |= coprime,
                None => groups.push((l, coprime, i)),
            }
        }
        for (l, coprime, i) in groups {
            if !coprime {
                kept.push((i, l));
            }
        }
        for (i, l) in kept {
            let deg = degree(&l);
            pairs.push(Pair { i, j: hi, lcm: l, deg, seq: *seq });
            *seq += 1;
        }
        basis.push(h);
        redundant.push(false);
    }

    /// Minimal, inter-reduced basis sorted by leading monomial (ascending).
    pub fn reduced_basis(&self, basis: Vec<IPoly>) -> Vec<IPoly> {
        let mut sorted = basis;
        sorted.sort_by(|a, b| self.cmp(a.lm(), b.lm()));
        let mut minimal: Vec<IPoly> = Vec::new();
        for g in sorted {
            if !minimal.iter().any(|m| divides(m.lm(), g.lm())) {
                minimal.push(g);
            }
        }
        let mut out = Vec::with_capacity(minimal.len());
        for i in 0..minimal.len() {
            let others: Vec<IPoly> =
                minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
            out.push(self.reduce(minimal[i].clone(), &others));
        }
        out
    }

    /// Checks Buchberger's criterion exhaustively.
    pub fn is_groebner(&self, basis: &[IPoly]) -> bool {
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                let s = self.spoly(&basis[i], &basis[j]);
                if !self.reduce(s, basis).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

fn remove_content<'a>(terms: impl Iterator<Item = &'a mut Term>) {
    let mut terms: Vec<&mut Term> = terms.collect();
    let mut g = BigInt::zero();
    for t in &terms {
        g = g.gcd(&t.c);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() {
        return;
    }
    for t in &mut terms {
        t.c = &t.c / &g;
    }
}

/// `binom(b, k) binom(a, k) k!`, the coefficient in `d^b x^a`.
fn leibniz_factor(b: u16, a: u16, k: u16) -> BigInt {
    let mut f = BigInt::one();
    for j in 1..=k as u32 {
        f = f * BigInt::from(b as u32 - j + 1) * BigInt::from(a as u32 - j + 1) / BigInt::from(j);
    }
    f
}
