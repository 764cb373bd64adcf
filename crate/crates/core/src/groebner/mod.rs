//! Groebner bases for left ideals of the Weyl algebra and for commutative
//! polynomial ideals.
//!
//! Orders with a negative weight component are handled in the homogenized
//! Weyl algebra (`d_i x_i = x_i d_i + h^2`) and dehomogenized afterwards.

mod engine;
mod order;

use num_traits::{One, Zero};
use serde::Serialize;

use engine::{GbOutcome, IPoly, Ring, RingKind, Term};
pub use order::TermOrder;

use crate::error::{Error, Result};
use crate::exactlin::rational::denominator_lcm;
use crate::exactlin::Rational;
use crate::systems::DIdeal;
use crate::weyl::{Poly, WeylMono, WeylOp};

/// Default S-pair budget.
pub const DEFAULT_BUDGET: usize = 100_000;

/// Groebner basis of a left ideal of `D_n`.
pub struct GBasis {
    order: TermOrder,
    n: usize,
    homogenized: bool,
    reduced: bool,
    ring: Ring,
    polys: Vec<IPoly>,
    elements: Vec<WeylOp>,
}

impl std::fmt::Debug for GBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GBasis")
            .field("order", &self.order)
            .field("n", &self.n)
            .field("homogenized", &self.homogenized)
            .field("elements", &self.elements)
            .finish()
    }
}

impl GBasis {
    pub fn order(&self) -> &TermOrder {
        &self.order
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// Monic elements, ascending by leading monomial.
    pub fn elements(&self) -> &[WeylOp] {
        &self.elements
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Leading monomials in the basis order (dehomogenized).
    pub fn leading_monomials(&self) -> Vec<WeylMono> {
        self.polys.iter().map(|p| exps_to_mono(self.n, p.lm())).collect()
    }

    /// True if the ideal is all of `D_n`.
    pub fn is_unit(&self) -> bool {
        self.polys.iter().any(|p| p.lm().iter().take(2 * self.n).all(|&e| e == 0))
    }

    /// Normal form (monic); only for bases computed without homogenization.
    pub fn reduce(&self, op: &WeylOp) -> Result<WeylOp> {
        if self.homogenized {
            return Err(Error::Internal("normal forms need a well-order basis".into()));
        }
        if op.nvars() != self.n {
            return Err(Error::DimensionMismatch(format!("D_{} element against D_{} basis", op.nvars(), self.n)));
        }
        let p = weyl_to_ipoly(&self.ring, op, None);
        let r = self.ring.reduce(p, &self.polys);
        Ok(ipoly_to_weyl(self.n, &r, false))
    }

    pub fn contains(&self, op: &WeylOp) -> Result<bool> {
        Ok(self.reduce(op)?.is_zero())
    }

    /// Exhaustive Buchberger criterion: every S-pair reduces to zero.
    pub fn verify_buchberger(&self) -> bool {
        self.ring.is_groebner(&self.polys)
    }
}

fn weyl_ring(n: usize, order: &TermOrder) -> Result<Ring> {
    let compiled = order.compile(2 * n, Some(n))?;
    if order.needs_homogenization() {
        let compiled = compiled.pad(2 * n + 1).with_total_degree_first(2 * n + 1);
        Ok(Ring::new(RingKind::WeylHomog { n }, compiled))
    } else {
        Ok(Ring::new(RingKind::Weyl { n }, compiled))
    }
}

fn to_u16(e: u32) -> u16 {
    u16::try_from(e).expect("exponent exceeds u16")
}

/// Clears denominators; homogenizes to degree `homog_degree` when given.
fn weyl_to_ipoly(ring: &Ring, op: &WeylOp, homog_degree: Option<u32>) -> IPoly {
    let scale = denominator_lcm(op.terms().map(|(_, c)| c));
    let terms = op
        .terms()
        .map(|(m, c)| {
            let mut e: Vec<u16> = m.x.iter().chain(m.d.iter()).map(|&k| to_u16(k)).collect();
            if let Some(d) = homog_degree {
                e.push(to_u16(d - m.degree()));
            }
            Term { e, c: (c * Rational::from_integer(scale.clone())).to_integer() }
        })
        .collect();
    ring.primitive(ring.normalize(terms))
}

fn exps_to_mono(n: usize, e: &[u16]) -> WeylMono {
    WeylMono { x: e[..n].iter().map(|&k| k as u32).collect(), d: e[n..2 * n].iter().map(|&k| k as u32).collect() }
}

/// Converts back to a `WeylOp`, dropping any homogenizing exponent, scaled monic.
fn ipoly_to_weyl(n: usize, p: &IPoly, keep_integral: bool) -> WeylOp {
    let mut op = WeylOp::zero(n);
    if p.is_zero() {
        return op;
    }
    let lc = Rational::from_integer(p.lead().c.clone());
    for t in &p.terms {
        let c = Rational::from_integer(t.c.clone());
        op.add_term(exps_to_mono(n, &t.e), if keep_integral { c } else { c / &lc });
    }
    op
}

fn run(ring: &Ring, gens: Vec<IPoly>, budget: usize) -> Result<Vec<IPoly>> {
    match ring.groebner(gens, budget) {
        GbOutcome::Done(b) => Ok(b),
        GbOutcome::Exhausted => Err(Error::ResourceLimit { budget }),
    }
}

/// Reduced left Groebner basis of `ideal`.
///
/// Orders with a negative weight are computed in the homogenized Weyl algebra;
/// the dehomogenized result is a Groebner basis with respect to the weight but
/// is not inter-reduced.
pub fn weyl_gb(ideal: &DIdeal, order: &TermOrder, budget: usize) -> Result<GBasis> {
    let n = ideal.nvars();
    let ring = weyl_ring(n, order)?;
    let homog = order.needs_homogenization();
    let gens: Vec<IPoly> = ideal
        .generators()
        .iter()
        .map(|g| weyl_to_ipoly(&ring, g, homog.then(|| g.total_degree().unwrap_or(0))))
        .collect();
    let basis = run(&ring, gens, budget)?;
    let reduced = ring.reduced_basis(basis);
    let elements = reduced.iter().map(|p| ipoly_to_weyl(n, p, false)).collect();
    Ok(GBasis { order: order.clone(), n, homogenized: homog, reduced: !homog, ring, polys: reduced, elements })
}

/// Generators of an initial ideal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "ring", content = "generators", rename_all = "kebab-case")]
pub enum InitialIdeal {
    /// `u + v = 0`: initial forms live in the Weyl algebra.
    Weyl(Vec<WeylOp>),
    /// `u + v > 0` somewhere: symbols in `C[x, xi]` (variables `x_1..x_n, xi_1..xi_n`).
    Symbol(Vec<Poly>),
}

impl Serialize for WeylOp {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.render())
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let n = self.nvars() / 2;
        s.serialize_str(&self.render(&symbol_names(n)))
    }
}

/// `x1..xn, xi1..xin`.
pub fn symbol_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).chain((1..=n).map(|i| format!("xi{i}"))).collect()
}

/// Generators of `in_(u,v)(I)`, the initial forms of a Groebner basis for the
/// `(u, v)`-refined order.
pub fn initial_ideal(ideal: &DIdeal, u: &[i64], v: &[i64], budget: usize) -> Result<InitialIdeal> {
    let order = TermOrder::weyl_weight(u, v)?;
    let gb = weyl_gb(ideal, &order, budget)?;
    let forms: Vec<WeylOp> = gb.elements().iter().map(|g| g.initial_form(u, v)).collect();
    if u.iter().zip(v).all(|(a, b)| a + b == 0) {
        Ok(InitialIdeal::Weyl(forms))
    } else {
        Ok(InitialIdeal::Symbol(forms.iter().map(symbol_of).collect()))
    }
}

/// Commutative image of a normally ordered operator (`d_i -> xi_i`).
pub fn symbol_of(op: &WeylOp) -> Poly {
    let n = op.nvars();
    let mut p = Poly::zero(2 * n);
    for (m, c) in op.terms() {
        p.add_term(m.x.iter().chain(m.d.iter()).copied().collect(), c.clone());
    }
    p
}

/// Groebner basis of the left ideal generated by `ideal` in `Q(x)<d>`, returned
/// as a Groebner basis in `D_n` for an order comparing `d`-monomials first.
///
/// Denominators are cleared: for every `f` in `Q(x)<d> I` some polynomial
/// multiple `p(x) f` lies in `I` and has the same leading `d`-monomial, so the
/// leading `d`-exponents of this basis generate the initial ideal over `Q(x)`.
pub fn rational_weyl_gb(ideal: &DIdeal, budget: usize) -> Result<GBasis> {
    weyl_gb(ideal, &TermOrder::DBlock, budget)
}

/// Generators of `I ∩ C[x]<d_j : j not in drop>`; `drop` holds 0-based indices.
pub fn eliminate(ideal: &DIdeal, drop: &[usize], budget: usize) -> Result<DIdeal> {
    let n = ideal.nvars();
    if let Some(&j) = drop.iter().find(|&&j| j >= n) {
        return Err(Error::IndexOutOfRange { index: j + 1, bound: n });
    }
    let gb = weyl_gb(ideal, &TermOrder::eliminate_d(n, drop), budget)?;
    let kept = gb
        .elements()
        .iter()
        .filter(|g| g.terms().all(|(m, _)| drop.iter().all(|&j| m.d[j] == 0)))
        .cloned()
        .collect();
    DIdeal::new(n, kept)
}

/// Groebner basis of a commutative polynomial ideal.
pub struct CommGBasis {
    order: TermOrder,
    nvars: usize,
    ring: Ring,
    polys: Vec<IPoly>,
}

impl std::fmt::Debug for CommGBasis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CommGBasis").field("order", &self.order).field("len", &self.polys.len()).finish()
    }
}

impl CommGBasis {
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Monic elements.
    pub fn elements(&self) -> Vec<Poly> {
        self.polys.iter().map(|p| ipoly_to_poly(self.nvars, p)).collect()
    }

    pub fn leading_exponents(&self) -> Vec<Vec<u32>> {
        self.polys.iter().map(|p| p.lm().iter().map(|&k| k as u32).collect()).collect()
    }

    pub fn reduce(&self, p: &Poly) -> Poly {
        ipoly_to_poly(self.nvars, &self.ring.reduce(poly_to_ipoly(&self.ring, p), &self.polys))
    }

    pub fn verify_buchberger(&self) -> bool {
        self.ring.is_groebner(&self.polys)
    }

    /// Krull dimension of the quotient ring; `None` for the unit ideal.
    pub fn krull_dim(&self) -> Option<usize> {
        krull_dim_of_monomials(self.nvars, &self.leading_exponents())
    }
}

fn poly_to_ipoly(ring: &Ring, p: &Poly) -> IPoly {
    let scale = denominator_lcm(p.terms().map(|(_, c)| c));
    let terms = p
        .terms()
        .map(|(e, c)| Term {
            e: e.iter().map(|&k| to_u16(k)).collect(),
            c: (c * Rational::from_integer(scale.clone())).to_integer(),
        })
        .collect();
    ring.primitive(ring.normalize(terms))
}

fn ipoly_to_poly(nvars: usize, p: &IPoly) -> Poly {
    let mut out = Poly::zero(nvars);
    if p.is_zero() {
        return out;
    }
    let lc = Rational::from_integer(p.lead().c.clone());
    for t in &p.terms {
        out.add_term(t.e.iter().map(|&k| k as u32).collect(), Rational::from_integer(t.c.clone()) / &lc);
    }
    out
}

pub fn commutative_gb(gens: &[Poly], nvars: usize, order: &TermOrder, budget: usize) -> Result<CommGBasis> {
    if gens.iter().any(|g| g.nvars() != nvars) {
        return Err(Error::DimensionMismatch("polynomial ring size".into()));
    }
    let ring = Ring::new(RingKind::Commutative, order.compile(nvars, None)?);
    let polys: Vec<IPoly> = gens.iter().map(|g| poly_to_ipoly(&ring, g)).collect();
    let basis = run(&ring, polys, budget)?;
    let reduced = ring.reduced_basis(basis);
    Ok(CommGBasis { order: order.clone(), nvars, ring, polys: reduced })
}

/// Krull dimension of `k[v_1..v_N] / <monomials>`: the largest set of variables
/// containing the support of no generator. `None` if a generator is constant.
pub fn krull_dim_of_monomials(nvars: usize, monomials: &[Vec<u32>]) -> Option<usize> {
    let supports: Vec<u64> = monomials
        .iter()
        .map(|e| e.iter().enumerate().filter(|(_, &k)| k > 0).fold(0u64, |acc, (i, _)| acc | (1 << i)))
        .collect();
    if supports.iter().any(|&s| s == 0) {
        return None;
    }
    assert!(nvars <= 64, "too many variables for dimension search");
    let mut best = 0;
    independent_search(nvars, &supports, 0, 0, 0, &mut best);
    Some(best)
}

fn independent_search(nvars: usize, supports: &[u64], start: usize, set: u64, size: usize, best: &mut usize) {
    if size > *best {
        *best = size;
    }
    if size + (nvars - start) <= *best {
        return;
    }
    for v in start..nvars {
        let next = set | (1 << v);
        if supports.iter().all(|&s| s & !next != 0) {
            independent_search(nvars, supports, v + 1, next, size + 1, best);
        }
    }
}

/// Integer content of a rational operator list, for callers that want
/// integral generators.
pub fn integral_form(op: &WeylOp) -> WeylOp {
    let scale = denominator_lcm(op.terms().map(|(_, c)| c));
    if scale.is_one() || scale.is_zero() {
        return op.clone();
    }
    op.scale(&Rational::from_integer(scale))
}
