//! Restriction of lattice basis modules to `x_{m+1} = ... = x_n = 1`.
//!
//! Two independent routes produce the restricted ideal: explicit generators
//! built from the lattice binomials (every rewriting step carries a certified
//! combination of Euler operators), and elimination of `d_{m+1}, ..., d_n`
//! followed by specialization. Both are compared against the normalized Horn
//! system by Groebner-basis membership.

mod certificate;

use serde::Serialize;

pub use certificate::{bfunction_divides_s_certificate, shifted_lattice_ideal, BFunctionCertificate, CertificateEntry};

use crate::error::{Error, Result};
use crate::exactlin::Rational;
use crate::groebner::{eliminate, weyl_gb, TermOrder};
use crate::systems::{DIdeal, HornData};
use crate::weyl::{ThetaPoly, WeylMono, WeylOp};

/// `theta_j = kappa_j + sum_{i <= m} b_ji theta_i` modulo the Euler operators,
/// as a theta-polynomial in `m` variables (`j` is 0-based, `j >= m`).
pub fn substitute_theta(data: &HornData, j: usize) -> Result<ThetaPoly> {
    data.require_normalized()?;
    if j < data.m() || j >= data.n() {
        return Err(Error::IndexOutOfRange { index: j + 1, bound: data.n() });
    }
    let coeffs: Vec<Rational> = (0..data.m()).map(|i| Rational::from_integer(data.b()[(j, i)].clone())).collect();
    Ok(ThetaPoly::linear(&coeffs, data.kappa()[j].clone()))
}

/// One explicitly constructed generator together with its certificate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExplicitGenerator {
    /// 1-based column index.
    pub k: usize,
    /// Exponents of `mu_k` on `x_{m+1}, ..., x_n`.
    pub mu: Vec<u32>,
    /// `mu_k (d^{b+} - d^{b-})` in `D_n`.
    pub premultiplied: WeylOp,
    /// The rewritten operator in `C[x]<d_1..d_m>`.
    pub rewritten: WeylOp,
    /// `Q_i` with `premultiplied - rewritten = sum_i Q_i (E_i - beta_i)`.
    pub euler_coefficients: Vec<WeylOp>,
    /// `rewritten` at `x_{m+1} = ... = x_n = 1`, as an element of `D_m`.
    pub specialized: WeylOp,
}

fn x_mono(n: usize, exps: &[(usize, u32)]) -> WeylOp {
    let mut m = WeylMono::one(n);
    for &(i, e) in exps {
        m.x[i] = e;
    }
    WeylOp::monomial(m, Rational::from_integer(1.into()))
}

fn falling_theta(n: usize, j: usize, b: u32) -> ThetaPoly {
    (0..b).fold(ThetaPoly::one(n), |acc, l| {
        &acc * &(&ThetaPoly::theta(n, j) - &ThetaPoly::constant(n, Rational::from_integer(l.into())))
    })
}

/// Replaces `theta_j` (`j > m`) in `f` by the substitution values; returns
/// `f(s)` and `Q_i` with `f(theta) - f(s) = sum_i Q_i (E_i - beta_i)`.
fn rewrite_tail(data: &HornData, f: &ThetaPoly, nus: &[Vec<Rational>]) -> Result<(ThetaPoly, Vec<ThetaPoly>)> {
    let (m, n, d) = (data.m(), data.n(), data.d());
    let mut current = f.0.clone();
    let mut q = vec![ThetaPoly::zero(n); d];
    for j in m..n {
        if current.degree_in(j) == 0 {
            continue;
        }
        let s = substitute_theta(data, j)?.0.remap(n, &(0..m).collect::<Vec<_>>());
        let h = current.divided_difference(j, &s);
        current = current.substitute(j, &s);
        for (i, qi) in q.iter_mut().enumerate() {
            *qi = &*qi + &ThetaPoly(h.scale(&nus[j - m][i]));
        }
    }
    Ok((ThetaPoly(current), q))
}

/// Builds `mu_k (d^{b+} - d^{b-})`, rewrites every `theta_j` with `j > m` via
/// the substitution (certified by explicit Euler combinations), and sets the
/// extra variables to 1. Fails with `MismatchWithNHorn` if the result differs
/// from the normalized Horn generator.
pub fn explicit_nhorn_from_lattice(data: &HornData) -> Result<Vec<ExplicitGenerator>> {
    data.require_normalized()?;
    let (m, n) = (data.m(), data.n());
    let nus = certificate::nu_vectors(data)?;
    let euler: Vec<WeylOp> = data.build_euler();
    let nhorn = data.nhorn_normalized()?;
    let mut out = Vec::new();
    for k in 0..m {
        let col: Vec<i64> = (0..n).map(|i| data.entry(i, k)).collect();
        let tail = m..n;
        let mu: Vec<u32> = tail.clone().map(|j| col[j].unsigned_abs() as u32).collect();
        let neg: Vec<(usize, u32)> = tail.clone().filter(|&j| col[j] < 0).map(|j| (j, (-col[j]) as u32)).collect();
        let pos: Vec<(usize, u32)> = tail.clone().filter(|&j| col[j] > 0).map(|j| (j, col[j] as u32)).collect();

        let mu_op = x_mono(n, &tail.clone().map(|j| (j, mu[j - m])).collect::<Vec<_>>());
        let premultiplied = &mu_op * &data.lattice_binomial(k);

        let f1 = pos.iter().fold(ThetaPoly::one(n), |acc, &(j, b)| &acc * &falling_theta(n, j, b));
        let f2 = neg.iter().fold(ThetaPoly::one(n), |acc, &(j, b)| &acc * &falling_theta(n, j, b));
        let x1 = x_mono(n, &neg);
        let x2 = x_mono(n, &pos);
        let x1dk = &x1 * &WeylOp::d(n, k);

        let direct = &(&x1dk * &f1.to_weyl()) - &(&x2 * &f2.to_weyl());
        if direct != premultiplied {
            return Err(Error::Internal(format!("factorization of mu_k times binomial {} failed", k + 1)));
        }

        let (f1s, q1) = rewrite_tail(data, &f1, &nus)?;
        let (f2s, q2) = rewrite_tail(data, &f2, &nus)?;
        let rewritten = &(&x1dk * &f1s.to_weyl()) - &(&x2 * &f2s.to_weyl());
        let euler_coefficients: Vec<WeylOp> = q1
            .iter()
            .zip(&q2)
            .map(|(a, b)| &(&x1dk * &a.to_weyl()) - &(&x2 * &b.to_weyl()))
            .collect();
        let combination = euler_coefficients
            .iter()
            .zip(&euler)
            .fold(WeylOp::zero(n), |acc, (c, e)| &acc + &(c * e));
        if &premultiplied - &rewritten != combination {
            return Err(Error::Internal(format!("Euler certificate for column {} does not verify", k + 1)));
        }

        let specialized = specialize_tail(data, &rewritten)?;
        let expected = &nhorn.generators()[k];
        if &specialized != expected {
            return Err(Error::MismatchWithNHorn { k: k + 1, diff: (&specialized - expected).render() });
        }
        out.push(ExplicitGenerator { k: k + 1, mu, premultiplied, rewritten, euler_coefficients, specialized });
    }
    Ok(out)
}

/// Sets `x_j = 1` for `j > m` and drops those variables; the operator must
/// not involve `d_j` for `j > m`.
pub fn specialize_tail(data: &HornData, op: &WeylOp) -> Result<WeylOp> {
    let one = Rational::from_integer(1.into());
    let mut r = op.clone();
    for j in data.m()..data.n() {
        r = r.specialize_x(j, &one)?;
    }
    r.restrict_vars(&(0..data.m()).collect::<Vec<_>>())
}

/// Generators of `H(B, kappa) ∩ C[x]<d_1..d_m>` specialized at `x_{>m} = 1`.
pub fn restriction_via_elimination(data: &HornData, budget: usize) -> Result<Vec<WeylOp>> {
    data.require_normalized()?;
    let h = data.build_lattice_ideal()?;
    let drop: Vec<usize> = (data.m()..data.n()).collect();
    let inter = eliminate(&h, &drop, budget)?;
    let mut out = Vec::new();
    for g in inter.generators() {
        let s = specialize_tail(data, g)?;
        if !s.is_zero() && !out.contains(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

/// Result of comparing the restricted ideal with the normalized Horn ideal.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum EqualityVerdict {
    Equal,
    /// A normalized Horn generator outside the restricted ideal.
    LeftNotContained { witness: WeylOp },
    /// A restricted-ideal generator outside the normalized Horn ideal.
    RightNotContained { witness: WeylOp },
    Inconclusive { budget: usize },
}

impl EqualityVerdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, EqualityVerdict::Equal)
    }
}

fn inconclusive_on_budget<T>(r: Result<T>) -> Result<std::result::Result<T, EqualityVerdict>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(Error::ResourceLimit { budget }) => Ok(Err(EqualityVerdict::Inconclusive { budget })),
        Err(e) => Err(e),
    }
}

/// Mutual containment of two ideals of `D_m` by Groebner-basis membership.
pub fn compare_ideals(left: &DIdeal, right: &DIdeal, budget: usize) -> Result<EqualityVerdict> {
    let gl = match inconclusive_on_budget(weyl_gb(left, &TermOrder::GradedRevLex, budget))? {
        Ok(g) => g,
        Err(v) => return Ok(v),
    };
    for g in right.generators() {
        if !gl.contains(g)? {
            return Ok(EqualityVerdict::RightNotContained { witness: g.clone() });
        }
    }
    let gr = match inconclusive_on_budget(weyl_gb(right, &TermOrder::GradedRevLex, budget))? {
        Ok(g) => g,
        Err(v) => return Ok(v),
    };
    for g in left.generators() {
        if !gr.contains(g)? {
            return Ok(EqualityVerdict::LeftNotContained { witness: g.clone() });
        }
    }
    Ok(EqualityVerdict::Equal)
}

/// Checks that restricting `H(B, kappa)` gives exactly the ideal generated by `nhorn`.
pub fn verify_restriction_against(data: &HornData, nhorn: &DIdeal, budget: usize) -> Result<EqualityVerdict> {
    let restricted = match inconclusive_on_budget(restriction_via_elimination(data, budget))? {
        Ok(r) => r,
        Err(v) => return Ok(v),
    };
    compare_ideals(nhorn, &DIdeal::new(data.m(), restricted)?, budget)
}

/// The restriction of the lattice basis module to `x_{m+1} = ... = x_n = 1`
/// equals the normalized Horn module.
pub fn verify_restriction_equals_nhorn(data: &HornData, budget: usize) -> Result<EqualityVerdict> {
    data.require_normalized()?;
    verify_restriction_against(data, &data.nhorn_normalized()?, budget)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RestrictionReport {
    pub certificate: BFunctionCertificate,
    pub explicit_generators: Vec<WeylOp>,
    pub intersection_generators: Vec<WeylOp>,
    pub equality_verdict: EqualityVerdict,
    /// The explicit generators and the elimination route generate the same ideal.
    pub paths_agree: EqualityVerdict,
}

/// Runs the whole restriction pipeline.
pub fn restriction_report(data: &HornData, budget: usize) -> Result<RestrictionReport> {
    let certificate = bfunction_divides_s_certificate(data, budget, false)?;
    let explicit: Vec<WeylOp> = explicit_nhorn_from_lattice(data)?.into_iter().map(|g| g.specialized).collect();
    let (intersection, equality, paths) = match inconclusive_on_budget(restriction_via_elimination(data, budget))? {
        Ok(inter) => {
            let restricted = DIdeal::new(data.m(), inter.clone())?;
            let equality = compare_ideals(&data.nhorn_normalized()?, &restricted, budget)?;
            let paths = compare_ideals(&DIdeal::new(data.m(), explicit.clone())?, &restricted, budget)?;
            (inter, equality, paths)
        }
        Err(v) => (Vec::new(), v.clone(), v),
    };
    Ok(RestrictionReport {
        certificate,
        explicit_generators: explicit,
        intersection_generators: intersection,
        equality_verdict: equality,
        paths_agree: paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, ratio, IntMatrix};
    use crate::groebner::DEFAULT_BUDGET;
    use crate::weyl::parse_op;

    fn toy(c: Rational) -> HornData {
        HornData::validate(IntMatrix::from_i64(&[&[1], &[-1]]), vec![rat(0), c]).unwrap()
    }

    fn gauss() -> HornData {
        let bm = IntMatrix::from_i64(&[&[1], &[1], &[-1], &[-1]]);
        HornData::validate(bm, vec![rat(0), ratio(3, 4), ratio(-1, 3), ratio(-2, 5)]).unwrap()
    }

    #[test]
    fn theta_substitution() {
        assert_eq!(substitute_theta(&toy(rat(2)), 1).unwrap(), ThetaPoly::linear(&[rat(-1)], rat(2)));
        assert_eq!(substitute_theta(&gauss(), 2).unwrap(), ThetaPoly::linear(&[rat(-1)], ratio(-1, 3)));
        assert!(substitute_theta(&toy(rat(2)), 0).is_err());
    }

    #[test]
    fn toy_explicit_generator() {
        let g = explicit_nhorn_from_lattice(&toy(ratio(1, 2))).unwrap();
        assert_eq!(g[0].mu, vec![1]);
        assert_eq!(g[0].rewritten, parse_op("x2*dx1 + x1*dx1 - 1/2", 2).unwrap());
        assert_eq!(g[0].specialized, parse_op("dx1 + x1*dx1 - 1/2", 1).unwrap());
    }

    #[test]
    fn gauss_explicit_generator() {
        let g = explicit_nhorn_from_lattice(&gauss()).unwrap();
        assert_eq!(g[0].mu, vec![1, 1, 1]);
        assert_eq!(g[0].specialized, gauss().build_nhorn().unwrap().generators()[0]);
    }

    #[test]
    fn toy_restriction_is_nhorn() {
        for c in [ratio(1, 2), rat(2), rat(-3)] {
            let d = toy(c);
            assert_eq!(verify_restriction_equals_nhorn(&d, DEFAULT_BUDGET).unwrap(), EqualityVerdict::Equal);
        }
    }

    #[test]
    fn gauss_restriction_is_nhorn() {
        let r = restriction_report(&gauss(), DEFAULT_BUDGET).unwrap();
        assert!(r.equality_verdict.is_equal());
        assert!(r.paths_agree.is_equal());
        assert!(r.certificate.divides_s);
    }

    #[test]
    fn corrupted_nhorn_is_rejected() {
        let d = toy(ratio(1, 2));
        let bad = DIdeal::new(1, vec![parse_op("dx1 + x1*dx1 - 3/2", 1).unwrap()]).unwrap();
        let v = verify_restriction_against(&d, &bad, DEFAULT_BUDGET).unwrap();
        assert!(matches!(v, EqualityVerdict::RightNotContained { .. }), "{v:?}");
    }

    #[test]
    fn no_extra_variables() {
        let d = HornData::validate(IntMatrix::from_i64(&[&[1, 0], &[0, 1]]), vec![rat(0), rat(0)]).unwrap();
        let g = explicit_nhorn_from_lattice(&d).unwrap();
        assert_eq!(g[0].specialized, parse_op("dx1 - 1", 2).unwrap());
        assert!(verify_restriction_equals_nhorn(&d, DEFAULT_BUDGET).unwrap().is_equal());
    }
}
