use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{format_rational, rational_inverse, Rational};
use crate::groebner::{initial_ideal, weyl_gb, InitialIdeal, TermOrder};
use crate::systems::{DIdeal, HornData};
use crate::weyl::{ThetaPoly, WeylOp};

/// Witness that `theta_j` lies in the `(-w, w)` initial ideal of the shifted ideal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertificateEntry {
    /// 1-based variable index, `j > m`.
    pub j: usize,
    /// `nu` with `(nu A)_k = delta_jk` for `k > m`.
    pub nu: Vec<String>,
    pub witness: WeylOp,
    pub initial_form: WeylOp,
    /// The witness equals `x_j * sum_i nu_i (E_i - beta_i)` after the shift.
    pub combination_verified: bool,
    /// The witness reduces to zero modulo a Groebner basis of the shifted ideal.
    pub gb_member: bool,
    /// `theta_j` lies in the initial ideal computed by a homogenized Groebner
    /// basis (only when requested).
    pub initial_ideal_member: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BFunctionCertificate {
    pub entries: Vec<CertificateEntry>,
    /// `s = theta_{m+1} + ... + theta_n`.
    pub s: String,
    /// Every entry verified: `s` lies in the initial ideal, so `b(s)` divides `s`.
    pub divides_s: bool,
}

/// Rows of `A_2^{-1}`, where `A_2` is the last `d` columns of `A`: row `j - m`
/// is `nu^(j)`.
pub(crate) fn nu_vectors(data: &HornData) -> Result<Vec<Vec<Rational>>> {
    if !data.flags().top_m_rows_rank_m {
        return Err(Error::HypothesisViolated("top_m_rows_rank_m: the top m rows of B have rank < m".into()));
    }
    let (m, n) = (data.m(), data.n());
    if n == m {
        return Ok(Vec::new());
    }
    let cols: Vec<usize> = (m..n).collect();
    let a2 = data.a().select_cols(&cols).to_rational();
    rational_inverse(&a2).ok_or_else(|| Error::Internal("trailing block of A is singular".into()))
}

/// The ideal `J` obtained from `H(B, kappa)` by `x_j -> x_j + 1` for `j > m`.
pub fn shifted_lattice_ideal(data: &HornData) -> Result<DIdeal> {
    let h = data.build_lattice_ideal()?;
    let one = Rational::from_integer(1.into());
    let gens = h
        .generators()
        .iter()
        .map(|g| (data.m()..data.n()).fold(g.clone(), |acc, j| acc.substitute_x_shift(j, &one)))
        .collect();
    DIdeal::new(data.n(), gens)
}

fn shift_tail(data: &HornData, op: &WeylOp) -> WeylOp {
    let one = Rational::from_integer(1.into());
    (data.m()..data.n()).fold(op.clone(), |acc, j| acc.substitute_x_shift(j, &one))
}

/// Builds and verifies, for each `j > m`, the element
/// `sum_k (nu A)_k x_j theta_k + x_j^2 d_j + theta_j - (nu . beta) x_j` of `J`
/// and its `(-w, w)`-initial form `theta_j`.
///
/// With `deep` set, also checks `theta_j` against generators of the initial
/// ideal obtained from a homogenized Groebner basis.
pub fn bfunction_divides_s_certificate(data: &HornData, budget: usize, deep: bool) -> Result<BFunctionCertificate> {
    let (m, n) = (data.m(), data.n());
    let nus = nu_vectors(data)?;
    let euler = data.euler_theta();
    let j_ideal = shifted_lattice_ideal(data)?;
    let gb = weyl_gb(&j_ideal, &TermOrder::GradedRevLex, budget)?;
    let w: Vec<i64> = (0..n).map(|i| i64::from(i >= m)).collect();
    let neg_w: Vec<i64> = w.iter().map(|x| -x).collect();
    let initial = if deep && n > m { Some(initial_ideal(&j_ideal, &neg_w, &w, budget)?) } else { None };
    let initial_gb = match &initial {
        Some(InitialIdeal::Weyl(forms)) => Some(weyl_gb(&DIdeal::new(n, forms.clone())?, &TermOrder::GradedRevLex, budget)?),
        Some(InitialIdeal::Symbol(_)) => return Err(Error::Internal("(-w, w) has u + v = 0".into())),
        None => None,
    };

    let mut entries = Vec::new();
    for (row, j) in (m..n).enumerate() {
        let nu = &nus[row];
        let na: Vec<Rational> = (0..n)
            .map(|k| (0..data.d()).map(|i| &nu[i] * Rational::from_integer(data.a()[(i, k)].clone())).sum())
            .collect();
        let nu_beta: Rational = nu.iter().zip(data.beta()).map(|(a, b)| a * b).sum();
        let xj = WeylOp::x(n, j);

        let mut witness = &(&xj * &xj) * &WeylOp::d(n, j);
        witness = &witness + &WeylOp::theta(n, j);
        witness = &witness - &xj.scale(&nu_beta);
        for (k, c) in na.iter().enumerate().take(m) {
            witness = &witness + &(&xj * &WeylOp::theta(n, k)).scale(c);
        }

        // combination of shifted Euler operators
        let combo = euler.iter().zip(nu).fold(ThetaPoly::zero(n), |acc, (e, c)| &acc + &(e * &ThetaPoly::constant(n, c.clone())));
        let combination = &xj * &shift_tail(data, &combo.to_weyl());
        let combination_verified = combination == witness;

        let gb_member = gb.contains(&witness)?;
        let initial_form = witness.initial_form(&neg_w, &w);
        let initial_ideal_member = match &initial_gb {
            Some(g) => Some(g.contains(&WeylOp::theta(n, j))?),
            None => None,
        };
        entries.push(CertificateEntry {
            j: j + 1,
            nu: nu.iter().map(format_rational).collect(),
            witness,
            initial_form,
            combination_verified,
            gb_member,
            initial_ideal_member,
        });
    }
    let divides_s = entries.iter().all(|e| {
        e.combination_verified
            && e.gb_member
            && e.initial_form == WeylOp::theta(n, e.j - 1)
            && e.initial_ideal_member != Some(false)
    });
    let s = (m..n).fold(ThetaPoly::zero(n), |acc, j| &acc + &ThetaPoly::theta(n, j));
    Ok(BFunctionCertificate { entries, s: s.render(), divides_s })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, ratio, IntMatrix};
    use crate::groebner::DEFAULT_BUDGET;
    use crate::weyl::parse_op;

    #[test]
    fn toy_certificate() {
        let d = HornData::validate(IntMatrix::from_i64(&[&[1], &[-1]]), vec![rat(0), ratio(1, 2)]).unwrap();
        let cert = bfunction_divides_s_certificate(&d, DEFAULT_BUDGET, true).unwrap();
        assert!(cert.divides_s);
        assert_eq!(cert.entries.len(), 1);
        let e = &cert.entries[0];
        assert_eq!(e.j, 2);
        assert_eq!(e.witness, parse_op("x2*x1*dx1 + x2^2*dx2 + x2*dx2 - 1/2*x2", 2).unwrap());
        assert_eq!(e.initial_form, WeylOp::theta(2, 1));
        assert_eq!(e.initial_ideal_member, Some(true));
    }

    #[test]
    fn gauss_certificates() {
        let bm = IntMatrix::from_i64(&[&[1], &[1], &[-1], &[-1]]);
        let d = HornData::validate(bm, vec![rat(0), ratio(3, 4), ratio(-1, 3), ratio(-2, 5)]).unwrap();
        let cert = bfunction_divides_s_certificate(&d, DEFAULT_BUDGET, false).unwrap();
        assert!(cert.divides_s);
        assert_eq!(cert.entries.iter().map(|e| e.j).collect::<Vec<_>>(), vec![2, 3, 4]);
    }

    #[test]
    fn rank_deficient_top_block() {
        let bm = IntMatrix::from_i64(&[&[0], &[1], &[-1]]);
        let d = HornData::validate(bm, vec![rat(0); 3]).unwrap();
        assert!(matches!(
            bfunction_divides_s_certificate(&d, DEFAULT_BUDGET, false),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
