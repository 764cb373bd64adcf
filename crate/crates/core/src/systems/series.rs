//! Truncated series solutions of Horn systems and their lattice-side images.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::HornData;
use crate::error::{Error, Result};
use crate::exactlin::{format_rational, Rational};
use crate::weyl::{LaurentPoly, ThetaPoly, WeylOp};

/// Coefficients `c_u`, `|u| <= order`, of a series `sum c_u z^u` with `c_0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct SeriesSolution {
    pub order: u32,
    pub coefficients: BTreeMap<Vec<u32>, Rational>,
}

/// Outcome of the solution-correspondence check.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum CorrespondenceVerdict {
    Pass { terms: usize, order: u32 },
    /// A generator leaves a residual term below the truncation order.
    Fail { system: String, generator: String, exponent: Vec<i64>, coefficient: String },
    /// The Horn recurrence has no solution with `c_0 = 1`.
    NoSeries { at: Vec<u32> },
}

impl CorrespondenceVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, CorrespondenceVerdict::Pass { .. })
    }
}

fn multi_indices(m: usize, total: u32) -> Vec<Vec<u32>> {
    if m == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in multi_indices(m - 1, total - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn to_i64(u: &[u32]) -> Vec<i64> {
    u.iter().map(|&k| k as i64).collect()
}

/// Solves `c_u q_k(u) = p_k(u - e_k) c_(u - e_k)` degree by degree.
///
/// Each `c_u` is taken from the first `k` with `u_k > 0` and `q_k(u) != 0`;
/// consistency with the other recurrences is left to the residual checks.
pub fn horn_series(data: &HornData, order: u32) -> Result<std::result::Result<SeriesSolution, Vec<u32>>> {
    let m = data.m();
    let qp: Vec<(ThetaPoly, ThetaPoly)> = (0..m).map(|k| data.build_qp(k)).collect::<Result<_>>()?;
    let mut coefficients = BTreeMap::new();
    coefficients.insert(vec![0; m], Rational::from_integer(1.into()));
    for deg in 1..=order {
        for u in multi_indices(m, deg) {
            let ui = to_i64(&u);
            let mut value = None;
            let mut blocked = false;
            for k in (0..m).filter(|&k| u[k] > 0) {
                let mut prev = u.clone();
                prev[k] -= 1;
                let rhs = qp[k].1.eval_int(&to_i64(&prev)) * coefficients.get(&prev).cloned().unwrap_or_default();
                let q = qp[k].0.eval_int(&ui);
                if q.is_zero() {
                    blocked |= !rhs.is_zero();
                    continue;
                }
                value = Some(rhs / q);
                break;
            }
            match value {
                Some(v) => {
                    coefficients.insert(u, v);
                }
                None if blocked => return Ok(Err(u)),
                None => {
                    coefficients.insert(u, Rational::zero());
                }
            }
        }
    }
    Ok(Ok(SeriesSolution { order, coefficients }))
}

fn first_bad(
    residual: &LaurentPoly,
    allowed: impl Fn(&[i64]) -> bool,
    system: &str,
    generator: &WeylOp,
) -> Option<CorrespondenceVerdict> {
    residual.terms.iter().find(|(e, c)| !c.is_zero() && !allowed(e)).map(|(e, c)| CorrespondenceVerdict::Fail {
        system: system.into(),
        generator: generator.render(),
        exponent: e.clone(),
        coefficient: format_rational(c),
    })
}

/// Checks the Horn generators on `sum c_u z^u` and every generator of
/// `H(B, kappa)` on `x^kappa sum c_u x^(B u)`, up to the truncation order.
pub fn check_series(data: &HornData, series: &SeriesSolution) -> Result<CorrespondenceVerdict> {
    let (n, m, order) = (data.n(), data.m(), series.order);
    let kappa = integral_kappa(data)?;

    let horn = data.build_horn()?;
    let g = LaurentPoly {
        terms: series.coefficients.iter().map(|(u, c)| (to_i64(u), c.clone())).collect(),
    };
    for gen in horn.generators() {
        let res = gen.act(&g);
        let allowed = |e: &[i64]| e.iter().sum::<i64>() == order as i64 + 1;
        if let Some(f) = first_bad(&res, allowed, "horn", gen) {
            return Ok(f);
        }
    }

    let exponent = |u: &[i64]| -> Vec<i64> {
        (0..n).map(|i| kappa[i] + (0..m).map(|k| data.entry(i, k) * u[k]).sum::<i64>()).collect()
    };
    let mut f = LaurentPoly::new();
    for (u, c) in &series.coefficients {
        f.add_term(exponent(&to_i64(u)), c.clone());
    }
    let boundary: Vec<Vec<i64>> = multi_indices(m, order + 1).iter().map(|u| to_i64(u)).collect();
    for k in 0..m {
        let gen = data.lattice_binomial(k);
        let res = gen.act(&f);
        let plus: Vec<i64> = (0..n).map(|i| data.entry(i, k).max(0)).collect();
        let allowed_set: Vec<Vec<i64>> = boundary
            .iter()
            .filter(|u| u[k] > 0)
            .map(|u| exponent(u).iter().zip(&plus).map(|(a, b)| a - b).collect())
            .collect();
        if let Some(fail) = first_bad(&res, |e| allowed_set.iter().any(|a| a == e), "lattice", &gen) {
            return Ok(fail);
        }
    }
    for gen in data.build_euler() {
        if let Some(fail) = first_bad(&gen.act(&f), |_| false, "lattice", &gen) {
            return Ok(fail);
        }
    }
    Ok(CorrespondenceVerdict::Pass { terms: series.coefficients.len(), order })
}

fn integral_kappa(data: &HornData) -> Result<Vec<i64>> {
    data.kappa()
        .iter()
        .enumerate()
        .map(|(i, k)| {
            if !k.is_integer() {
                return Err(Error::NonIntegralKappa(i + 1));
            }
            i64::try_from(k.to_integer()).map_err(|_| Error::Internal("kappa entry exceeds i64".into()))
        })
        .collect()
}

/// Builds the truncated Horn series and checks both sides of the correspondence.
pub fn verify_solution_correspondence(data: &HornData, order: u32) -> Result<CorrespondenceVerdict> {
    integral_kappa(data)?;
    match horn_series(data, order)? {
        Ok(series) => check_series(data, &series),
        Err(at) => Ok(CorrespondenceVerdict::NoSeries { at }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, ratio, IntMatrix};

    fn gauss(a: i64, b: i64, c: i64) -> HornData {
        let bm = IntMatrix::from_i64(&[&[1], &[1], &[-1], &[-1]]);
        HornData::validate(bm, vec![rat(0), rat(c - 1), rat(-a), rat(-b)]).unwrap()
    }

    #[test]
    fn gauss_series_matches_pochhammer() {
        let (a, b, c) = (2, 3, 5);
        let s = horn_series(&gauss(a, b, c), 12).unwrap().unwrap();
        let mut expect = rat(1);
        for k in 0..12i64 {
            assert_eq!(s.coefficients[&vec![k as u32]], expect);
            expect = expect * rat((k + a) * (k + b)) / rat((k + c) * (k + 1));
        }
    }

    #[test]
    fn gauss_correspondence_passes() {
        let v = verify_solution_correspondence(&gauss(2, 3, 5), 12).unwrap();
        assert!(v.passed(), "{v:?}");
    }

    #[test]
    fn corrupted_coefficient_is_located() {
        let d = gauss(1, 2, 4);
        let mut s = horn_series(&d, 8).unwrap().unwrap();
        *s.coefficients.get_mut(&vec![3]).unwrap() *= rat(2);
        let v = check_series(&d, &s).unwrap();
        let CorrespondenceVerdict::Fail { system, exponent, .. } = v else { panic!("expected failure") };
        assert_eq!(system, "horn");
        assert!(exponent == vec![3] || exponent == vec![4]);
    }

    #[test]
    fn non_integral_kappa_is_skipped() {
        let bm = IntMatrix::from_i64(&[&[1], &[-1]]);
        let d = HornData::validate(bm, vec![rat(0), ratio(1, 2)]).unwrap();
        assert!(matches!(verify_solution_correspondence(&d, 4), Err(Error::NonIntegralKappa(2))));
    }

    #[test]
    fn two_variable_series() {
        let bm = IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1], &[-1, -1]]);
        let d = HornData::validate(bm, vec![rat(0), rat(0), rat(-1), rat(-2), rat(3)]).unwrap();
        let v = verify_solution_correspondence(&d, 6).unwrap();
        assert!(v.passed(), "{v:?}");
    }
}
