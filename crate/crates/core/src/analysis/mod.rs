//! Holonomicity, holonomic rank, regularity and grading checks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{row_sums, IntMatrix};
use crate::groebner::{commutative_gb, krull_dim_of_monomials, rational_weyl_gb, symbol_of, weyl_gb, TermOrder};
use crate::systems::{DIdeal, HornData};
use crate::weyl::WeylOp;

/// Dimension of the characteristic variety of `D_n / I`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharDimension {
    pub n: usize,
    pub dim: usize,
    pub holonomic: bool,
    /// Agreement with an independent commutative Groebner basis of the symbol
    /// ideal, when that check was run.
    pub cross_checked: Option<bool>,
}

/// Krull dimension of the characteristic ideal, read from a Groebner basis for
/// the order filtration `(0, 1)` refined by grevlex.
///
/// With `cross_check` the symbols are fed to a commutative Groebner basis
/// computation and the two dimensions compared.
pub fn char_dimension(ideal: &DIdeal, budget: usize, cross_check: bool) -> Result<CharDimension> {
    let n = ideal.nvars();
    let order = TermOrder::weyl_weight(&vec![0; n], &vec![1; n])?;
    let gb = weyl_gb(ideal, &order, budget)?;
    if gb.is_unit() {
        return Err(Error::ImproperIdeal);
    }
    let lms: Vec<Vec<u32>> =
        gb.leading_monomials().iter().map(|m| m.x.iter().chain(m.d.iter()).copied().collect()).collect();
    let dim = krull_dim_of_monomials(2 * n, &lms).ok_or(Error::ImproperIdeal)?;
    if dim < n {
        return Err(Error::Internal(format!("characteristic dimension {dim} below {n}")));
    }
    let cross_checked = if cross_check {
        let symbols: Vec<_> = gb.elements().iter().map(|g| symbol_of(&g.initial_form(&vec![0; n], &vec![1; n]))).collect();
        let cgb = commutative_gb(&symbols, 2 * n, &TermOrder::GradedRevLex, budget)?;
        Some(cgb.krull_dim() == Some(dim))
    } else {
        None
    };
    Ok(CharDimension { n, dim, holonomic: dim == n, cross_checked })
}

/// Holonomic rank over rational-function coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "rank", rename_all = "kebab-case")]
pub enum RankVerdict {
    Finite { value: usize, standard_monomials: Vec<Vec<u32>> },
    Infinite,
    Inconclusive { budget: usize },
}

/// Counts the standard `d`-monomials of `Q(x)<d> I`.
pub fn holonomic_rank(ideal: &DIdeal, budget: usize) -> Result<RankVerdict> {
    let n = ideal.nvars();
    let gb = match rational_weyl_gb(ideal, budget) {
        Ok(g) => g,
        Err(Error::ResourceLimit { budget }) => return Ok(RankVerdict::Inconclusive { budget }),
        Err(e) => return Err(e),
    };
    let lead_d: Vec<Vec<u32>> = gb.leading_monomials().into_iter().map(|m| m.d).collect();
    let mut bounds = Vec::with_capacity(n);
    for i in 0..n {
        let pure = lead_d
            .iter()
            .filter(|e| e.iter().enumerate().all(|(j, &k)| j == i || k == 0))
            .map(|e| e[i])
            .min();
        match pure {
            Some(b) => bounds.push(b),
            None => return Ok(RankVerdict::Infinite),
        }
    }
    let mut standard = Vec::new();
    let mut e = vec![0u32; n];
    loop {
        if !lead_d.iter().any(|l| l.iter().zip(&e).all(|(a, b)| a <= b)) {
            standard.push(e.clone());
        }
        let mut i = 0;
        while i < n {
            e[i] += 1;
            if e[i] < bounds[i] {
                break;
            }
            e[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    Ok(RankVerdict::Finite { value: standard.len(), standard_monomials: standard })
}

/// True iff every row of `B` sums to zero componentwise, i.e. all column sums vanish.
pub fn regularity_row_sum(data: &HornData) -> bool {
    row_sums(data.b()).iter().all(num_traits::Zero::is_zero)
}

/// Both monomials of every lattice binomial have the same total `d`-degree.
pub fn lattice_binomials_homogeneous(data: &HornData) -> bool {
    (0..data.m()).all(|k| {
        let (mut plus, mut minus) = (0i64, 0i64);
        for i in 0..data.n() {
            let b = data.entry(i, k);
            if b > 0 {
                plus += b;
            } else {
                minus -= b;
            }
        }
        plus == minus
    })
}

/// A-degree of `x^a d^b`: `A (b - a)`.
fn a_degree(a: &IntMatrix, x: &[u32], d: &[u32]) -> Vec<i64> {
    (0..a.rows()).map(|i| (0..a.cols()).map(|j| a.get_i64(i, j) * (d[j] as i64 - x[j] as i64)).sum()).collect()
}

/// Every generator is homogeneous for `deg d_i = a_i = -deg x_i`.
pub fn check_a_homogeneous(ideal: &DIdeal, a: &IntMatrix) -> Result<bool> {
    if a.cols() != ideal.nvars() {
        return Err(Error::DimensionMismatch(format!("A has {} columns, ideal lives in D_{}", a.cols(), ideal.nvars())));
    }
    Ok(ideal.generators().iter().all(|g| is_a_homogeneous(g, a)))
}

pub fn is_a_homogeneous(op: &WeylOp, a: &IntMatrix) -> bool {
    let mut degs = op.terms().map(|(m, _)| a_degree(a, &m.x, &m.d));
    match degs.next() {
        Some(first) => degs.all(|d| d == first),
        None => true,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Holonomicity {
    Yes,
    No,
    Inconclusive,
    /// The ideal is the whole ring.
    ZeroModule,
}

/// Holonomicity verdict with the dimension when it was computed.
pub fn holonomicity(ideal: &DIdeal, budget: usize, cross_check: bool) -> Result<(Holonomicity, Option<CharDimension>)> {
    match char_dimension(ideal, budget, cross_check) {
        Ok(c) => Ok((if c.holonomic { Holonomicity::Yes } else { Holonomicity::No }, Some(c))),
        Err(Error::ResourceLimit { .. }) => Ok((Holonomicity::Inconclusive, None)),
        Err(Error::ImproperIdeal) => Ok((Holonomicity::ZeroModule, None)),
        Err(e) => Err(e),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolonomicityComparison {
    pub lattice: Holonomicity,
    pub lattice_dim: Option<CharDimension>,
    pub nhorn: Holonomicity,
    pub nhorn_dim: Option<CharDimension>,
    /// `None` if either side is inconclusive.
    pub agree: Option<bool>,
}

/// Holonomicity of the lattice basis module and of the normalized Horn module
/// must agree whenever the restriction statement applies.
pub fn holonomicity_transfer_consistency(data: &HornData, budget: usize) -> Result<HolonomicityComparison> {
    data.require_normalized()?;
    let (lattice, lattice_dim) = holonomicity(&data.build_lattice_ideal()?, budget, false)?;
    let (nhorn, nhorn_dim) = holonomicity(&data.nhorn_normalized()?, budget, false)?;
    let agree = match (&lattice, &nhorn) {
        (Holonomicity::Inconclusive, _) | (_, Holonomicity::Inconclusive) => None,
        (a, b) => Some(a == b),
    };
    Ok(HolonomicityComparison { lattice, lattice_dim, nhorn, nhorn_dim, agree })
}

/// Combined analysis of one ideal.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub system: String,
    pub holonomic: Holonomicity,
    pub char_dim: Option<usize>,
    pub rank: RankVerdict,
    pub regular_candidate: bool,
    pub a_homogeneous: Option<bool>,
    pub notes: Vec<String>,
}

/// Analyses `ideal` (one of the systems built from `data`); `a_grading` is
/// checked only for ideals of `D_n`.
pub fn analyze(system: &str, ideal: &DIdeal, data: &HornData, budget: usize) -> Result<AnalysisReport> {
    let (holonomic, dim) = holonomicity(ideal, budget, false)?;
    let rank = holonomic_rank(ideal, budget)?;
    let a_homogeneous =
        if ideal.nvars() == data.n() { Some(check_a_homogeneous(ideal, data.a())?) } else { None };
    let mut notes = vec![
        "holonomic: characteristic variety dimension under the order filtration".to_string(),
        "rank: standard monomials of the ideal over rational-function coefficients".to_string(),
        "regular_candidate: all column sums of B vanish".to_string(),
    ];
    if ideal.nvars() != data.n() {
        notes.push("a_homogeneous: not applicable outside D_n".into());
    }
    Ok(AnalysisReport {
        system: system.into(),
        holonomic,
        char_dim: dim.map(|d| d.dim),
        rank,
        regular_candidate: regularity_row_sum(data),
        a_homogeneous,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, ratio};
    use crate::groebner::DEFAULT_BUDGET;
    use crate::weyl::parse_op;

    fn ideal(n: usize, gens: &[&str]) -> DIdeal {
        DIdeal::new(n, gens.iter().map(|s| parse_op(s, n).unwrap()).collect()).unwrap()
    }

    fn gauss() -> HornData {
        let bm = IntMatrix::from_i64(&[&[1], &[1], &[-1], &[-1]]);
        HornData::validate(bm, vec![rat(0), ratio(3, 4), ratio(-1, 3), ratio(-2, 5)]).unwrap()
    }

    #[test]
    fn small_dimensions() {
        let c = char_dimension(&ideal(1, &["dx1"]), DEFAULT_BUDGET, true).unwrap();
        assert_eq!((c.dim, c.holonomic, c.cross_checked), (1, true, Some(true)));
        let z = char_dimension(&DIdeal::new(1, vec![]).unwrap(), DEFAULT_BUDGET, true).unwrap();
        assert_eq!((z.dim, z.holonomic), (2, false));
        assert!(matches!(char_dimension(&ideal(1, &["dx1", "x1"]), DEFAULT_BUDGET, false), Err(Error::ImproperIdeal)));
    }

    #[test]
    fn ranks() {
        let d = gauss();
        let r = holonomic_rank(&d.build_horn().unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(r, RankVerdict::Finite { value: 2, standard_monomials: vec![vec![0], vec![1]] });
        assert!(matches!(holonomic_rank(&ideal(2, &["dx1", "dx2"]), DEFAULT_BUDGET).unwrap(), RankVerdict::Finite { value: 1, .. }));
        assert!(matches!(holonomic_rank(&ideal(1, &["x1*dx1"]), DEFAULT_BUDGET).unwrap(), RankVerdict::Finite { value: 1, .. }));
        assert_eq!(holonomic_rank(&ideal(2, &["dx1"]), DEFAULT_BUDGET).unwrap(), RankVerdict::Infinite);
    }

    #[test]
    fn gauss_lattice_rank_and_dimension() {
        let d = gauss();
        let h = d.build_lattice_ideal().unwrap();
        assert!(matches!(holonomic_rank(&h, DEFAULT_BUDGET).unwrap(), RankVerdict::Finite { value: 2, .. }));
        let c = char_dimension(&h, DEFAULT_BUDGET, true).unwrap();
        assert_eq!((c.dim, c.cross_checked), (4, Some(true)));
        let cor = holonomicity_transfer_consistency(&d, DEFAULT_BUDGET).unwrap();
        assert_eq!(cor.agree, Some(true));
        assert_eq!(cor.nhorn, Holonomicity::Yes);
    }

    #[test]
    fn grading() {
        let a = IntMatrix::from_i64(&[&[1, 2]]);
        assert!(check_a_homogeneous(&ideal(2, &["x1*dx2"]), &a).unwrap());
        assert!(!check_a_homogeneous(&ideal(2, &["dx1 + dx2"]), &a).unwrap());
        let d = gauss();
        assert!(check_a_homogeneous(&d.build_lattice_ideal().unwrap(), d.a()).unwrap());
    }

    #[test]
    fn row_sum_criterion() {
        let d = gauss();
        assert!(regularity_row_sum(&d));
        assert!(lattice_binomials_homogeneous(&d));
        let e = HornData::validate(IntMatrix::from_i64(&[&[1], &[-2]]), vec![rat(0), rat(0)]).unwrap();
        assert!(!regularity_row_sum(&e));
        assert!(!lattice_binomials_homogeneous(&e));
    }
}
