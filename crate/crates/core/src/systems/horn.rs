use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::DIdeal;
use crate::error::{Error, Result};
use crate::exactlin::{format_rational, gale_dual, has_nonneg_kernel_vector, IntMatrix, Rational};
use crate::weyl::{ThetaPoly, WeylOp};

/// Hypothesis flags derived from `(B, kappa)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub full_rank_m: bool,
    pub no_nonneg_kernel_vector: bool,
    /// Some `m` rows of `B` form the identity matrix (any position).
    pub has_identity_submatrix: bool,
    /// The top `m` rows of `B` form the identity matrix.
    pub has_identity_top_block: bool,
    /// `kappa` vanishes on the identity rows (the top block if present,
    /// otherwise the first identity submatrix found).
    pub kappa_zero_on_identity_rows: bool,
    pub top_m_rows_rank_m: bool,
}

/// Validated input `(B, kappa)` with its Gale dual `A` and `beta = A kappa`.
#[derive(Clone, Debug)]
pub struct HornData {
    b: IntMatrix,
    kappa: Vec<Rational>,
    a: IntMatrix,
    beta: Vec<Rational>,
    flags: Flags,
    identity_rows: Option<Vec<usize>>,
    nonneg_witness: Option<Vec<BigInt>>,
}

impl HornData {
    /// Evaluates every hypothesis flag. Fails only on malformed input or
    /// `rank(B) < m`.
    pub fn validate(b: IntMatrix, kappa: Vec<Rational>) -> Result<HornData> {
        let (n, m) = (b.rows(), b.cols());
        if m == 0 || n == 0 {
            return Err(Error::ShapeMismatch("B must have at least one row and one column".into()));
        }
        if kappa.len() != n {
            return Err(Error::ShapeMismatch(format!("kappa has length {}, B has {} rows", kappa.len(), n)));
        }
        let a = gale_dual(&b)?;
        let beta: Vec<Rational> = (0..a.rows())
            .map(|i| a.row(i).iter().zip(&kappa).map(|(x, k)| Rational::from_integer(x.clone()) * k).sum())
            .collect();
        let nonneg = has_nonneg_kernel_vector(&b);
        let top: Vec<usize> = (0..m.min(n)).collect();
        let top_is_identity = n >= m && top.iter().all(|&i| is_unit_row(b.row(i), i));
        let identity_rows = if top_is_identity { Some(top.clone()) } else { find_identity_rows(&b) };
        let kappa_zero = identity_rows.as_ref().is_some_and(|rows| rows.iter().all(|&i| kappa[i].is_zero()));
        let top_rank = n >= m && b.select_rows(&top).rank() == m;
        let flags = Flags {
            full_rank_m: true,
            no_nonneg_kernel_vector: !nonneg.exists,
            has_identity_submatrix: identity_rows.is_some(),
            has_identity_top_block: top_is_identity,
            kappa_zero_on_identity_rows: kappa_zero,
            top_m_rows_rank_m: top_rank,
        };
        Ok(HornData { b, kappa, a, beta, flags, identity_rows, nonneg_witness: nonneg.witness })
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn kappa(&self) -> &[Rational] {
        &self.kappa
    }

    /// Gale dual of `B`, in Hermite normal form.
    pub fn a(&self) -> &IntMatrix {
        &self.a
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }

    pub fn flags(&self) -> &Flags {
        &self.flags
    }

    /// A nonnegative nonzero vector in the column span of `B`, if one exists.
    pub fn nonneg_witness(&self) -> Option<&[BigInt]> {
        self.nonneg_witness.as_deref()
    }

    /// Rows forming an identity submatrix: entry `k` is the row equal to `e_k`.
    pub fn identity_rows(&self) -> Option<&[usize]> {
        self.identity_rows.as_deref()
    }

    pub fn n(&self) -> usize {
        self.b.rows()
    }

    pub fn m(&self) -> usize {
        self.b.cols()
    }

    pub fn d(&self) -> usize {
        self.n() - self.m()
    }

    pub fn entry(&self, i: usize, k: usize) -> i64 {
        self.b.get_i64(i, k)
    }

    /// Moves a detected identity submatrix to the top rows, keeping the other
    /// rows in their original order. Returns the new data and `perm` with
    /// `perm[new_row] = old_row`.
    pub fn normalized(&self) -> Result<(HornData, Vec<usize>)> {
        let rows = self
            .identity_rows
            .as_ref()
            .ok_or_else(|| Error::NotNormalized("B has no m x m identity submatrix".into()))?;
        let mut perm = rows.clone();
        perm.extend((0..self.n()).filter(|i| !rows.contains(i)));
        let b = self.b.select_rows(&perm);
        let kappa = perm.iter().map(|&i| self.kappa[i].clone()).collect();
        Ok((HornData::validate(b, kappa)?, perm))
    }

    /// Hypotheses for the restriction comparison: top identity block and
    /// `kappa_1 = ... = kappa_m = 0`.
    pub fn require_normalized(&self) -> Result<()> {
        if !self.flags.has_identity_top_block {
            return Err(Error::NotNormalized("the top m rows of B are not the identity matrix".into()));
        }
        if !self.flags.kappa_zero_on_identity_rows {
            return Err(Error::NotNormalized("kappa is nonzero on the identity rows".into()));
        }
        Ok(())
    }

    fn require_horn(&self) -> Result<()> {
        if !self.flags.no_nonneg_kernel_vector {
            return Err(Error::HypothesisViolated(
                "no_nonneg_kernel_vector: the column span of B contains a nonzero nonnegative vector".into(),
            ));
        }
        Ok(())
    }

    /// Affine form `B_i . theta + kappa_i - l` in `m` theta variables.
    fn row_form(&self, i: usize, l: i64) -> ThetaPoly {
        let coeffs: Vec<Rational> = (0..self.m()).map(|k| Rational::from_integer(self.b[(i, k)].clone())).collect();
        ThetaPoly::linear(&coeffs, &self.kappa[i] - Rational::from_integer(l.into()))
    }

    /// `(q_k, p_k)` as theta-polynomials in `m` variables (`k` is 0-based).
    pub fn build_qp(&self, k: usize) -> Result<(ThetaPoly, ThetaPoly)> {
        if k >= self.m() {
            return Err(Error::IndexOutOfRange { index: k + 1, bound: self.m() });
        }
        let m = self.m();
        let mut q = ThetaPoly::one(m);
        let mut p = ThetaPoly::one(m);
        for i in 0..self.n() {
            let bik = self.entry(i, k);
            for l in 0..bik.abs() {
                let f = self.row_form(i, l);
                if bik > 0 {
                    q = &q * &f;
                } else {
                    p = &p * &f;
                }
            }
        }
        Ok((q, p))
    }

    /// `Horn(B, kappa)`: generators `q_k - z_k p_k` in `D_m`.
    pub fn build_horn(&self) -> Result<DIdeal> {
        self.require_horn()?;
        let m = self.m();
        let gens = (0..m)
            .map(|k| {
                let (q, p) = self.build_qp(k)?;
                Ok(&q.to_weyl() - &(&WeylOp::x(m, k) * &p.to_weyl()))
            })
            .collect::<Result<Vec<_>>>()?;
        DIdeal::new(m, gens)
    }

    /// `r_k` with `q_k = theta_k r_k` (requires the normalized form).
    pub fn build_r(&self, k: usize) -> Result<ThetaPoly> {
        self.require_normalized()?;
        if k >= self.m() {
            return Err(Error::IndexOutOfRange { index: k + 1, bound: self.m() });
        }
        let mut r = ThetaPoly::one(self.m());
        for i in self.m()..self.n() {
            let bik = self.entry(i, k);
            for l in 0..bik.max(0) {
                r = &r * &self.row_form(i, l);
            }
        }
        Ok(r)
    }

    /// `nHorn(B, kappa)`: generators `r_k(theta + e_k) d_k - p_k(theta)` in `D_m`.
    pub fn build_nhorn(&self) -> Result<DIdeal> {
        self.require_horn()?;
        self.nhorn_normalized()
    }

    /// Normalized Horn generators without the nonnegative-vector hypothesis,
    /// which the restriction statement does not use.
    pub fn nhorn_normalized(&self) -> Result<DIdeal> {
        self.require_normalized()?;
        let m = self.m();
        let gens = (0..m)
            .map(|k| {
                let (_, p) = self.build_qp(k)?;
                let mut e = vec![0i64; m];
                e[k] = 1;
                let r = self.build_r(k)?.shift(&e);
                Ok(&(&r.to_weyl() * &WeylOp::d(m, k)) - &p.to_weyl())
            })
            .collect::<Result<Vec<_>>>()?;
        DIdeal::new(m, gens)
    }

    /// Binomial `d^{b+} - d^{b-}` for column `k` (0-based) in `D_n`.
    pub fn lattice_binomial(&self, k: usize) -> WeylOp {
        let n = self.n();
        let plus: Vec<u32> = (0..n).map(|i| self.entry(i, k).max(0) as u32).collect();
        let minus: Vec<u32> = (0..n).map(|i| (-self.entry(i, k)).max(0) as u32).collect();
        &WeylOp::d_monomial(&plus) - &WeylOp::d_monomial(&minus)
    }

    /// `I(B)` as a left ideal of `D_n`.
    pub fn build_lattice_basis_ideal(&self) -> Result<DIdeal> {
        DIdeal::new(self.n(), (0..self.m()).map(|k| self.lattice_binomial(k)).collect())
    }

    /// Euler operators `E_i - beta_i` as theta-polynomials in `n` variables.
    pub fn euler_theta(&self) -> Vec<ThetaPoly> {
        (0..self.a.rows())
            .map(|i| {
                let coeffs: Vec<Rational> =
                    self.a.row(i).iter().map(|x| Rational::from_integer(x.clone())).collect();
                ThetaPoly::linear(&coeffs, -self.beta[i].clone())
            })
            .collect()
    }

    pub fn build_euler(&self) -> Vec<WeylOp> {
        self.euler_theta().iter().map(ThetaPoly::to_weyl).collect()
    }

    /// `H(B, kappa) = I(B) + <E - A kappa>` in `D_n`.
    pub fn build_lattice_ideal(&self) -> Result<DIdeal> {
        let mut gens: Vec<WeylOp> = (0..self.m()).map(|k| self.lattice_binomial(k)).collect();
        gens.extend(self.build_euler());
        DIdeal::new(self.n(), gens)
    }

    pub fn kappa_strings(&self) -> Vec<String> {
        self.kappa.iter().map(format_rational).collect()
    }
}

fn is_unit_row(row: &[BigInt], k: usize) -> bool {
    row.iter().enumerate().all(|(j, x)| if j == k { x.is_one() } else { x.is_zero() })
}

/// For each column `k`, the first row equal to `e_k`.
fn find_identity_rows(b: &IntMatrix) -> Option<Vec<usize>> {
    (0..b.cols()).map(|k| (0..b.rows()).find(|&i| is_unit_row(b.row(i), k))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{rat, ratio};
    use crate::weyl::parse_op;

    fn toy(c: Rational) -> HornData {
        HornData::validate(IntMatrix::from_i64(&[&[1], &[-1]]), vec![rat(0), c]).unwrap()
    }

    fn gauss(a: Rational, b: Rational, c: Rational) -> HornData {
        let bm = IntMatrix::from_i64(&[&[1], &[1], &[-1], &[-1]]);
        HornData::validate(bm, vec![rat(0), c - rat(1), -a, -b]).unwrap()
    }

    #[test]
    fn toy_systems() {
        let c = ratio(1, 2);
        let d = toy(c.clone());
        assert!(d.flags().has_identity_top_block && d.flags().kappa_zero_on_identity_rows);
        let (q, p) = d.build_qp(0).unwrap();
        assert_eq!(q, ThetaPoly::theta(1, 0));
        assert_eq!(p, ThetaPoly::linear(&[rat(-1)], c.clone()));
        let horn = d.build_horn().unwrap();
        assert_eq!(horn.generators()[0], parse_op("x1^2*dx1 + x1*dx1 - 1/2*x1", 1).unwrap());
        let nh = d.build_nhorn().unwrap();
        assert_eq!(nh.generators()[0], parse_op("dx1 + x1*dx1 - 1/2", 1).unwrap());
        let h = d.build_lattice_ideal().unwrap();
        assert_eq!(h.generators(), &[parse_op("dx1 - dx2", 2).unwrap(), parse_op("x1*dx1 + x2*dx2 - 1/2", 2).unwrap()]);
    }

    #[test]
    fn gauss_operators() {
        let (a, b, c) = (ratio(1, 3), ratio(2, 5), ratio(7, 4));
        let d = gauss(a.clone(), b.clone(), c.clone());
        assert!(d.flags().no_nonneg_kernel_vector);
        let t = ThetaPoly::theta(1, 0);
        let one = |x: &Rational| ThetaPoly::constant(1, x.clone());
        let (q, p) = d.build_qp(0).unwrap();
        assert_eq!(q, &t * &(&t + &one(&(&c - rat(1)))));
        assert_eq!(p, &(&t + &one(&a)) * &(&t + &one(&b)));
        let nh = d.build_nhorn().unwrap();
        let classical = &(&(&t + &one(&c)).to_weyl() * &WeylOp::d(1, 0)) - &p.to_weyl();
        assert_eq!(nh.generators()[0], classical);
        assert_eq!(d.build_lattice_basis_ideal().unwrap().generators()[0], parse_op("dx1*dx2 - dx3*dx4", 4).unwrap());
        assert_eq!(d.build_euler().len(), 3);
    }

    #[test]
    fn nhorn_times_z_is_horn() {
        let d = gauss(rat(1), rat(2), ratio(1, 2));
        let z = WeylOp::x(1, 0);
        assert_eq!(&z * &d.build_nhorn().unwrap().generators()[0], d.build_horn().unwrap().generators()[0]);
    }

    #[test]
    fn flags_and_errors() {
        let d = HornData::validate(IntMatrix::from_i64(&[&[1], &[1]]), vec![rat(0), rat(0)]).unwrap();
        assert!(!d.flags().no_nonneg_kernel_vector);
        assert!(matches!(d.build_horn(), Err(Error::HypothesisViolated(_))));
        let d = toy(rat(2));
        assert!(matches!(d.build_qp(1), Err(Error::IndexOutOfRange { .. })));
        let d = HornData::validate(IntMatrix::from_i64(&[&[1], &[-1]]), vec![rat(1), rat(0)]).unwrap();
        assert!(matches!(d.build_nhorn(), Err(Error::NotNormalized(_))));
        let r = HornData::validate(IntMatrix::from_i64(&[&[1, 2], &[2, 4], &[-1, -2]]), vec![rat(0); 3]);
        assert!(matches!(r, Err(Error::RankDeficient { .. })));
        assert!(matches!(HornData::validate(IntMatrix::from_i64(&[&[1], &[-1]]), vec![rat(0)]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn identity_block_moves_to_top() {
        let b = IntMatrix::from_i64(&[&[-1], &[1]]);
        let d = HornData::validate(b, vec![ratio(1, 2), rat(0)]).unwrap();
        assert!(!d.flags().has_identity_top_block);
        assert!(d.flags().has_identity_submatrix && d.flags().kappa_zero_on_identity_rows);
        let (nd, perm) = d.normalized().unwrap();
        assert_eq!(perm, vec![1, 0]);
        assert!(nd.flags().has_identity_top_block);
        assert_eq!(nd.kappa()[1], ratio(1, 2));
    }

    #[test]
    fn second_column_products() {
        let d = HornData::validate(IntMatrix::from_i64(&[&[1, 0], &[0, 1], &[-1, 0], &[0, -1]]), vec![rat(0); 4])
            .unwrap();
        let (q, p) = d.build_qp(1).unwrap();
        assert_eq!(q, ThetaPoly::theta(2, 1));
        assert_eq!(p, ThetaPoly::linear(&[rat(0), rat(-1)], rat(0)));
        let z = HornData::validate(IntMatrix::from_i64(&[&[1, 0], &[0, 0], &[-1, 1]]), vec![rat(0); 3]).unwrap();
        assert!(!z.flags().top_m_rows_rank_m);
    }
}
