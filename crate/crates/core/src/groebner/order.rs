use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{Error, Result};

/// Monomial order on `D_n` (variables laid out `x_1..x_n, d_1..d_n`) or on a
/// commutative ring with `nvars` indeterminates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TermOrder {
    GradedRevLex,
    Lex,
    /// Any monomial containing a listed variable beats every monomial without one.
    Elimination { block: Vec<usize> },
    /// Weight vector refined by graded reverse lexicographic order.
    WeightRefined { weight: Vec<i64> },
    /// Compare the `d`-part completely (grevlex) before the `x`-part. Used to
    /// read off Groebner bases over rational-function coefficients.
    DBlock,
}

impl TermOrder {
    /// `(u, v)`-weight refined by grevlex on `D_n`; requires `u + v >= 0`.
    pub fn weyl_weight(u: &[i64], v: &[i64]) -> Result<TermOrder> {
        if u.len() != v.len() {
            return Err(Error::InvalidOrder("u and v differ in length".into()));
        }
        if let Some(i) = (0..u.len()).find(|&i| u[i] + v[i] < 0) {
            return Err(Error::InvalidOrder(format!("u + v is negative at position {}", i + 1)));
        }
        let mut weight = u.to_vec();
        weight.extend_from_slice(v);
        Ok(TermOrder::WeightRefined { weight })
    }

    /// Eliminates the differentials `d_j` for `j` in `indices` (0-based) in `D_n`.
    pub fn eliminate_d(n: usize, indices: &[usize]) -> TermOrder {
        TermOrder::Elimination { block: indices.iter().map(|&j| n + j).collect() }
    }

    /// True if the order is a well-order compatible with Weyl multiplication
    /// without homogenization (no negative weights).
    pub fn needs_homogenization(&self) -> bool {
        matches!(self, TermOrder::WeightRefined { weight } if weight.iter().any(|&w| w < 0))
    }

    pub(crate) fn compile(&self, nvars: usize, weyl_n: Option<usize>) -> Result<CompiledOrder> {
        let ones = vec![1; nvars];
        let all: Vec<usize> = (0..nvars).collect();
        let steps = match self {
            TermOrder::GradedRevLex => vec![Step::Weight(ones), Step::RevLex(all)],
            TermOrder::Lex => vec![Step::Lex(all)],
            TermOrder::Elimination { block } => {
                if block.iter().any(|&i| i >= nvars) {
                    return Err(Error::InvalidOrder("elimination block out of range".into()));
                }
                let mut ind = vec![0; nvars];
                for &i in block {
                    ind[i] = 1;
                }
                vec![Step::Weight(ind), Step::Weight(ones), Step::RevLex(all)]
            }
            TermOrder::WeightRefined { weight } => {
                if weight.len() != nvars {
                    return Err(Error::InvalidOrder(format!(
                        "weight has length {}, expected {}",
                        weight.len(),
                        nvars
                    )));
                }
                if let Some(n) = weyl_n {
                    if let Some(i) = (0..n).find(|&i| weight[i] + weight[n + i] < 0) {
                        return Err(Error::InvalidOrder(format!("u + v is negative at position {}", i + 1)));
                    }
                }
                vec![Step::Weight(weight.clone()), Step::Weight(ones), Step::RevLex(all)]
            }
            TermOrder::DBlock => {
                let n = weyl_n.ok_or_else(|| Error::InvalidOrder("d-block order needs a Weyl ring".into()))?;
                let mut dw = vec![0; nvars];
                let mut xw = vec![0; nvars];
                for i in 0..n {
                    xw[i] = 1;
                    dw[n + i] = 1;
                }
                vec![
                    Step::Weight(dw),
                    Step::RevLex((n..2 * n).collect()),
                    Step::Weight(xw),
                    Step::RevLex((0..n).collect()),
                ]
            }
        };
        Ok(CompiledOrder { steps })
    }
}

#[derive(Clone, Debug)]
pub(crate) enum Step {
    Weight(Vec<i64>),
    /// Larger monomial has the smaller exponent at the last differing listed variable.
    RevLex(Vec<usize>),
    Lex(Vec<usize>),
}

#[derive(Clone, Debug)]
pub(crate) struct CompiledOrder {
    pub steps: Vec<Step>,
}

impl CompiledOrder {
    /// Prepends a total-degree step over every variable (homogenized rings).
    pub fn with_total_degree_first(mut self, nvars: usize) -> Self {
        self.steps.insert(0, Step::Weight(vec![1; nvars]));
        self
    }

    /// Extends weight vectors with zeros for extra trailing variables.
    pub fn pad(mut self, nvars: usize) -> Self {
        for s in &mut self.steps {
            if let Step::Weight(w) = s {
                w.resize(nvars, 0);
            }
        }
        self
    }

    /// Sort key whose lexicographic order agrees with [`CompiledOrder::cmp`].
    pub fn key(&self, e: &[u16]) -> Vec<i64> {
        let mut k = Vec::new();
        for step in &self.steps {
            match step {
                Step::Weight(w) => k.push(e.iter().zip(w).map(|(&x, &c)| x as i64 * c).sum()),
                Step::RevLex(vars) => k.extend(vars.iter().rev().map(|&i| -(e[i] as i64))),
                Step::Lex(vars) => k.extend(vars.iter().map(|&i| e[i] as i64)),
            }
        }
        k
    }

    pub fn cmp(&self, a: &[u16], b: &[u16]) -> Ordering {
        for step in &self.steps {
            let o = match step {
                Step::Weight(w) => {
                    let wa: i64 = a.iter().zip(w).map(|(&e, &k)| e as i64 * k).sum();
                    let wb: i64 = b.iter().zip(w).map(|(&e, &k)| e as i64 * k).sum();
                    wa.cmp(&wb)
                }
                Step::RevLex(vars) => vars
                    .iter()
                    .rev()
                    .map(|&i| b[i].cmp(&a[i]))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal),
                Step::Lex(vars) => {
                    vars.iter().map(|&i| a[i].cmp(&b[i])).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
                }
            };
            if o.is_ne() {
                return o;
            }
        }
        Ordering::Equal
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_sum() {
        assert!(TermOrder::weyl_weight(&[-1, 0], &[0, 0]).is_err());
        assert!(TermOrder::weyl_weight(&[0, -1], &[0, 1]).is_ok());
        let bad = TermOrder::WeightRefined { weight: vec![-2, 1] };
        assert!(bad.compile(2, Some(1)).is_err());
    }

    #[test]
    fn grevlex_basics() {
        let o = TermOrder::GradedRevLex.compile(3, None).unwrap();
        // x^2 > xy > y^2 > xz > yz > z^2 in grevlex with x > y > z
        let seq: [[u16; 3]; 6] = [[2, 0, 0], [1, 1, 0], [0, 2, 0], [1, 0, 1], [0, 1, 1], [0, 0, 2]];
        for w in seq.windows(2) {
            assert_eq!(o.cmp(&w[0], &w[1]), Ordering::Greater, "{:?}", w);
        }
    }

    #[test]
    fn key_agrees_with_cmp() {
        let orders = [
            TermOrder::GradedRevLex.compile(4, Some(2)).unwrap(),
            TermOrder::eliminate_d(2, &[0]).compile(4, Some(2)).unwrap(),
            TermOrder::weyl_weight(&[0, -1], &[0, 1]).unwrap().compile(4, Some(2)).unwrap().pad(5).with_total_degree_first(5),
        ];
        let monos: Vec<Vec<u16>> = (0..243u32)
            .map(|mut k| (0..5).map(|_| { let d = (k % 3) as u16; k /= 3; d }).collect())
            .collect();
        for o in &orders {
            for a in &monos {
                for b in &monos {
                    assert_eq!(o.key(a).cmp(&o.key(b)), o.cmp(a, b));
                }
            }
        }
    }

    #[test]
    fn elimination_dominates() {
        let o = TermOrder::eliminate_d(2, &[1]).compile(4, Some(2)).unwrap();
        assert_eq!(o.cmp(&[0, 0, 0, 1], &[5, 5, 5, 0]), Ordering::Greater);
    }
}
