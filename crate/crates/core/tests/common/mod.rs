#![allow(dead_code)]

use std::path::PathBuf;

use horn_dmod::exactlin::{rat, IntMatrix};
use horn_dmod::systems::DIdeal;
use horn_dmod::weyl::{ThetaPoly, WeylMono, WeylOp};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

pub fn fixture(name: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect()
}

pub fn small_op(n: usize, max_deg: u32) -> impl Strategy<Value = WeylOp> {
    let term = (prop::collection::vec(0u32..=max_deg, 2 * n), -4i64..=4);
    prop::collection::vec(term, 0..5).prop_map(move |ts| {
        let mut op = WeylOp::zero(n);
        for (e, c) in ts {
            let (x, d) = e.split_at(n);
            // keep total degree within the bound by truncating exponents greedily
            let mut budget = max_deg;
            let clip = |v: &[u32], budget: &mut u32| -> Vec<u32> {
                v.iter()
                    .map(|&k| {
                        let t = k.min(*budget);
                        *budget -= t;
                        t
                    })
                    .collect()
            };
            let x = clip(x, &mut budget);
            let d = clip(d, &mut budget);
            op.add_term(WeylMono { x, d }, rat(c));
        }
        op
    })
}

pub fn op_triple() -> impl Strategy<Value = (WeylOp, WeylOp, WeylOp)> {
    (1usize..=4).prop_flat_map(|n| (small_op(n, 4), small_op(n, 4), small_op(n, 4)))
}

pub fn small_theta(n: usize) -> impl Strategy<Value = ThetaPoly> {
    prop::collection::vec((prop::collection::vec(0u32..=2, n), -3i64..=3), 0..4).prop_map(move |ts| {
        ts.into_iter().fold(ThetaPoly::zero(n), |acc, (e, c)| {
            let mut t = ThetaPoly::constant(n, rat(c));
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = &t * &ThetaPoly::theta(n, i);
                }
            }
            &acc + &t
        })
    })
}

pub fn int_matrix(max_rows: usize, max_cols: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(-bound..=bound, c), r).prop_map(|rows| {
            let rows: Vec<Vec<BigInt>> = rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect();
            IntMatrix::from_rows(&rows).unwrap()
        })
    })
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    m.determinant().abs().is_one()
}

/// Small random left ideals: one or two variables, at most two generators of
/// total degree at most 2.
pub fn small_ideal() -> impl Strategy<Value = DIdeal> {
    let term = |n: usize| (prop::collection::vec(0u32..=1, 2 * n), -2i64..=2);
    (1usize..=2)
        .prop_flat_map(move |n| (Just(n), prop::collection::vec(prop::collection::vec(term(n), 1..=3), 1..=2)))
        .prop_map(|(n, gens)| {
            let ops = gens
                .into_iter()
                .map(|ts| {
                    let mut op = WeylOp::zero(n);
                    for (e, c) in ts {
                        let (x, d) = e.split_at(n);
                        if x.iter().chain(d).sum::<u32>() <= 2 {
                            op.add_term(WeylMono { x: x.to_vec(), d: d.to_vec() }, rat(c));
                        }
                    }
                    op
                })
                .collect();
            DIdeal::new(n, ops).unwrap()
        })
}
