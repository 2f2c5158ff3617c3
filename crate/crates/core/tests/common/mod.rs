#![allow(dead_code)]

use proptest::prelude::*;
use rumin_core::forms::masks_of_degree;
use rumin_core::rational::rat;
use rumin_core::{GroupFamily, InvariantForm, Rational, StratifiedLieAlgebra};

pub fn builtins() -> Vec<StratifiedLieAlgebra> {
    let mut out: Vec<StratifiedLieAlgebra> =
        (1..=5).map(|n| StratifiedLieAlgebra::builtin(GroupFamily::Abelian(n))).collect();
    out.extend((1..=3).map(|m| StratifiedLieAlgebra::builtin(GroupFamily::Heisenberg(m))));
    out.push(StratifiedLieAlgebra::builtin(GroupFamily::Engel));
    out
}

pub fn group(spec: &str) -> StratifiedLieAlgebra {
    StratifiedLieAlgebra::builtin(spec.parse().expect("builtin reference"))
}

pub fn rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=5).prop_map(|(p, q)| rat(p, q))
}

pub fn point(n: usize) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), n)
}

/// Random form of degree `k` on `n` generators, one coefficient per basis mask.
pub fn form(n: usize, k: usize) -> impl Strategy<Value = InvariantForm> {
    let masks = masks_of_degree(n, k);
    prop::collection::vec(rational(), masks.len()).prop_map(move |cs| {
        let mut f = InvariantForm::zero(n, k);
        for (m, c) in masks.iter().zip(cs) {
            f.add_term(*m, c);
        }
        f
    })
}
