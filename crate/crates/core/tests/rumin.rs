mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{builtins, group};
use proptest::prelude::*;
use rumin_core::forms::Exterior;
use rumin_core::heisenberg::{ideal_dc, Contact};
use rumin_core::rational::{pow, rat};
use rumin_core::rumin::betti_numbers;
use rumin_core::{
    heisenberg_ideal_dims, linear_growth_primitive, weights_table, JsetScan, PolyForm, RuminCalculus, RuminSpace,
    WeightGradedOperator,
};

fn set(v: &[u32]) -> BTreeSet<u32> {
    v.iter().copied().collect()
}

#[test]
fn rumin_dimensions_match_cohomology_and_duality() {
    for g in builtins() {
        let ext = Exterior::new(&g);
        let n = ext.dim();
        let dims: Vec<usize> = (0..=n).map(|k| RuminSpace::new(&ext, k).dim()).collect();
        assert_eq!(dims, betti_numbers(&ext), "{}", g.name());
        for k in 0..=n {
            assert_eq!(dims[k], dims[n - k], "{} degree {k}", g.name());
        }
        let w = weights_table(&g);
        assert_eq!(w[0], set(&[0]));
        assert_eq!(w[n], set(&[g.homogeneous_dim()]));
    }
}

#[test]
fn heisenberg_ideal_description_agrees() {
    for m in 1..=3 {
        let report = heisenberg_ideal_dims(&group(&format!("heisenberg:{m}"))).unwrap();
        assert!(report.consistent(), "m = {m}");
    }
}

#[test]
fn engel_fixture() {
    let g = group("engel");
    let w = weights_table(&g);
    assert_eq!(w, vec![set(&[0]), set(&[1]), set(&[3, 4]), set(&[6]), set(&[7])]);
    let scan = JsetScan::run(&RuminCalculus::new(&g), 4).unwrap();
    let expect: Vec<BTreeMap<u32, BTreeSet<u32>>> = vec![
        BTreeMap::from([(0, set(&[1]))]),
        BTreeMap::from([(1, set(&[2, 3]))]),
        BTreeMap::from([(3, set(&[3])), (4, set(&[2]))]),
        BTreeMap::from([(6, set(&[1]))]),
    ];
    assert_eq!(scan.forward, expect);
    assert_eq!(scan.adjoint[1], BTreeMap::from([(1, set(&[1]))]));
    assert_eq!(scan.adjoint[2], BTreeMap::from([(3, set(&[2])), (4, set(&[3]))]));
    assert_eq!(scan.adjoint[3], BTreeMap::from([(6, set(&[2, 3]))]));
    assert_eq!(scan.adjoint[4], BTreeMap::from([(7, set(&[1]))]));
    assert_eq!(scan.max_jump(), 3);
    assert!(scan.max_below_q() && scan.adjoint_matches() && scan.duality_holds() && scan.symmetric());
}

#[test]
fn projector_and_ideal_constructions_agree() {
    for (spec, expected) in [("heisenberg:1", 110), ("heisenberg:2", 1634)] {
        let g = group(spec);
        let calc = RuminCalculus::new(&g);
        let contact = Contact::new(&g).unwrap();
        let mut checked = 0;
        for k in 0..calc.dim() {
            for h in 0..=4 {
                for (_, _, a) in calc.rumin_monomials(k, h) {
                    assert_eq!(calc.dc(&a).unwrap(), ideal_dc(&calc, &contact, &a).unwrap(), "{spec}: {a}");
                    checked += 1;
                }
            }
        }
        assert_eq!(checked, expected);
    }
}

#[test]
fn pieces_have_order_equal_to_their_jump() {
    for spec in ["heisenberg:1", "heisenberg:2", "engel"] {
        let calc = RuminCalculus::new(&group(spec));
        for k in 0..calc.dim() {
            let op = WeightGradedOperator::build(&calc, k, 4).unwrap();
            for (j, images) in &op.pieces {
                for (i, img) in images {
                    let (_, w, h, _) = &op.sources[*i];
                    assert_eq!(img.bidegrees(calc.layers()), BTreeSet::from([(w + j, h - j)]), "{spec} k={k}");
                }
            }
        }
    }
}

#[test]
fn primitives_are_homogeneous() {
    for m in [1, 2] {
        let g = group(&format!("heisenberg:{m}"));
        let calc = RuminCalculus::new(&g);
        for h in 1..=calc.dim() {
            if h == m + 1 {
                continue;
            }
            for beta in calc.rumin_space(h).basis() {
                let w = beta.pure_weight(g.layers()).unwrap();
                let alpha = linear_growth_primitive(&calc, beta).unwrap();
                let l = rat(5, 3);
                assert_eq!(calc.dilate(&alpha, &l), alpha.scale(&pow(&l, w as i32)));
            }
        }
    }
}

fn monomial_case() -> impl Strategy<Value = (String, usize, u32, usize, (i64, i64))> {
    (
        prop::sample::select(vec!["abelian:3", "heisenberg:1", "heisenberg:2", "engel"]),
        0usize..4,
        0u32..=3,
        any::<usize>(),
        (1i64..=9, 1i64..=9),
    )
        .prop_map(|(s, k, h, i, l)| (s.to_string(), k, h, i, l))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dc_commutes_with_dilations((spec, k, h, i, (p, q)) in monomial_case()) {
        let calc = RuminCalculus::new(&group(&spec));
        let k = k.min(calc.dim() - 1);
        let monos = calc.rumin_monomials(k, h);
        prop_assume!(!monos.is_empty());
        let a: &PolyForm = &monos[i % monos.len()].2;
        let l = rat(p, q);
        prop_assert_eq!(calc.dc(&calc.dilate(a, &l)).unwrap(), calc.dilate(&calc.dc(a).unwrap(), &l));
    }
}
