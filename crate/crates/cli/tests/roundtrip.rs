use proptest::prelude::*;
use rumin_cli::parse_form;
use rumin_core::forms::masks_of_degree;
use rumin_core::rational::rat;
use rumin_core::{Monomial, Poly, PolyForm};

const DIM: usize = 4;

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((prop::collection::vec(0u16..3, DIM), -9i64..=9, 1i64..=4), 0..4).prop_map(|terms| {
        let mut p = Poly::zero();
        for (exps, num, den) in terms {
            p.add_term(Monomial::new(exps), rat(num, den));
        }
        p
    })
}

fn polyform() -> impl Strategy<Value = PolyForm> {
    (0..=DIM).prop_flat_map(|k| {
        let masks = masks_of_degree(DIM, k);
        prop::collection::vec(poly(), masks.len()).prop_map(move |coeffs| {
            let mut f = PolyForm::zero(DIM, k);
            for (m, p) in masks.iter().zip(&coeffs) {
                f.add_term(*m, p);
            }
            f
        })
    })
}

proptest! {
    #[test]
    fn print_then_parse_is_identity(f in polyform()) {
        let text = f.to_string();
        let parsed = parse_form(&text, DIM).unwrap();
        prop_assert!(parsed.warnings.is_empty());
        // the zero form prints as `0` and carries no degree
        if !f.is_zero() {
            prop_assert_eq!(&parsed.form, &f);
        }
        prop_assert_eq!(parsed.form.to_string(), text);
    }
}
