use proptest::prelude::*;

use tdl_cli::expr::{parse_and_eval, parse_dl_element};
use tdl_core::action::Action;
use tdl_core::appcalc::{sign_preset, untwisted_preset};
use tdl_core::arith::{Fp, HalfInt, Prime, Sign};
use tdl_core::dlalgebra::{DlElement, Op};
use tdl_core::freealg::{monomials_up_to, AlgebraElement};

fn p3() -> Prime {
    Prime::new(3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_parse_elements(twisted in any::<bool>(), picks in prop::collection::vec((0usize..1000, 1i64..3), 0..5)) {
        let ctx = if twisted { sign_preset(p3()) } else { untwisted_preset(p3()) };
        let basis = monomials_up_to(&ctx, 10, 9).unwrap();
        let mut e = AlgebraElement::zero(p3());
        for (i, c) in picks {
            e.add_term(basis[i % basis.len()].clone(), Fp::new(c, p3()));
        }
        let action = Action::new(ctx);
        let back = parse_and_eval(&e.to_string(), &action).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn print_parse_operation_words(
        twisted in any::<bool>(),
        words in prop::collection::vec((prop::collection::vec((any::<bool>(), -20i64..20), 0..4), 1i64..3), 1..4),
    ) {
        let twist = if twisted { Sign::Minus } else { Sign::Plus };
        let mut e = DlElement::zero(p3(), twist);
        for (ops, c) in words {
            let ops: Vec<Op> = ops.into_iter().map(|(b, s)| Op::new(b, HalfInt::from_doubled(2 * s + twist.bit()))).collect();
            e.add_term(ops, Fp::new(c, p3()));
        }
        let back = parse_dl_element(&e.to_string(), p3()).unwrap();
        prop_assert_eq!(back.to_string(), e.to_string());
        // the twist is read off the indices, so it only survives with a nonempty word
        if e.terms().any(|(ops, _)| !ops.is_empty()) {
            prop_assert_eq!(back, e);
        }
    }
}
