mod common;

use common::gen::small_presentation;
use common::oracle::brute_force_sizes;
use common::sorted_sizes;
use pmdecomp::decompose::{decompose, verify, Options, Strategy as Method};
use pmdecomp::field::Field;
use pmdecomp::fixtures;
use proptest::prelude::*;

#[test]
fn oracle_agrees_on_fixtures() {
    assert_eq!(brute_force_sizes(&fixtures::linked_triple()), vec![(1, 1), (3, 3)]);
    assert_eq!(brute_force_sizes(&fixtures::glued_pair(Field::F2)), vec![(2, 1)]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn summands_match_brute_force(m in small_presentation()) {
        for s in [Method::Exhaustive, Method::Aida, Method::IntervalAuto] {
            let d = decompose(&m, &Options::with_strategy(s)).unwrap();
            prop_assert!(verify(&d).is_ok());
            prop_assert_eq!(sorted_sizes(&d), brute_force_sizes(&d.input), "{}", s);
        }
    }
}
