use proptest::prelude::*;
use ringlat::composite::{build_composite, composite_suite, Component};
use ringlat::fixtures;
use ringlat::poset::{
    antichain_profile, b_extension_criterion, chained_criterion, locally_minimal_criterion, SupportPoset,
};
use ringlat::report::canonical_hash;
use ringlat::Limits;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tree_criteria_agree(n in 1usize..=12, seed in any::<u64>()) {
        let p = SupportPoset::random_tree(n, seed);
        prop_assert!(p.is_tree());
        let b = b_extension_criterion(&p).unwrap();
        prop_assert!(b.agrees(), "{:?}", b);
        prop_assert_eq!(b.product_matches, b.is_b());
        prop_assert_eq!(b.sum_matches, b.is_b());
        prop_assert!(b.predicted_size >= b.product_formula || !b.is_b());
        let c = chained_criterion(&p);
        prop_assert_eq!(c.agrees(), Ok(true));
        prop_assert!(locally_minimal_criterion(&p).agrees);
    }

    #[test]
    fn chain_unions_are_b_with_product_size(lengths in prop::collection::vec(1usize..=4, 1..=4)) {
        let p = SupportPoset::chains(&lengths);
        let b = b_extension_criterion(&p).unwrap();
        prop_assert!(b.is_b());
        let expected: u128 = lengths.iter().map(|&l| l as u128 + 1).product();
        prop_assert_eq!(antichain_profile(&p).predicted_size, expected);
        prop_assert_eq!(b.product_formula, expected);
    }

    #[test]
    fn linear_posets_have_height_plus_two_elements(len in 1usize..=20) {
        let p = SupportPoset::chain(len);
        let c = chained_criterion(&p);
        prop_assert!(c.linear && c.single_maximal && c.size_matches);
        let b = b_extension_criterion(&p).unwrap();
        prop_assert!(b.is_b());
        prop_assert_eq!(b.product_formula, len as u128 + 1);
    }

    #[test]
    fn hash_is_independent_of_key_order(a in any::<i32>(), b in "[a-z]{0,6}") {
        let x: serde_json::Value = serde_json::from_str(&format!(r#"{{"a":{a},"b":"{b}"}}"#)).unwrap();
        let y: serde_json::Value = serde_json::from_str(&format!(r#"{{"b":"{b}","a":{a}}}"#)).unwrap();
        prop_assert_eq!(canonical_hash(&x), canonical_hash(&y));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_composites_pass_every_suite(n in 1usize..=4, seed in any::<u64>()) {
        let ext = fixtures::extension("f2-in-f4", Limits::default()).unwrap();
        let poset = SupportPoset::random_chains(n, seed);
        let comps = vec![Component::integral("f", ext), Component::prufer("p", poset).unwrap()];
        let c = build_composite("random", comps).unwrap();
        let r = composite_suite(&c).unwrap();
        prop_assert!(r.failures.is_empty(), "{:?}", r.failures);
    }
}
