use clasper_core::clasper::random::{random_clasper, random_marking, random_tree};
use clasper_core::clasper::{
    classify_tree, components, find_subtrees, graph_degrees, validate_clasper, zip, zip_with, ClasperGraph,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zip_terminates_validates_and_is_order_independent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_clasper(&mut rng, 12);
        let m = random_marking(&mut rng, &g);
        let base = zip(&g, &m).unwrap();
        prop_assert!(base.steps <= base.step_bound);
        prop_assert!(validate_clasper(&base.graph).is_empty());
        for _ in 0..5 {
            let mut order = ChaCha8Rng::seed_from_u64(rng.gen());
            let other = zip_with(&g, &m, |marks| order.gen_range(0..marks.len())).unwrap();
            prop_assert!(other.graph.isomorphic(&base.graph));
        }
    }

    #[test]
    fn strict_tree_degree_matches_s_degree(seed in any::<u64>(), nodes in 0usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let strict = rng.gen_bool(0.5);
        let g = random_tree(&mut rng, nodes, strict);
        let c = classify_tree(&g, 0).unwrap();
        let d = graph_degrees(&g, 0).unwrap();
        if c.is_strict {
            prop_assert_eq!(Some(d.s_degree), d.strict_degree);
            prop_assert_eq!(d.s_degree.to_int(), c.degree.map(|x| x as i64));
        } else {
            prop_assert!(d.strict_degree.is_none());
        }
    }

    #[test]
    fn e_degree_is_a_positive_integer(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_clasper(&mut rng, 12);
        for t in find_subtrees(&g).unwrap().good_input {
            prop_assert!(t.e_degree >= 1);
        }
    }

    #[test]
    fn json_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_clasper(&mut rng, 12);
        prop_assert_eq!(ClasperGraph::from_json(&g.to_json()).unwrap(), g);
    }
}

#[test]
fn zip_on_larger_claspers_halts() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let g = random_clasper(&mut rng, 40);
        let m = random_marking(&mut rng, &g);
        let z = zip(&g, &m).unwrap();
        assert!(z.steps <= z.step_bound);
        assert!(validate_clasper(&z.graph).is_empty());
        assert!(!components(&z.graph).is_empty());
    }
}
