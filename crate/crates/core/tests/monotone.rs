mod common;

use catspan::decomposition::{interval_layout, nicify};
use catspan::graph::subgraph_weight;
use catspan::monotone::{is_monotone, lightest_monotone_tree, recursive_monotone_tree};
use catspan::reductions::complete;
use catspan::toolkit::generate::{corpus_spec, gen_kcaterpillar, InstanceSpec, WeightModel};
use common::brute_force_monotone;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scan_tree_is_the_lightest(k in 1usize..=4, extra in 0usize..6, seed in any::<u64>(), density in 300u32..=1000) {
        let mut spec = InstanceSpec::new((k + 1 + extra).min(10), k, seed);
        spec.density_permille = density;
        spec.weights = WeightModel::Uniform(9);
        let (g, d) = gen_kcaterpillar(&spec).unwrap();
        let d = nicify(&d).unwrap();
        let t = lightest_monotone_tree(&g, &d).unwrap();
        let w = subgraph_weight(&g, &t.tree.edges).unwrap();
        prop_assert_eq!(Some(w), brute_force_monotone(&g, &d));
    }

    #[test]
    fn both_trees_are_monotone(k in 1usize..=4, n in 20usize..80, seed in any::<u64>(), flaps in any::<bool>()) {
        let (g, d) = gen_kcaterpillar(&corpus_spec(k, n, seed, flaps, 600)).unwrap();
        let d = nicify(&d).unwrap();
        let layout = interval_layout(&d).unwrap();
        // the recursive construction needs monotone paths, which completion provides
        let (g, _) = complete(&g, &layout).unwrap();
        let lightest = lightest_monotone_tree(&g, &d).unwrap();
        let recursive = recursive_monotone_tree(&g, &d).unwrap();
        prop_assert!(is_monotone(&g, &lightest.tree, &layout).unwrap().monotone);
        prop_assert!(is_monotone(&g, &recursive.tree, &layout).unwrap().monotone);
        prop_assert!(subgraph_weight(&g, &lightest.tree.edges).unwrap()
            <= subgraph_weight(&g, &recursive.tree.edges).unwrap());
    }
}
