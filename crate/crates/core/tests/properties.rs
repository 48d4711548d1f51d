//! Evaluation, topology, serialization and compiler properties over seeded
//! random inputs.

mod common;

use std::collections::BTreeMap;

use pldnn::expr::{circuit_truth_table, compile_expression};
use pldnn::gates::input_vectors;
use pldnn::rules::{compile_rule_library, infer, oracle_infer, CompileMode};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn convergence_is_monotone_and_bounded(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (net, assignment) = common::random_network(&mut rng);
        prop_assert_eq!(common::check_convergence(&net, &assignment), Ok(()));
    }

    #[test]
    fn storage_order_is_irrelevant(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (net, assignment) = common::random_network(&mut rng);
        prop_assert_eq!(common::check_order_independence(&net, &assignment, &mut rng), Ok(()));
    }

    #[test]
    fn serialization_round_trips(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (net, _) = common::random_network(&mut rng);
        prop_assert_eq!(common::check_serialization(&net, &mut rng), Ok(()));
    }

    #[test]
    fn circuits_match_formulas(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let expr = common::random_expression(&mut rng, 4, 5);
        let circuit = compile_expression(&expr);
        let names = circuit.variable_names();
        let table = circuit_truth_table(&circuit).unwrap();
        for (row, got) in input_vectors(names.len()).zip(table) {
            let env: BTreeMap<String, bool> = names.iter().cloned().zip(row).collect();
            prop_assert_eq!(got, common::eval_formula(&expr, &env), "{}", expr);
        }
    }

    #[test]
    fn rule_networks_match_forward_chaining(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let lib = common::random_library(&mut rng);
        for mode in [CompileMode::Conjunctive, CompileMode::Competitive] {
            let knet = compile_rule_library(&lib, mode).unwrap();
            for observed in common::signed_subsets(lib.atoms(), 2) {
                prop_assert_eq!(
                    infer(&knet, &observed).unwrap(),
                    oracle_infer(&lib, &observed, mode).unwrap()
                );
            }
        }
    }
}

#[test]
fn one_network_many_threads() {
    use pldnn::rules::{parse_rule_library, ANIMALS};

    fn shareable<T: Send + Sync>(_: &T) {}
    let lib = parse_rule_library(ANIMALS).unwrap();
    let knet = compile_rule_library(&lib, CompileMode::Competitive).unwrap();
    shareable(&knet);
    let queries = common::signed_subsets(&lib.attribute_atoms(), 1);
    let expected: Vec<_> = queries.iter().map(|q| infer(&knet, q).unwrap()).collect();
    std::thread::scope(|scope| {
        for _ in 0..4 {
            scope.spawn(|| {
                for (q, want) in queries.iter().zip(&expected) {
                    assert_eq!(&infer(&knet, q).unwrap(), want);
                }
            });
        }
    });
}
