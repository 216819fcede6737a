use fatdelta_core::arities::{
    arity_of, arity_specs, check_generic, generic_sweep, kleisli_maps_of_shape, non_generic_example, phi, psi, AritySpec,
    FillerVerdict, GenericSquare, KleisliMap,
};
use fatdelta_core::fat::enumerate_objects;
use fatdelta_core::relgraph::{enumerate_relgraph_maps, relgraph_universe, terminal_map, Path, RelGraph};
use fatdelta_core::verify::{check_cartesian_universe, check_descent};
use proptest::prelude::*;

/// Every square on `left` into maps between graphs of `universe`, with its
/// filler verdict.
fn squares(generator: &RelGraph, middle: &RelGraph, left: &KleisliMap, universe: &[RelGraph], bound: usize) -> Vec<FillerVerdict> {
    let lengths: Vec<usize> = left.edge_map.iter().map(Path::len).collect();
    let mut out = Vec::new();
    for x in universe {
        let tops = kleisli_maps_of_shape(generator, x, &lengths);
        for y in universe {
            let bottoms = enumerate_relgraph_maps(middle, y);
            for gamma in enumerate_relgraph_maps(x, y) {
                for beta in &bottoms {
                    let target = left.then(beta);
                    for alpha in tops.iter().filter(|a| a.then(&gamma) == target) {
                        let square = GenericSquare {
                            generator: generator.clone(),
                            middle: middle.clone(),
                            left: left.clone(),
                            ambient: x.clone(),
                            top: alpha.clone(),
                            target: y.clone(),
                            right: gamma.clone(),
                            bottom: beta.clone(),
                            bound,
                        };
                        out.push(check_generic(&square).unwrap());
                    }
                }
            }
        }
    }
    out
}

#[test]
fn arities_have_unique_fillers() {
    let universe = relgraph_universe(2, 2);
    for spec in arity_specs(3) {
        let a = arity_of(&spec);
        let verdicts = squares(&a.generator, &a.middle, &a.generic, &universe, 3);
        assert!(!verdicts.is_empty());
        for v in verdicts {
            assert!(matches!(v, FillerVerdict::UniqueFiller { .. }), "{spec:?}: {v:?}");
        }
    }
}

#[test]
fn non_generic_map_has_a_bad_square() {
    let (a, b, left) = non_generic_example();
    let verdicts = squares(&a, &b, &left, &relgraph_universe(2, 2), 2);
    assert!(verdicts.iter().any(|v| !matches!(v, FillerVerdict::UniqueFiller { .. })));
}

#[test]
fn counting_sweep_matches_square_by_square() {
    let universe = relgraph_universe(2, 2);
    let mut cases: Vec<_> = arity_specs(2)
        .iter()
        .map(arity_of)
        .map(|a| (a.generator, a.middle, a.generic))
        .collect();
    cases.push(non_generic_example());
    for (generator, middle, left) in &cases {
        let verdicts = squares(generator, middle, left, &universe, 2);
        let bad = verdicts.iter().filter(|v| !matches!(v, FillerVerdict::UniqueFiller { .. })).count();
        let sweep = generic_sweep(generator, middle, left, &universe, 2);
        assert_eq!(sweep.squares, verdicts.len() as u64);
        assert_eq!(sweep.passed(), bad == 0);
    }
}

#[test]
fn descent_on_small_objects() {
    let v = check_descent(4, 3, 3).unwrap();
    assert!(v.passed(), "{:?}", v.failures);
}

#[test]
fn cartesian_on_small_graphs() {
    let v = check_cartesian_universe(2, 3, 3).unwrap();
    assert!(v.passed(), "{:?}", v.failures);
}

#[test]
fn psi_then_phi_is_the_identity() {
    for x in enumerate_objects(6) {
        assert_eq!(phi(&psi(&x)).unwrap(), x);
    }
}

fn spec() -> impl Strategy<Value = AritySpec> {
    (0u8..=1, proptest::collection::vec(1usize..=4, 1..=4)).prop_map(|(e, l)| AritySpec::new(e, l).unwrap())
}

proptest! {
    #[test]
    fn arity_shape(spec in spec()) {
        let a = arity_of(&spec);
        let total: usize = spec.lengths.iter().sum();
        prop_assert_eq!(a.eta_p.edges(), total);
        prop_assert_eq!(a.generator.edge_count(), spec.lengths.len());
        prop_assert!(a.generic.is_valid(&a.generator, &a.middle, total));
        let through_terminal = a.generic.then(&terminal_map(&a.middle));
        let lengths: Vec<usize> = through_terminal.edge_map.iter().map(Path::len).collect();
        prop_assert_eq!(lengths, spec.lengths.clone());
        // blocks alternate and each block is uniformly marked
        let mut at = 0;
        for (i, &m) in spec.lengths.iter().enumerate() {
            prop_assert!((at..at + m).all(|e| a.eta_p.is_marked(e) == spec.block_marked(i)));
            at += m;
        }
    }

    #[test]
    fn bad_specs_are_rejected(e in 2u8..10, l in proptest::collection::vec(0usize..3, 0..4)) {
        prop_assert!(AritySpec::new(e, l.clone()).is_err());
        prop_assert_eq!(AritySpec::new(0, l.clone()).is_ok(), !l.is_empty() && !l.contains(&0));
    }
}
