mod support;

use bgrw_core::couplings::{block_stopping_times, couple_bgrw_loop, minorant_walk};
use bgrw_core::loops::BackboneState;
use bgrw_core::process::{run_trajectory, BgrwConfig, InitialTree};
use bgrw_core::rng;
use bgrw_core::statistics::{drift_identity_check, merge_measures, tv_distance, EmpiricalMeasure};
use bgrw_core::topology::path_code;
use proptest::prelude::*;

fn initial_tree() -> impl Strategy<Value = InitialTree> {
    prop_oneof![
        Just(InitialTree::Single),
        (1u32..8).prop_map(InitialTree::Path),
        (1u32..8).prop_map(InitialTree::Star),
        (1u32..8).prop_map(InitialTree::PathWithLeaf),
    ]
}

fn probability() -> impl Strategy<Value = f64> {
    prop_oneof![Just(1.0), 0.01f64..=1.0]
}

fn measure() -> impl Strategy<Value = EmpiricalMeasure> {
    prop::collection::vec((0u32..6, 0u64..50), 0..6)
        .prop_map(|v| EmpiricalMeasure::from_counts(1, v.into_iter().map(|(l, c)| (path_code(l), c))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trajectories_keep_tree_and_unit_steps(
        p in probability(), initial in initial_tree(), seed in any::<u64>(), n in 0u64..400,
    ) {
        let mut c = BgrwConfig::new(p, n, seed, initial);
        c.options.audit_every = Some(1);
        c.options.keep_final_tree = true;
        let s = run_trajectory(&c, &mut []).unwrap();
        prop_assert_eq!(s.steps, n);
        for t in 1..=n as usize {
            prop_assert_eq!(s.distance[t].abs_diff(s.distance[t - 1]), 1);
            prop_assert!(s.vertex_count[t] - s.vertex_count[t - 1] <= 1);
            prop_assert!(s.degree[t] >= 1);
        }
        let tree = s.final_tree.unwrap();
        prop_assert_eq!(tree.edge_count() + 1, tree.vertex_count());
        tree.audit().unwrap();
    }

    #[test]
    fn drift_identity_holds(seed in any::<u64>(), p in probability()) {
        let mut r = rng::stream(seed, 0);
        let state = support::random_state(&mut r);
        let check = drift_identity_check(&state, p).unwrap();
        prop_assert!(check.difference <= 1e-12, "{:?}", check);
    }

    #[test]
    fn measure_merge_is_commutative_and_associative(a in measure(), b in measure(), c in measure()) {
        prop_assert_eq!(merge_measures(&a, &b).unwrap(), merge_measures(&b, &a).unwrap());
        let left = merge_measures(&merge_measures(&a, &b).unwrap(), &c).unwrap();
        let right = merge_measures(&a, &merge_measures(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left.total(), a.total() + b.total() + c.total());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn tv_is_a_bounded_metric(a in measure(), b in measure(), c in measure()) {
        prop_assume!(!a.is_empty() && !b.is_empty() && !c.is_empty());
        let ab = tv_distance(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert!((ab - tv_distance(&b, &a).unwrap()).abs() < 1e-15);
        prop_assert!(tv_distance(&a, &a).unwrap() < 1e-15);
        prop_assert!(ab <= tv_distance(&a, &c).unwrap() + tv_distance(&c, &b).unwrap() + 1e-12);
    }

    #[test]
    fn loop_counts_never_decrease(
        loops in prop::collection::vec(0u64..4, 2..10), p in 0.0f64..=1.0, seed in any::<u64>(),
    ) {
        let mut loops = loops;
        *loops.last_mut().unwrap() += 1;
        let l = loops.len() as u32 - 1;
        let mut state = BackboneState::new(loops, l).unwrap();
        let mut r = rng::stream(seed, 0);
        for _ in 0..300 {
            let before = state.loops().to_vec();
            let w = state.walker();
            let out = state.step(p, &mut r);
            let added: u64 = state.loops().iter().sum::<u64>() - before.iter().sum::<u64>();
            prop_assert_eq!(added, out.added_loop as u64);
            prop_assert!(state.loops().iter().zip(&before).all(|(a, b)| a >= b));
            prop_assert!(out.to.abs_diff(w) <= 1 && out.to <= l);
        }
    }

    #[test]
    fn minorant_dominates(p in probability(), seed in any::<u64>(), r in 1u32..8) {
        let c = BgrwConfig::new(p, 3000, seed, InitialTree::Single);
        let blocks = block_stopping_times(&c, r, u64::MAX).unwrap();
        for pt in minorant_walk(&blocks, r) {
            prop_assert!(pt.dominated, "{:?}", pt);
            prop_assert!(pt.distance as i64 >= r as i64 * pt.s_hat);
        }
    }

    #[test]
    fn coupling_is_ordered_and_aligned(ell in 1u32..8, p in probability(), seed in any::<u64>()) {
        let c = BgrwConfig::new(p, 2000, seed, InitialTree::PathWithLeaf(ell));
        let run = couple_bgrw_loop(&c, ell).unwrap();
        prop_assert!(run.ordered(), "{:?}", run);
        prop_assert_eq!(run.misalignments, 0);
    }
}
