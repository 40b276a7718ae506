mod support;

use std::collections::HashMap;

use bgrw_core::couplings::{run_probability_exact, ENUMERATION_LIMIT};
use bgrw_core::loops::{simulate_eta_loop, BackboneState};
use bgrw_core::process::{one_step_distribution, BgrwConfig, InitialTree, Move};
use bgrw_core::rng;
use bgrw_core::statistics::{hardtree_descent_probability, walked_straight_down, FirstPassage};
use bgrw_core::process::Growth;

fn key(created: bool, next: Move) -> (bool, Option<u32>) {
    (
        created,
        match next {
            Move::Neighbor(v) => Some(v),
            Move::NewLeaf => None,
        },
    )
}

#[test]
fn sampled_steps_follow_the_enumerated_kernel() {
    let mut r = rng::stream(7, 0);
    for i in 0..8 {
        let state = support::random_state(&mut r);
        for p in [0.1, 0.5, 0.9] {
            let exact: HashMap<_, f64> = one_step_distribution(&state, p)
                .unwrap()
                .into_iter()
                .map(|(o, q)| (key(o.created, o.next), q))
                .collect();
            assert!((exact.values().sum::<f64>() - 1.0).abs() < 1e-12);
            let n = 100_000;
            let mut counts: HashMap<_, u64> = HashMap::new();
            let mut draw = rng::stream(8, i);
            for _ in 0..n {
                let o = state.sample_step(p, &mut draw);
                *counts.entry(key(o.created, o.next)).or_insert(0) += 1;
            }
            assert!(counts.keys().all(|k| exact.contains_key(k)));
            let tv: f64 = exact
                .iter()
                .map(|(k, q)| (counts.get(k).copied().unwrap_or(0) as f64 / n as f64 - q).abs())
                .sum::<f64>()
                / 2.0;
            assert!(tv < 0.01, "state {i}, p {p}: tv {tv}");
        }
    }
}

#[test]
fn single_edge_hitting_time_is_geometric() {
    // l = 1, p = 0: from vertex 1 (one path edge, one loop) each step hits 0
    // with probability 1/2, so eta ~ Geometric(1/2), mean 2, variance 2
    let mut r = rng::stream(1, 0);
    let n = 100_000;
    let mut sum = 0u64;
    let mut ones = 0u64;
    for _ in 0..n {
        let FirstPassage::Hit(t) = simulate_eta_loop(1, 0.0, 1_000, &mut r).unwrap() else {
            panic!("censored");
        };
        sum += t;
        ones += (t == 1) as u64;
    }
    let mean = sum as f64 / n as f64;
    assert!((mean - 2.0).abs() < 3.0 * (2.0 / n as f64).sqrt(), "{mean}");
    let f = ones as f64 / n as f64;
    assert!((f - 0.5).abs() < 3.0 * (0.25 / n as f64).sqrt(), "{f}");
}

#[test]
fn loops_added_are_binomial() {
    let (t, p, runs) = (200u64, 0.3, 4000);
    let mut r = rng::stream(2, 0);
    let totals: Vec<f64> = (0..runs)
        .map(|_| {
            let mut s = BackboneState::minimal(6).unwrap();
            for _ in 0..t {
                s.step(p, &mut r);
            }
            (s.loops().iter().sum::<u64>() - 1) as f64
        })
        .collect();
    let mean = totals.iter().sum::<f64>() / runs as f64;
    let var = totals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (runs as f64 - 1.0);
    let (m0, v0) = (t as f64 * p, t as f64 * p * (1.0 - p));
    assert!((mean - m0).abs() < 4.0 * (v0 / runs as f64).sqrt(), "{mean}");
    assert!((var / v0 - 1.0).abs() < 0.1, "{var}");
}

#[test]
fn interior_jumps_are_fair_coins() {
    // short runs, so accumulated loops do not freeze the walker
    let mut r = rng::stream(3, 0);
    let (mut up, mut down) = (0u64, 0u64);
    for _ in 0..2000 {
        let mut s = BackboneState::minimal(8).unwrap();
        for _ in 0..200 {
            let w = s.walker();
            let to = s.step(0.3, &mut r).to;
            if w > 0 && w < 8 && to != w {
                if to > w {
                    up += 1;
                } else {
                    down += 1;
                }
            }
        }
    }
    let n = (up + down) as f64;
    assert!(n > 10_000.0);
    let z = (up as f64 - n / 2.0) / (n / 4.0).sqrt();
    assert!(z.abs() < 4.0, "up {up} down {down}");
}

#[test]
fn holding_at_the_far_end_without_growth() {
    // p = 0, walker at l with k loops: stays with probability k/(1+k)
    for k in [1u64, 3] {
        let mut loops = vec![0; 5];
        loops[4] = k;
        let mut r = rng::stream(4, k);
        let n = 100_000;
        let mut stays = 0;
        for _ in 0..n {
            let mut s = BackboneState::new(loops.clone(), 4).unwrap();
            stays += (s.step(0.0, &mut r).to == 4) as u64;
        }
        let q = k as f64 / (1.0 + k as f64);
        let f = stays as f64 / n as f64;
        assert!((f - q).abs() < 4.0 * (q * (1.0 - q) / n as f64).sqrt(), "k {k}: {f}");
    }
}

/// `P(some run of >= k ones in m coins)` by dynamic programming over the
/// current run length.
fn run_probability_dp(m: u32, k: u32, mu: f64) -> f64 {
    let mut state = vec![0.0; k as usize];
    state[0] = 1.0;
    let mut done = 0.0;
    for _ in 0..m {
        let mut next = vec![0.0; k as usize];
        for (len, &w) in state.iter().enumerate() {
            next[0] += w * (1.0 - mu);
            if len + 1 == k as usize {
                done += w * mu;
            } else {
                next[len + 1] += w * mu;
            }
        }
        state = next;
    }
    done
}

#[test]
fn run_probability_matches_dynamic_program() {
    for m in [1, 5, 12, 18] {
        assert!(m <= ENUMERATION_LIMIT);
        for k in 1..=m {
            for mu in [0.1, 0.3, 0.5, 0.9] {
                let exact = run_probability_exact(m, k, mu).unwrap();
                let dp = run_probability_dp(m, k, mu);
                assert!((exact - dp).abs() < 1e-12, "m {m} k {k} mu {mu}: {exact} vs {dp}");
            }
        }
    }
}

#[test]
fn straight_descent_beats_its_exact_lower_bound() {
    let growth = Growth::Polynomial { offset: 2, exponent: 2 };
    let (p, n, trials) = (0.5, 6u64, 20_000u64);
    let bound = hardtree_descent_probability(growth, p, n);
    let hits = (0..trials)
        .filter(|&i| {
            let c = BgrwConfig::new(p, n, 9, InitialTree::Hardtree { offset: 2, exponent: 2 }).with_stream(i);
            walked_straight_down(&c).unwrap()
        })
        .count() as f64;
    let f = hits / trials as f64;
    let sd = (bound * (1.0 - bound) / trials as f64).sqrt();
    assert!(f >= bound - 4.0 * sd, "{f} < {bound}");
    // a leaf created below the walker is the only other way down
    assert!(f <= 1.0 && bound > 0.3);
}
