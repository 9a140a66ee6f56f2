use std::collections::HashSet;

use majsim_core::analysis::phi_parity_ceiling;
use majsim_core::dynamics::{majority_step, run_dynamics, Period, StateVector};
use majsim_core::graph::sample_gnp;
use majsim_core::rng::derive_trial_seed;
use proptest::prelude::*;

fn state(n: usize, bits: u64) -> StateVector {
    let spins: Vec<i8> = (0..n)
        .map(|i| if bits >> i & 1 == 1 { 1 } else { -1 })
        .collect();
    StateVector::from_spins(&spins)
}

proptest! {
    #[test]
    fn step_is_monotone(n in 1usize..=64, p in 0.0f64..=1.0, seed: u64, lo: u64, extra: u64) {
        let g = sample_gnp(n, p, seed).unwrap();
        let (a, b) = (state(n, lo), state(n, lo | extra));
        prop_assert!(a.le(&b));
        prop_assert!(majority_step(&g, &a).unwrap().le(&majority_step(&g, &b).unwrap()));
    }

    #[test]
    fn step_commutes_with_negation(n in 1usize..=64, p in 0.0f64..=1.0, seed: u64, bits: u64) {
        let g = sample_gnp(n, p, seed).unwrap();
        let s = state(n, bits);
        prop_assert_eq!(
            majority_step(&g, &s.negated()).unwrap(),
            majority_step(&g, &s).unwrap().negated()
        );
    }

    #[test]
    fn period_at_most_two(n in 1usize..=40, p in 0.0f64..=1.0, seed: u64, bits: u64) {
        let g = sample_gnp(n, p, seed).unwrap();
        let t = run_dynamics(&g, &state(n, bits), 1000).unwrap();
        prop_assert!(matches!(t.period, Some(Period::Fixed) | Some(Period::Two)));
    }

    #[test]
    fn phi_is_parity_ceiling(x in 0.0f64..1e6, n in 1i64..1_000_000) {
        let k = phi_parity_ceiling(x, n);
        prop_assert!(k as f64 >= x);
        prop_assert!((k as f64) - x < 2.0);
        prop_assert_eq!((k - n).rem_euclid(2), 0);
    }

    #[test]
    fn trial_seeds_differ(master: u64, i in 0u64..(1 << 62), j in 0u64..(1 << 62)) {
        prop_assume!(i != j);
        prop_assert_ne!(derive_trial_seed(master, i), derive_trial_seed(master, j));
    }
}

#[test]
fn one_million_trial_seeds_are_distinct() {
    let seeds: HashSet<u64> = (0..1_000_000u64)
        .map(|i| derive_trial_seed(0xDEAD_BEEF, i))
        .collect();
    assert_eq!(seeds.len(), 1_000_000);
}
