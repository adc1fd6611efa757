mod common;

use common::*;
use proptest::prelude::*;
use twp::averaging::{pairwise_mean, twp_average, AveragingConfig};
use twp::baselines::{dba_initial_index, dba_step, psa_pairwise_mean, wgss, WgssMetric};
use twp::series::{Dataset, TimeSeries};

fn dataset(rng: &mut rand_chacha::ChaCha8Rng, n: usize, len: usize) -> Dataset {
    Dataset::new((0..n).map(|_| integer_series(rng, len)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pairwise_lengths(a in series_strategy(2..=40), b in series_strategy(2..=40)) {
        let (l1, l2) = (a.len(), b.len());
        prop_assert_eq!(pairwise_mean(&a, &b).len(), (l1 + l2 - 1).div_ceil(2));
        prop_assert_eq!(psa_pairwise_mean(&a, &b).len(), (l1 + l2).div_ceil(2));
    }

    #[test]
    fn pairwise_mean_of_a_series_with_itself(a in series_strategy(2..=40)) {
        prop_assert_eq!(pairwise_mean(&a, &a), a.clone());
        prop_assert_eq!(psa_pairwise_mean(&a, &a), a);
    }

    #[test]
    fn wgss_ignores_member_order(seed in any::<u64>(), n in 2usize..8, len in 2usize..20) {
        let mut r = rng(seed);
        let d = dataset(&mut r, n, len);
        let mean = integer_series(&mut r, len);
        let mut reversed = d.series().to_vec();
        reversed.reverse();
        let reversed = Dataset::new(reversed).unwrap();
        for m in WgssMetric::ALL {
            let (x, y) = (wgss(&d, &mean, m), wgss(&reversed, &mean, m));
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
        }
    }

    #[test]
    fn dba_step_ignores_member_order(seed in any::<u64>(), n in 2usize..8, len in 2usize..25) {
        let mut r = rng(seed);
        let d = dataset(&mut r, n, len);
        let start = d.series()[dba_initial_index(n, seed)].clone();
        let mut rotated = d.series().to_vec();
        rotated.rotate_left(1);
        let a = dba_step(&d, &start, None).unwrap();
        let b = dba_step(&Dataset::new(rotated).unwrap(), &start, None).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn dba_descends_under_squared_cost(seed in any::<u64>(), n in 2usize..7, len in 3usize..25) {
        let mut r = rng(seed);
        let members: Vec<Vec<f64>> = (0..n).map(|_| random_series(&mut r, len).into_inner()).collect();
        let mut mean = members[0].clone();
        let mut previous = f64::INFINITY;
        for _ in 0..10 {
            let (next, objective) = squared_dba_step(&members, &mean);
            prop_assert!(objective <= previous * (1.0 + 1e-12));
            previous = objective;
            mean = next;
        }
    }
}

#[test]
fn averaging_is_deterministic_and_keeps_lengths() {
    let mut r = rng(3);
    let d = dataset(&mut r, 9, 30);
    let cfg = AveragingConfig::new(0.001);
    let a = twp_average(&d, &cfg).unwrap();
    let b = twp_average(&d, &cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.mean.len(), 30);
    assert_eq!(a.sigma.len(), 30);
    assert!(a.iterations <= 50 * 9);
    assert_eq!(a.trace.len(), a.iterations + 1);
}

#[test]
fn amplitude_shift_moves_the_mean_and_keeps_sigma() {
    for seed in 0..10 {
        let mut r = rng(seed);
        let d = dataset(&mut r, 8, 25);
        let c = 37.0;
        let shifted = d.map(|s| s.shifted(c).unwrap());
        // MSS is not shift invariant, so fix the number of merges instead of
        // the threshold.
        let cfg = AveragingConfig::new(1e-300).with_max_iterations(12);
        let base = twp_average(&d, &cfg).unwrap();
        let moved = twp_average(&shifted, &cfg).unwrap();
        assert_eq!(base.iterations, moved.iterations);
        for (x, y) in base.mean.values().iter().zip(moved.mean.values()) {
            assert!((x + c - y).abs() <= 1e-9, "seed {seed}: {x} + {c} != {y}");
        }
        assert_eq!(base.sigma, moved.sigma);
    }
}

#[test]
fn identical_members_need_no_merges() {
    let s = TimeSeries::new(vec![0.0, 1.0, 4.0, 2.0, 0.5]).unwrap();
    let d = Dataset::new(vec![s.clone(); 6]).unwrap();
    let r = twp_average(&d, &AveragingConfig::default()).unwrap();
    assert_eq!(r.iterations, 0);
    assert_eq!(r.mean, s);
    assert!(r.sigma.iter().all(|&v| v == 0.0));
    for m in WgssMetric::ALL {
        assert_eq!(wgss(&d, &s, m), 0.0);
    }
}
