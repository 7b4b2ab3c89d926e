use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use unimod::experiments::{estimate_with_stream, is_unimodular_small, rank_mod_p, SampleStream};
use unimod::rng::SplitMix64;
use unimod::{
    convergence_sweep, estimate_density, exhaustive_density, is_unimodular, verify_local_density, BoxSpec,
    IntMatrix,
};

/// Unimodular count over `[-B, B)^{k×n}` through the general BigInt path.
fn slow_count(k: usize, n: usize, bound: i64) -> u64 {
    let width = 2 * bound;
    let total = (width as u64).pow((k * n) as u32);
    let mut entries = vec![0i64; k * n];
    let mut hits = 0;
    for idx in 0..total {
        let mut rest = idx;
        for x in entries.iter_mut() {
            *x = (rest % width as u64) as i64 - bound;
            rest /= width as u64;
        }
        if is_unimodular(&IntMatrix::from_i64(k, n, &entries).unwrap()).unwrap() {
            hits += 1;
        }
    }
    hits
}

#[test]
fn exhaustive_matches_slow_enumeration() {
    for (k, n, b) in [(1u32, 2u32, 1u64), (1, 2, 3), (1, 3, 2), (2, 3, 1), (2, 3, 2), (2, 2, 2), (3, 3, 1)] {
        let rep = exhaustive_density(BoxSpec::new(k, n, b).unwrap(), 1_000_000).unwrap();
        assert_eq!(rep.hits, slow_count(k as usize, n as usize, b as i64), "k={k} n={n} B={b}");
        assert_eq!(rep.total, BigInt::from(2 * b).pow(k * n));
    }
}

#[test]
fn smallest_pair_boxes_have_density_three_quarters() {
    for b in [1, 2] {
        let rep = exhaustive_density(BoxSpec::new(1, 2, b).unwrap(), 1_000).unwrap();
        assert_eq!(rep.density.to_string(), "3/4");
    }
}

#[test]
fn budget_is_enforced_before_work() {
    let err = exhaustive_density(BoxSpec::new(2, 4, 1000).unwrap(), 1_000_000).unwrap_err();
    assert!(matches!(err, unimod::Error::BudgetExceeded { budget: 1_000_000, .. }));
}

#[test]
fn estimates_are_deterministic_and_shard_invariant() {
    let spec = BoxSpec::new(2, 3, 1_000_000).unwrap();
    let base = estimate_density(spec, 20_000, 7, 1).unwrap();
    for shards in [1, 2, 3, 8, 17] {
        let rep = estimate_density(spec, 20_000, 7, shards).unwrap();
        assert_eq!(rep.hits, base.hits, "shards={shards}");
        assert_eq!(rep.estimate.to_bits(), base.estimate.to_bits());
    }
    assert_ne!(estimate_density(spec, 20_000, 8, 1).unwrap().hits, base.hits);
}

#[test]
fn enumeration_stream_reproduces_exhaustive_counts() {
    let spec = BoxSpec::new(2, 3, 2).unwrap();
    let total = spec.total().to_u64().unwrap();
    let exact = exhaustive_density(spec, total).unwrap();
    for shards in [1, 5] {
        let rep = estimate_with_stream(spec, total, SampleStream::Enumerate, shards).unwrap();
        assert_eq!(rep.hits, exact.hits);
    }
    assert!(estimate_with_stream(spec, total + 1, SampleStream::Enumerate, 1).is_err());
}

#[test]
fn estimates_land_near_theory() {
    // 4.5σ keeps the false-failure rate for these fixed seeds negligible
    for (k, n) in [(1, 2), (1, 3), (2, 3), (3, 4)] {
        let rep = estimate_density(BoxSpec::new(k, n, 1 << 20).unwrap(), 50_000, 11, 4).unwrap();
        let z = rep.z_score.unwrap();
        assert!(z.abs() < 4.5, "k={k} n={n} z={z}");
    }
}

#[test]
fn sweep_mixes_enumeration_and_sampling() {
    let reps = convergence_sweep(1, 2, &[1, 2, 1000], 100, 3, 2).unwrap();
    assert_eq!(reps[0].samples, 4);
    assert_eq!(reps[0].hits, 3);
    assert_eq!(reps[1].samples, 16);
    assert_eq!(reps[2].samples, 100);
    assert!(convergence_sweep(1, 2, &[3, 2], 100, 3, 2).is_err());
    let again = convergence_sweep(1, 2, &[1, 2, 1000], 100, 3, 5).unwrap();
    assert_eq!(
        reps.iter().map(|r| r.hits).collect::<Vec<_>>(),
        again.iter().map(|r| r.hits).collect::<Vec<_>>()
    );
}

#[test]
fn local_verification_agrees_for_small_primes() {
    for p in [2u64, 3] {
        for n in 1..=3u32 {
            for k in 1..=n {
                let cmp = verify_local_density(p, k, n, 1_000_000).unwrap();
                assert!(cmp.equal, "p={p} k={k} n={n}");
            }
        }
    }
    assert!(verify_local_density(4, 1, 2, 100).is_err());
}

#[test]
fn invalid_arguments_are_rejected() {
    assert!(BoxSpec::new(3, 2, 5).is_err());
    assert!(BoxSpec::new(1, 2, 0).is_err());
    assert!(estimate_density(BoxSpec::new(1, 2, 5).unwrap(), 99, 0, 1).is_err());
    assert!(estimate_density(BoxSpec::new(1, 2, 5).unwrap(), 100, 0, 0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn fast_path_agrees_with_bigint(
        (k, n, e) in (1usize..=4).prop_flat_map(|n| (1..=n, Just(n)))
            .prop_flat_map(|(k, n)| (Just(k), Just(n), prop::collection::vec(-6i64..6, k * n)))
    ) {
        let a = IntMatrix::from_i64(k, n, &e).unwrap();
        prop_assert_eq!(is_unimodular_small(&e, k, n), is_unimodular(&a).unwrap());
    }

    #[test]
    fn fast_path_agrees_on_wide_entries(seed in any::<u64>(), k in 1usize..=3, extra in 0usize..3) {
        let n = k + extra;
        let mut g = SplitMix64::new(seed);
        let e: Vec<i64> = (0..k * n).map(|_| g.in_box(1 << 40)).collect();
        let a = IntMatrix::from_i64(k, n, &e).unwrap();
        prop_assert_eq!(is_unimodular_small(&e, k, n), is_unimodular(&a).unwrap());
    }

    #[test]
    fn rank_mod_p_matches_minor_test(
        (k, n, e) in (1usize..=3).prop_flat_map(|n| (1..=n, Just(n)))
            .prop_flat_map(|(k, n)| (Just(k), Just(n), prop::collection::vec(0u64..5, k * n))),
        p in prop::sample::select(vec![2u64, 3, 5])
    ) {
        let signed: Vec<i64> = e.iter().map(|&x| x as i64).collect();
        let a = IntMatrix::from_i64(k, n, &signed).unwrap();
        let pb = BigInt::from(p);
        let full = unimod::minors(&a, k).unwrap().values.iter().any(|m| m % &pb != BigInt::from(0));
        let mut buf = e.clone();
        prop_assert_eq!(rank_mod_p(&mut buf, k, n, p) == k, full);
    }
}
