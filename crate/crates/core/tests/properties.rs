use lin_entropy::cli::{format_masses, parse_record, InputFormat, MeasureReport};
use lin_entropy::{
    corollary_residual, js_divergence, kl_divergence, lin_entropy, lin_entropy_implicit,
    lin_surprisal, logical_entropy, self_joint, self_product, shannon_entropy, DistributionF32,
    DistributionF64, MassFunction,
};
use proptest::prelude::*;

/// Normalizes raw non-negative weights into a distribution.
fn dist_of(weights: Vec<f64>) -> DistributionF64 {
    let total: f64 = weights.iter().sum();
    DistributionF64::from_masses(weights.iter().map(|w| w / total).collect()).unwrap()
}

fn distribution(max_n: usize) -> impl Strategy<Value = DistributionF64> {
    prop::collection::vec(prop_oneof![4 => 1e-3f64..1.0, 1 => Just(0.0)], 1..=max_n)
        .prop_filter("some positive weight", |w| w.iter().any(|&x| x > 0.0))
        .prop_map(dist_of)
}

fn positive_pair(max_n: usize) -> impl Strategy<Value = (DistributionF64, DistributionF64)> {
    (1..=max_n).prop_flat_map(|n| {
        (
            prop::collection::vec(1e-3f64..1.0, n),
            prop::collection::vec(1e-3f64..1.0, n),
        )
            .prop_map(|(a, b)| (dist_of(a), dist_of(b)))
    })
}

fn pair(max_n: usize) -> impl Strategy<Value = (DistributionF64, DistributionF64)> {
    (1..=max_n).prop_flat_map(|n| {
        let w = || {
            prop::collection::vec(prop_oneof![3 => 1e-3f64..1.0, 1 => Just(0.0)], n)
                .prop_filter("some positive weight", |w| w.iter().any(|&x| x > 0.0))
        };
        (w(), w()).prop_map(|(a, b)| (dist_of(a), dist_of(b)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn shannon_is_kl_between_self_joint_and_self_product(p in distribution(64)) {
        let d = kl_divergence(&self_joint(&p), &self_product(&p)).unwrap();
        prop_assert!((shannon_entropy(&p) - d).abs() <= 1e-12);
        prop_assert!(shannon_entropy(&p) <= (p.len() as f64).log2() + 1e-12);
    }

    #[test]
    fn js_symmetric_bounded_and_matches_averaged_kl((p, q) in pair(32)) {
        let pq = js_divergence(&p, &q).unwrap();
        prop_assert_eq!(pq.to_bits(), js_divergence(&q, &p).unwrap().to_bits());
        prop_assert!((0.0..=1.0).contains(&pq));
        let m = DistributionF64::from_masses(
            p.masses().iter().zip(q.masses()).map(|(a, b)| (a + b) / 2.0).collect(),
        ).unwrap();
        let averaged = 0.5 * kl_divergence(&p, &m).unwrap() + 0.5 * kl_divergence(&q, &m).unwrap();
        prop_assert!((pq - averaged).abs() <= 1e-12, "{} vs {}", pq, averaged);
    }

    #[test]
    fn kl_nonnegative_and_zero_iff_equal((p, q) in positive_pair(32)) {
        let d = kl_divergence(&p, &q).unwrap();
        prop_assert!(d >= 0.0);
        prop_assert_eq!(kl_divergence(&p, &p).unwrap(), 0.0);
        if p.l1_distance(&q).unwrap() > 1e-6 {
            prop_assert!(d > 0.0);
        }
    }

    #[test]
    fn lin_entropy_explicit_matches_implicit(p in distribution(64)) {
        prop_assert!((lin_entropy(&p) - lin_entropy_implicit(&p)).abs() <= 1e-12);
    }

    #[test]
    fn lin_entropy_in_unit_interval_and_zero_only_on_point_masses(p in distribution(64)) {
        let h = lin_entropy(&p);
        prop_assert!((0.0..1.0).contains(&h));
        prop_assert_eq!(h <= 1e-12, p.max_mass() >= 1.0 - 1e-12);
        prop_assert!(logical_entropy(&p) < 1.0);
    }

    #[test]
    fn corollary_holds(p in distribution(32)) {
        prop_assert!(corollary_residual(&p).abs() <= 1e-12);
    }

    #[test]
    fn permutation_invariance(p in distribution(32), seed in any::<u64>()) {
        let n = p.len();
        let mut order: Vec<usize> = (0..n).collect();
        // Deterministic Fisher-Yates from the seed.
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let q = p.permuted(&order).unwrap();
        prop_assert!((lin_entropy(&p) - lin_entropy(&q)).abs() <= 1e-12);
        prop_assert!((shannon_entropy(&p) - shannon_entropy(&q)).abs() <= 1e-12);
    }

    #[test]
    fn continuity_modulus((p, q) in pair(32), t in 0.0f64..1.0) {
        let dist = p.l1_distance(&q).unwrap();
        prop_assume!(dist > 0.0);
        let step = (1e-3 * t / dist).min(1.0);
        let moved = p.mix(&q, 1.0 - step).unwrap();
        prop_assert!(p.l1_distance(&moved).unwrap() <= 1e-3 + 1e-15);
        prop_assert!((lin_entropy(&p) - lin_entropy(&moved)).abs() <= 0.01);
    }

    #[test]
    fn concavity((p, q) in pair(32), lambda in 0.0f64..=1.0) {
        let mixed = p.mix(&q, lambda).unwrap();
        let slack = lin_entropy(&mixed) - lambda * lin_entropy(&p) - (1.0 - lambda) * lin_entropy(&q);
        prop_assert!(slack >= -1e-12);
    }

    #[test]
    fn surprisal_decreasing_in_unit_interval(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (i_lo, i_hi) = (lin_surprisal(lo).unwrap(), lin_surprisal(hi).unwrap());
        prop_assert!(i_lo >= i_hi);
        prop_assert!((0.0..=1.0).contains(&i_lo) && (0.0..=1.0).contains(&i_hi));
    }

    #[test]
    fn probs_record_round_trip(p in distribution(32)) {
        let original = MeasureReport::new("x", &p);
        let (_, reparsed) = parse_record(&format!("x: {}", format_masses(p.masses())), 1, InputFormat::Probs).unwrap();
        let again = MeasureReport::new("x", &reparsed);
        prop_assert_eq!(original.alphabet_size, again.alphabet_size);
        prop_assert!((original.shannon - again.shannon).abs() <= 1e-9);
        prop_assert!((original.lin - again.lin).abs() <= 1e-9);
        prop_assert!((original.logical - again.logical).abs() <= 1e-9);
        match (original.normalized_shannon, again.normalized_shannon) {
            (Some(a), Some(b)) => prop_assert!((a - b).abs() <= 1e-9),
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn single_precision_tracks_double(p in distribution(16)) {
        let q: DistributionF32 = p.cast().unwrap();
        prop_assert!((lin_entropy(&q) as f64 - lin_entropy(&p)).abs() <= 1e-5);
        prop_assert!((shannon_entropy(&q) as f64 - shannon_entropy(&p)).abs() <= 1e-4);
    }
}
