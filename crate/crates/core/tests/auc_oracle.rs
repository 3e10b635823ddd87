mod support;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rodtree::metrics::{auc_roc, roc_curve};
use rodtree::Exact;
use support::oracle;

#[test]
fn five_hundred_random_vectors_match_pair_counting() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut done = 0;
    while done < 500 {
        let n = rng.gen_range(2..=100);
        // few distinct scores, so ties are frequent
        let levels = rng.gen_range(1..=12);
        let labels: Vec<u8> = (0..n).map(|_| u8::from(rng.gen_bool(0.3))).collect();
        if !labels.contains(&0) || !labels.contains(&1) {
            continue;
        }
        let scores: Vec<f64> = (0..n)
            .map(|_| rng.gen_range(0..levels) as f64 / levels as f64)
            .collect();
        let got = auc_roc(&labels, &scores).unwrap();
        let want = oracle::auc_pairs(&labels, &scores);
        assert!(
            (got - want).abs() <= 1e-9,
            "{got} vs {want}: {labels:?} {scores:?}"
        );
        done += 1;
    }
}

#[test]
fn exact_scalar_matches_pair_counting_exactly() {
    let labels = [1, 0, 1, 0, 0, 1, 1, 0];
    let scores = [3, 3, 2, 1, 2, 5, 1, 0];
    let exact: Vec<Exact> = scores.iter().map(|&s| Exact::from_integer(s)).collect();
    let floats: Vec<f64> = scores.iter().map(|&s| s as f64).collect();
    let got = auc_roc(&labels, &exact).unwrap();
    // 16 pairs: 10 wins, 3 ties
    assert_eq!(got, Exact::new(23, 32));
    assert_eq!(oracle::auc_pairs(&labels, &floats), 23.0 / 32.0);
}

proptest! {
    #[test]
    fn auc_matches_pair_counting(
        items in prop::collection::vec((0u8..2, 0u8..8), 2..100),
    ) {
        let labels: Vec<u8> = items.iter().map(|p| p.0).collect();
        prop_assume!(labels.contains(&0) && labels.contains(&1));
        let scores: Vec<f64> = items.iter().map(|p| f64::from(p.1) / 7.0).collect();
        let got = auc_roc(&labels, &scores).unwrap();
        prop_assert!((got - oracle::auc_pairs(&labels, &scores)).abs() <= 1e-9);
    }

    #[test]
    fn roc_is_monotone_from_origin_to_corner(
        items in prop::collection::vec((0u8..2, 0u8..8), 2..60),
    ) {
        let labels: Vec<u8> = items.iter().map(|p| p.0).collect();
        prop_assume!(labels.contains(&0) && labels.contains(&1));
        let scores: Vec<f64> = items.iter().map(|p| f64::from(p.1)).collect();
        let pts = roc_curve(&labels, &scores).unwrap();
        prop_assert_eq!(pts[0], (0.0, 0.0));
        prop_assert_eq!(*pts.last().unwrap(), (1.0, 1.0));
        for w in pts.windows(2) {
            prop_assert!(w[1].0 >= w[0].0 && w[1].1 >= w[0].1);
        }
    }

    #[test]
    fn auc_is_bounded(
        items in prop::collection::vec((0u8..2, 0u8..100), 2..60),
    ) {
        let labels: Vec<u8> = items.iter().map(|p| p.0).collect();
        prop_assume!(labels.contains(&0) && labels.contains(&1));
        let scores: Vec<f64> = items.iter().map(|p| f64::from(p.1)).collect();
        let a = auc_roc(&labels, &scores).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
    }
}
