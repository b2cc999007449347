use rand::Rng;
use tnfin_core::rng::substream;
use tnfin_core::stats::{confusion, kruskal_wallis, mann_whitney_u, metrics, u_statistic};

#[test]
fn kruskal_wallis_three_separated_groups() {
    let r = kruskal_wallis(&[[1.0, 2.0, 3.0], [4.0, 5.0, 6.0], [7.0, 8.0, 9.0]]).unwrap();
    assert!((r.statistic - 7.2).abs() <= 1e-9);
    // reference values from an independent statistics package
    assert!((r.p_value - 0.02732372244729252).abs() <= 1e-12);
    let tied = kruskal_wallis(&[
        vec![1.0, 2.0, 2.0, 3.0],
        vec![2.0, 3.0, 5.0, 5.0, 6.0],
        vec![7.0, 3.0, 8.0],
    ])
    .unwrap();
    assert!((tied.statistic - 5.9394705174488545).abs() <= 1e-12);
    assert!((tied.p_value - 0.05131689423376792).abs() <= 1e-12);
}

#[test]
fn mann_whitney_reference_p_values() {
    let r = mann_whitney_u(&[1.0, 2.0, 2.0, 3.0, 9.0], &[2.0, 4.0, 5.0, 5.0, 6.0, 7.0]).unwrap();
    assert_eq!(r.statistic, 8.0);
    assert!((r.p_value - 0.22996380068573008).abs() <= 1e-12);
    let r = mann_whitney_u(&[0.1, 0.5, 0.3], &[0.9, 0.8, 0.7, 0.6]).unwrap();
    assert_eq!(r.statistic, 0.0);
    assert!((r.p_value - 0.05182992721790968).abs() <= 1e-12);
}

fn pair_count(a: &[f64], b: &[f64]) -> f64 {
    let mut u = 0.0;
    for x in a {
        for y in b {
            if x > y {
                u += 1.0;
            } else if x == y {
                u += 0.5;
            }
        }
    }
    u
}

#[test]
fn u_matches_exhaustive_pair_counting() {
    let mut rng = substream(19, &[]);
    for _ in 0..100 {
        let (na, nb) = (rng.random_range(1..9), rng.random_range(1..9));
        // small integer support forces ties
        let a: Vec<f64> = (0..na).map(|_| rng.random_range(0..6) as f64).collect();
        let b: Vec<f64> = (0..nb).map(|_| rng.random_range(0..6) as f64).collect();
        let u_a = pair_count(&a, &b);
        assert_eq!(u_statistic(&a, &b).unwrap(), u_a);
        let reported = mann_whitney_u(&a, &b).unwrap().statistic;
        assert_eq!(reported, u_a.min(pair_count(&b, &a)));
        assert_eq!(u_a + pair_count(&b, &a), (na * nb) as f64);
    }
}

#[test]
fn two_group_kruskal_wallis_agrees_with_mann_whitney() {
    let mut rng = substream(23, &[]);
    for _ in 0..50 {
        let (na, nb) = (rng.random_range(15..30), rng.random_range(15..30));
        let shift = rng.random_range(0.0..1.5);
        let a: Vec<f64> = (0..na).map(|_| rng.random::<f64>()).collect();
        let b: Vec<f64> = (0..nb).map(|_| rng.random::<f64>() + shift * 0.5).collect();
        let kw = kruskal_wallis(&[a.clone(), b.clone()]).unwrap().p_value;
        let mw = mann_whitney_u(&a, &b).unwrap().p_value;
        // identical up to the continuity correction
        assert!((kw - mw).abs() <= 0.02, "{kw} vs {mw}");
    }
}

#[test]
fn metrics_match_hand_tallies() {
    let mut rng = substream(29, &[]);
    for _ in 0..20 {
        let classes = rng.random_range(2..5);
        let n = rng.random_range(1..60);
        let actual: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
        let predicted: Vec<usize> = (0..n).map(|_| rng.random_range(0..classes)).collect();
        for k in 0..classes {
            let (mut tp, mut fp, mut tn, mut fneg) = (0u64, 0u64, 0u64, 0u64);
            for (&p, &a) in predicted.iter().zip(&actual) {
                match (p == k, a == k) {
                    (true, true) => tp += 1,
                    (true, false) => fp += 1,
                    (false, true) => fneg += 1,
                    (false, false) => tn += 1,
                }
            }
            let ratio = |num: u64, den: u64| {
                if den == 0 {
                    0.0
                } else {
                    num as f64 / den as f64
                }
            };
            let m = metrics(&confusion(&predicted, &actual, k).unwrap()).values;
            assert_eq!(m.accuracy, ratio(tp + tn, n as u64));
            assert_eq!(m.sensitivity, ratio(tp, tp + fneg));
            assert_eq!(m.specificity, ratio(tn, tn + fp));
            assert_eq!(m.f1, ratio(2 * tp, 2 * tp + fp + fneg));
        }
    }
}
