use osax::data::{parse_ucr_str, ucr_string};
use osax::knn::{holdout_misses, loo_misses};
use osax::sax::paa_values;
use osax::*;
use proptest::prelude::*;
use std::path::Path;

fn series(min: usize, max: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-50.0f64..50.0, min..=max)
}

fn cuts(k: usize) -> impl Strategy<Value = Breakpoints> {
    prop::collection::vec(-3.0f64..3.0, k).prop_filter_map("distinct cuts", |mut c| {
        c.sort_by(f64::total_cmp);
        Breakpoints::new(c).ok()
    })
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).powi(2))
        .sum::<f64>()
        .sqrt()
}

fn words(count: usize, len: usize, alpha: u32) -> impl Strategy<Value = Vec<SymbolicWord>> {
    prop::collection::vec(prop::collection::vec(0..alpha, len), count).prop_map(move |ws| {
        ws.into_iter()
            .map(|s| SymbolicWord::new(s, len * 4).unwrap())
            .collect()
    })
}

proptest! {
    #[test]
    fn normalization_moments(v in series(2, 64)) {
        prop_assume!(v.iter().any(|x| (x - v[0]).abs() > 1e-6));
        let z = znormalize(&TimeSeries::new(v, None).unwrap());
        let n = z.len() as f64;
        let mean = z.values().iter().sum::<f64>() / n;
        let sd = (z.values().iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
        prop_assert!(mean.abs() < 1e-9);
        prop_assert!((sd - 1.0).abs() < 1e-9);
    }

    #[test]
    fn paa_identity_and_mean(v in series(1, 64), k in 1usize..8) {
        let same = paa_values(&v, v.len()).unwrap();
        prop_assert_eq!(same.means(), v.as_slice());
        let n = v.len();
        if k <= n && n % k == 0 {
            let p = paa_values(&v, k).unwrap();
            let m1 = v.iter().sum::<f64>() / n as f64;
            let m2 = p.means().iter().sum::<f64>() / k as f64;
            prop_assert!((m1 - m2).abs() < 1e-9);
        }
    }

    #[test]
    fn paa_fractional_frames_preserve_mean(v in series(2, 64), k in 1usize..64) {
        // every frame has the same total mass, so the mean is preserved for any k
        let k = k.min(v.len());
        let p = paa_values(&v, k).unwrap();
        let m1 = v.iter().sum::<f64>() / v.len() as f64;
        let m2 = p.means().iter().sum::<f64>() / k as f64;
        prop_assert!((m1 - m2).abs() < 1e-9);
    }

    #[test]
    fn discretization_is_monotone(means in prop::collection::vec(-4.0f64..4.0, 2..20), c in cuts(9)) {
        let p = paa_values(&means, means.len()).unwrap();
        let w = discretize(&p, &c);
        for i in 0..means.len() {
            for j in 0..means.len() {
                if means[i] <= means[j] {
                    prop_assert!(w.symbols()[i] <= w.symbols()[j]);
                }
            }
        }
    }

    #[test]
    fn table_structure(c in cuts(12)) {
        let t = build_dist_table(&c);
        let a = 13u32;
        for r in 0..a {
            for s in 0..a {
                let v = t.get(r, s);
                prop_assert_eq!(v, t.get(s, r));
                prop_assert!(v >= 0.0);
                if r.abs_diff(s) <= 1 {
                    prop_assert_eq!(v, 0.0);
                }
                if s + 1 < a && s >= r {
                    prop_assert!(t.get(r, s + 1) >= v);
                }
            }
        }
    }

    #[test]
    fn mindist_lower_bounds_euclidean(
        a in series(8, 96),
        b_seed in any::<u64>(),
        k in 1usize..96,
        c in cuts(9),
    ) {
        let n = a.len();
        let b: Vec<f64> = (0..n).map(|i| ((i as u64 ^ b_seed) % 97) as f64 - 48.0).collect();
        let za = znormalize(&TimeSeries::new(a, None).unwrap());
        let zb = znormalize(&TimeSeries::new(b, None).unwrap());
        let k = k.min(n);
        let wa = discretize(&paa(&za, k).unwrap(), &c);
        let wb = discretize(&paa(&zb, k).unwrap(), &c);
        let md = mindist(&wa, &wb, &build_dist_table(&c)).unwrap();
        prop_assert!(md <= euclid(za.values(), zb.values()) + 1e-9);
    }

    #[test]
    fn unit_weights_reduce_exactly(ws in words(2, 6, 10), c in cuts(9)) {
        let t = build_dist_table(&c);
        let u = WeightVector::uniform(6);
        prop_assert_eq!(
            weighted_mindist(&ws[0], &ws[1], &t, &u).unwrap(),
            mindist(&ws[0], &ws[1], &t).unwrap()
        );
        prop_assert_eq!(mindist(&ws[0], &ws[1], &t).unwrap(), mindist(&ws[1], &ws[0], &t).unwrap());
    }

    #[test]
    fn errors_are_ratios_in_unit_interval(
        ws in words(8, 4, 5),
        labels in prop::collection::vec(1i64..4, 8),
        weights in prop::collection::vec(0.01f64..2.0, 4),
        c in cuts(4),
    ) {
        let t = build_dist_table(&c);
        let w = WeightVector::new(weights).unwrap();
        let e = loo_error(&ws, &labels, &t, &w).unwrap();
        let m = loo_misses(&ws, &labels, &t, &w).unwrap();
        prop_assert!((0.0..=1.0).contains(&e));
        prop_assert_eq!(e, m as f64 / 8.0);
        let h = holdout_error(&ws[..5], &labels[..5], &ws[5..], &labels[5..], &t, &w).unwrap();
        let hm = holdout_misses(&ws[..5], &labels[..5], &ws[5..], &labels[5..], &t, &w).unwrap();
        prop_assert!((0.0..=1.0).contains(&h));
        prop_assert_eq!(h, hm as f64 / 3.0);
    }

    #[test]
    fn single_class_identical_words_have_zero_error(k in 2usize..10, sym in 0u32..5) {
        let ws = vec![SymbolicWord::new(vec![sym; 3], 12).unwrap(); k];
        let t = build_dist_table(&gaussian_breakpoints(Alphabet::new(5).unwrap()));
        prop_assert_eq!(loo_error(&ws, &vec![4; k], &t, &WeightVector::uniform(3)).unwrap(), 0.0);
    }

    #[test]
    fn ucr_text_round_trips(seed in any::<u64>(), count in 2usize..12, length in 4usize..40) {
        let d = generate_synthetic(&SynthSpec {
            name: "rt".into(),
            families: ShapeFamily::ALL.to_vec(),
            count,
            length,
            noise: 0.7,
            variation: 0.5,
            seed,
        }).unwrap();
        let back = parse_ucr_str("rt", &ucr_string(&d), Path::new("rt")).unwrap();
        prop_assert_eq!(back, d);
    }
}
