use gausspr::pipeline::phase_equivalent;
use gausspr::sharpness::{build_counterexample, split_even_odd};
use gausspr::{SampleSet, SpaceParams};
use proptest::prelude::*;

fn jittered(step: f64, jitter: &[f64]) -> SampleSet {
    let n = (10.0 / step).floor() as i64;
    let pts: Vec<f64> = (-n..=n)
        .enumerate()
        .map(|(i, k)| k as f64 * step + jitter[i % jitter.len()] * step)
        .collect();
    SampleSet::new(pts).unwrap().with_window(-10.5, 10.5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn counterexamples_match_in_magnitude_but_not_in_phase(
        step in 0.6..1.2f64,
        jitter in prop::collection::vec(-0.2..0.2f64, 1..8),
        gamma in prop::sample::select(vec![0.5, 1.0, 2.0]),
    ) {
        let s = jittered(step, &jitter);
        let ce = build_counterexample(&s, SpaceParams::new(gamma, 1.0).unwrap(), (-10.0, 10.0), 4.0).unwrap();
        prop_assert!(ce.mismatch <= 1e-7 * ce.scale.max(f64::MIN_POSITIVE));
        prop_assert!(ce.vanishing.0 <= 1e-8 && ce.vanishing.1 <= 1e-8);
        prop_assert!(ce.gram_determinant >= 1e-6);
        prop_assert!(phase_equivalent(&ce.first, &ce.second, 1e-6).is_none());
    }

    #[test]
    fn split_interleaves(pts in prop::collection::btree_set(-1000i32..1000, 0..40)) {
        let s = SampleSet::new(pts.iter().map(|&k| k as f64 * 0.01).collect()).unwrap();
        let (e, o) = split_even_odd(&s);
        prop_assert_eq!(e.len(), s.len().div_ceil(2));
        prop_assert_eq!(o.len(), s.len() / 2);
        for (i, x) in s.points().iter().enumerate() {
            let half = if i % 2 == 0 { &e } else { &o };
            prop_assert_eq!(half.points()[i / 2], *x);
        }
    }
}
