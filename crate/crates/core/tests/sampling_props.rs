use gausspr::sampling::{
    default_rtilde_window, frame_bound_estimate, lower_density_estimate, recover_rtilde,
    take_phaseless_samples,
};
use gausspr::space::squared_magnitude_expansion;
use gausspr::{CoeffRole, CoeffSeq, Complex64, SIFunction, SampleSet, SpaceParams};
use proptest::prelude::*;

fn real_coeffs(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-3.0..3.0f64, 1..=max_len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recovery_reproduces_expansion(c in real_coeffs(7), im in prop::collection::vec(-1.0..1.0f64, 7)) {
        let len = c.len() as i64;
        let offset = -(len - 1) / 2;
        let values: Vec<Complex64> = c.iter().zip(&im).map(|(&a, &b)| Complex64::new(a, b)).collect();
        let f = SIFunction::new(SpaceParams::new(1.0, 1.0).unwrap(), CoeffSeq::new(offset, values, CoeffRole::C));
        let s = SampleSet::arithmetic(0.4, offset as f64 - 4.0, (offset + len - 1) as f64 + 4.0).unwrap();
        prop_assert!(lower_density_estimate(&s, 2.0).unwrap() >= 2.5 - 1e-12);
        let window = default_rtilde_window(&s, 1.0).unwrap();
        let fit = recover_rtilde(&take_phaseless_samples(&f, &s), f.params(), window).unwrap();
        let oracle = squared_magnitude_expansion(&f).unwrap();
        let quarter = (window.1 - window.0) / 4;
        for n in window.0 + quarter..=window.1 - quarter {
            prop_assert!((fit.coeffs.get(n) - oracle.coeffs().get(n)).norm() <= 1e-8);
        }
    }

    #[test]
    fn extra_points_never_lower_the_frame_bound(extra in prop::collection::vec(-5.0..5.0f64, 1..6), g in 0.5..2.0f64) {
        let base = SampleSet::arithmetic(0.4, -5.0, 5.0).unwrap();
        let window = default_rtilde_window(&base, 1.0).unwrap();
        let p = SpaceParams::new(g, 1.0).unwrap();
        let mut pts = base.points().to_vec();
        for x in extra {
            if pts.iter().all(|p| (p - x).abs() > 1e-6) {
                pts.push(x);
            }
        }
        pts.sort_by(f64::total_cmp);
        let more = SampleSet::new(pts).unwrap();
        let a = frame_bound_estimate(&base, p, window).lower;
        let b = frame_bound_estimate(&more, p, window).lower;
        prop_assert!(b >= a * (1.0 - 1e-9));
    }

    #[test]
    fn samples_are_blind_to_global_phase(c in real_coeffs(5), theta in 0.0..6.3f64) {
        let f = SIFunction::new(SpaceParams::new(1.0, 1.0).unwrap(), CoeffSeq::from_real(-2, &c, CoeffRole::C));
        let s = SampleSet::arithmetic(0.4, -5.0, 5.0).unwrap();
        let base = take_phaseless_samples(&f, &s);
        let l1: f64 = c.iter().map(|v| v.abs()).sum();
        for alpha in [Complex64::new(-1.0, 0.0), Complex64::from_polar(1.0, theta)] {
            let g = f.map_coeffs(|c| c.scaled(alpha));
            let m = take_phaseless_samples(&g, &s);
            for (a, b) in base.magnitudes().iter().zip(m.magnitudes()) {
                prop_assert!((a - b).abs() <= 8.0 * f64::EPSILON * l1);
            }
        }
    }
}
