//! Sample sets, density estimates, phaseless sampling and the linear
//! recovery of the `|f|²` coefficients.

use nalgebra::DVector;
use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{extreme_singular_values, gaussian_collocation, least_squares};
use crate::space::{CoeffRole, CoeffSeq, SIFunction, SpaceParams};

/// Collocation systems with `σ_max / σ_min` above this are rejected.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    points: Vec<f64>,
    separation: f64,
    window: Option<(f64, f64)>,
}

impl SampleSet {
    /// Points must be finite and strictly increasing.
    pub fn new(points: Vec<f64>) -> Result<Self> {
        if points.iter().any(|x| !x.is_finite()) || points.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::NotSeparated);
        }
        let separation = points
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        Ok(Self {
            points,
            separation,
            window: None,
        })
    }

    /// `step·ℤ ∩ [a, b]`, with the window set to `[a, b]`.
    pub fn arithmetic(step: f64, a: f64, b: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) || a.is_nan() || b.is_nan() || a > b {
            return Err(Error::InvalidParameter(format!(
                "bad progression step {step} on [{a}, {b}]"
            )));
        }
        let lo = (a / step - 1e-9).ceil() as i64;
        let hi = (b / step + 1e-9).floor() as i64;
        let points = (lo..=hi).map(|k| k as f64 * step).collect();
        Ok(Self::new(points)?.with_window(a, b))
    }

    pub fn with_window(mut self, a: f64, b: f64) -> Self {
        self.window = Some((a, b));
        self
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Minimum gap; infinite for fewer than two points.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// The declared window, or the convex hull of the points.
    pub fn window(&self) -> Option<(f64, f64)> {
        self.window
            .or_else(|| Some((*self.points.first()?, *self.points.last()?)))
    }

    pub fn hull(&self) -> Option<(f64, f64)> {
        Some((*self.points.first()?, *self.points.last()?))
    }

    /// Number of points in the closed interval `[a, b]`.
    pub fn count_in(&self, a: f64, b: f64) -> usize {
        let lo = self.points.partition_point(|&x| x < a);
        let hi = self.points.partition_point(|&x| x <= b);
        hi.saturating_sub(lo)
    }

    pub fn restrict(&self, a: f64, b: f64) -> Self {
        let points = self
            .points
            .iter()
            .copied()
            .filter(|&x| a <= x && x <= b)
            .collect();
        Self::new(points)
            .expect("subset of a separated set")
            .with_window(a, b)
    }
}

/// `min_x #(Λ ∩ [x - r, x + r]) / 2r` over centres in the window shrunk by `r`.
pub fn lower_density_estimate(s: &SampleSet, radius: f64) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius {radius}")));
    }
    let (a, b) = s.window().ok_or(Error::WindowTooSmall { radius })?;
    let (lo, hi) = (a + radius, b - radius);
    if lo > hi + 1e-12 {
        return Err(Error::WindowTooSmall { radius });
    }
    let h = (s.separation() / 4.0).min(radius / 4.0);
    // absorb rounding in lattice-like point sets
    let slack = 1e-9 * radius.max(1.0);
    let steps = (((hi - lo).max(0.0) / h).ceil() as usize).min(1_000_000);
    let min = (0..=steps)
        .map(|i| {
            let x = if steps == 0 {
                lo
            } else {
                lo + (hi - lo) * i as f64 / steps as f64
            };
            s.count_in(x - radius - slack, x + radius + slack)
        })
        .min()
        .unwrap_or(0);
    Ok(min as f64 / (2.0 * radius))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaselessSamples {
    locations: Vec<f64>,
    magnitudes: Vec<f64>,
}

impl PhaselessSamples {
    pub fn new(locations: Vec<f64>, magnitudes: Vec<f64>) -> Result<Self> {
        if locations.len() != magnitudes.len() {
            return Err(Error::InvalidParameter(format!(
                "{} locations but {} magnitudes",
                locations.len(),
                magnitudes.len()
            )));
        }
        if magnitudes.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::InvalidParameter(
                "magnitudes must be finite and nonnegative".into(),
            ));
        }
        SampleSet::new(locations.clone())?;
        Ok(Self {
            locations,
            magnitudes,
        })
    }

    pub fn locations(&self) -> &[f64] {
        &self.locations
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.locations
            .iter()
            .copied()
            .zip(self.magnitudes.iter().copied())
    }

    pub fn sample_set(&self) -> SampleSet {
        SampleSet::new(self.locations.clone()).expect("validated on construction")
    }
}

pub fn take_phaseless_samples(f: &SIFunction, s: &SampleSet) -> PhaselessSamples {
    let magnitudes = s.points().iter().map(|&x| f.evaluate(x).norm()).collect();
    PhaselessSamples {
        locations: s.points().to_vec(),
        magnitudes,
    }
}

/// Adds `N(0, sigma²)` to each magnitude, clamped at zero.
pub fn take_noisy_samples(
    f: &SIFunction,
    s: &SampleSet,
    sigma: f64,
    rng: &mut impl Rng,
) -> Result<PhaselessSamples> {
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let mut samples = take_phaseless_samples(f, s);
    for m in &mut samples.magnitudes {
        *m = (*m + noise.sample(rng)).max(0.0);
    }
    Ok(samples)
}

/// Squared extreme singular values of a collocation matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    fn from_singular_values(max: f64, min: f64) -> Self {
        Self {
            lower: min * min,
            upper: max * max,
        }
    }

    /// `B / A`, infinite when `A = 0`.
    pub fn condition(&self) -> f64 {
        if self.lower > 0.0 {
            self.upper / self.lower
        } else {
            f64::INFINITY
        }
    }

    /// `σ_max / σ_min` of the underlying matrix.
    pub fn collocation_condition(&self) -> f64 {
        self.condition().sqrt()
    }
}

impl Serialize for FrameBounds {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            lower: f64,
            upper: f64,
            condition: Option<f64>,
        }
        let c = self.condition();
        Wire {
            lower: self.lower,
            upper: self.upper,
            condition: c.is_finite().then_some(c),
        }
        .serialize(s)
    }
}

fn half_step_centres(p: SpaceParams, window: (i64, i64)) -> Vec<f64> {
    (window.0..=window.1)
        .map(|n| n as f64 * p.beta() / 2.0)
        .collect()
}

/// Frame bounds of `M[λ, n] = e^{-2γ(λ - nβ/2)²}` for `n` in the window.
pub fn frame_bound_estimate(s: &SampleSet, p: SpaceParams, n_window: (i64, i64)) -> FrameBounds {
    let m = gaussian_collocation(s.points(), &half_step_centres(p, n_window), 2.0 * p.gamma());
    let (max, min) = extreme_singular_values(&m);
    FrameBounds::from_singular_values(max, min)
}

/// `n` range whose half-step centres `nβ/2` lie in the hull of the points.
pub fn default_rtilde_window(s: &SampleSet, beta: f64) -> Option<(i64, i64)> {
    let (a, b) = s.hull()?;
    let lo = (2.0 * a / beta - 1e-9).ceil() as i64;
    let hi = (2.0 * b / beta + 1e-9).floor() as i64;
    (lo <= hi).then_some((lo, hi))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RtildeFit {
    pub coeffs: CoeffSeq,
    pub bounds: FrameBounds,
    /// `max_λ | Σ r̃_n e^{-2γ(λ - nβ/2)²} - |f(λ)|² |`.
    pub residual: f64,
}

/// Least-squares fit of `|f(λ)|²` by half-step Gaussians of width `2γ`.
pub fn recover_rtilde(
    m: &PhaselessSamples,
    p: SpaceParams,
    n_window: (i64, i64),
) -> Result<RtildeFit> {
    if n_window.0 > n_window.1 {
        return Err(Error::InvalidParameter(format!(
            "empty coefficient window {n_window:?}"
        )));
    }
    let s = m.sample_set();
    if let Some((a, b)) = s.hull() {
        let density = s.len() as f64 / (b - a).max(s.separation());
        if density <= p.critical_density() {
            log::warn!(
                "sample density {density:.3} does not exceed the critical density {:.3}",
                p.critical_density()
            );
        }
    }
    let mat = gaussian_collocation(s.points(), &half_step_centres(p, n_window), 2.0 * p.gamma());
    let (max, min) = extreme_singular_values(&mat);
    let bounds = FrameBounds::from_singular_values(max, min);
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if condition > MAX_CONDITION {
        return Err(Error::IllConditioned { condition });
    }
    let b = DVector::from_iterator(m.len(), m.magnitudes().iter().map(|v| v * v));
    let x = least_squares(&mat, &b);
    let residual = (&mat * &x - &b).amax();
    let coeffs = CoeffSeq::from_real(n_window.0, x.as_slice(), CoeffRole::RTilde);
    Ok(RtildeFit {
        coeffs,
        bounds,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::squared_magnitude_expansion;

    fn params(gamma: f64) -> SpaceParams {
        SpaceParams::new(gamma, 1.0).unwrap()
    }

    fn func(gamma: f64, offset: i64, c: &[f64]) -> SIFunction {
        SIFunction::new(params(gamma), CoeffSeq::from_real(offset, c, CoeffRole::C))
    }

    #[test]
    fn sample_set_validation() {
        assert!(matches!(
            SampleSet::new(vec![0.0, 0.0]),
            Err(Error::NotSeparated)
        ));
        assert!(matches!(
            SampleSet::new(vec![1.0, 0.0]),
            Err(Error::NotSeparated)
        ));
        assert!(matches!(
            SampleSet::new(vec![f64::NAN]),
            Err(Error::NotSeparated)
        ));
        let s = SampleSet::arithmetic(0.4, -6.0, 6.0).unwrap();
        assert_eq!(s.len(), 31);
        assert!((s.separation() - 0.4).abs() < 1e-12);
        assert_eq!(
            SampleSet::new(vec![3.0]).unwrap().separation(),
            f64::INFINITY
        );
    }

    #[test]
    fn density_examples() {
        let s = SampleSet::arithmetic(0.4, -10.0, 10.0).unwrap();
        assert!((lower_density_estimate(&s, 4.0).unwrap() - 2.5).abs() < 1e-12);
        let s = SampleSet::arithmetic(1.0, -10.0, 10.0).unwrap();
        assert!((lower_density_estimate(&s, 4.0).unwrap() - 1.0).abs() < 1e-12);

        let mut pts: Vec<f64> = SampleSet::arithmetic(0.4, -10.0, 10.0)
            .unwrap()
            .points()
            .to_vec();
        pts.extend(pts.clone().iter().map(|x| x + 0.13).filter(|&x| x <= 10.0));
        pts.sort_by(f64::total_cmp);
        let s = SampleSet::new(pts).unwrap().with_window(-10.0, 10.0);
        assert!((lower_density_estimate(&s, 4.0).unwrap() - 5.0).abs() < 1e-12);

        assert!(matches!(
            lower_density_estimate(&s, 11.0),
            Err(Error::WindowTooSmall { .. })
        ));
    }

    #[test]
    fn sampling_examples() {
        let s = SampleSet::new(vec![0.0]).unwrap();
        assert_eq!(
            take_phaseless_samples(&func(1.0, 0, &[1.0]), &s).magnitudes(),
            &[1.0]
        );
        assert_eq!(
            take_phaseless_samples(&func(1.0, 0, &[-1.0]), &s).magnitudes(),
            &[1.0]
        );
        let s = SampleSet::new(vec![0.5]).unwrap();
        let m = take_phaseless_samples(&func(1.0, 0, &[1.0, 1.0]), &s).magnitudes()[0];
        assert!((m - 2.0 * (-0.25f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn phaseless_samples_validation() {
        assert!(PhaselessSamples::new(vec![0.0], vec![]).is_err());
        assert!(PhaselessSamples::new(vec![0.0], vec![-1.0]).is_err());
        assert!(matches!(
            PhaselessSamples::new(vec![1.0, 0.0], vec![1.0, 1.0]),
            Err(Error::NotSeparated)
        ));
    }

    #[test]
    fn recover_single_gaussian() {
        let s = SampleSet::arithmetic(0.4, -6.0, 6.0).unwrap();
        let m = take_phaseless_samples(&func(1.0, 0, &[1.0]), &s);
        let fit = recover_rtilde(&m, params(1.0), (-8, 8)).unwrap();
        for (n, v) in fit.coeffs.iter() {
            let want = if n == 0 { 1.0 } else { 0.0 };
            assert!((v.re - want).abs() <= 1e-9, "n = {n}: {v}");
        }
    }

    #[test]
    fn recover_two_coefficient_source() {
        let s = SampleSet::arithmetic(0.4, -6.0, 8.0).unwrap();
        let f = func(1.0, 0, &[1.0, 1.0]);
        let m = take_phaseless_samples(&f, &s);
        let fit = recover_rtilde(&m, params(1.0), (-12, 16)).unwrap();
        let want = [(0, 1.0), (1, 2.0 * (-0.5f64).exp()), (2, 1.0)];
        for (n, v) in want {
            assert!((fit.coeffs.get(n).re - v).abs() < 1e-9);
        }
        let oracle = squared_magnitude_expansion(&f).unwrap();
        assert!(fit.coeffs.max_deviation(oracle.coeffs()) < 1e-9);
    }

    #[test]
    fn recover_zero_samples() {
        let s = SampleSet::arithmetic(0.4, -6.0, 6.0).unwrap();
        let m = PhaselessSamples::new(s.points().to_vec(), vec![0.0; s.len()]).unwrap();
        let fit = recover_rtilde(&m, params(1.0), (-8, 8)).unwrap();
        assert!(fit.coeffs.is_zero());
        assert_eq!(fit.residual, 0.0);
    }

    #[test]
    fn recover_rejects_underdetermined_window() {
        let s = SampleSet::arithmetic(0.8, -10.0, 10.0).unwrap();
        let m = take_phaseless_samples(&func(1.0, 0, &[1.0]), &s);
        assert!(matches!(
            recover_rtilde(&m, params(1.0), (-20, 20)),
            Err(Error::IllConditioned { .. })
        ));
    }

    #[test]
    fn frame_bound_examples() {
        let s = SampleSet::arithmetic(0.4, -10.0, 10.0).unwrap();
        let fb = frame_bound_estimate(&s, params(1.0), default_rtilde_window(&s, 1.0).unwrap());
        assert!(fb.lower > 0.0);
        assert!(fb.collocation_condition() < 1e6);

        let s = SampleSet::arithmetic(0.8, -10.0, 10.0).unwrap();
        let fb = frame_bound_estimate(&s, params(1.0), default_rtilde_window(&s, 1.0).unwrap());
        assert!(fb.collocation_condition() >= 1e8);

        let empty = SampleSet::new(vec![]).unwrap();
        let fb = frame_bound_estimate(&empty, params(1.0), (0, -1));
        assert_eq!((fb.lower, fb.upper), (0.0, 0.0));
        assert_eq!(
            serde_json::to_value(fb).unwrap()["condition"],
            serde_json::Value::Null
        );
    }

    #[test]
    fn noise_hook_is_seeded() {
        use rand::SeedableRng;
        let s = SampleSet::arithmetic(0.5, -2.0, 2.0).unwrap();
        let f = func(1.0, 0, &[1.0]);
        let a =
            take_noisy_samples(&f, &s, 1e-3, &mut rand::rngs::StdRng::seed_from_u64(7)).unwrap();
        let b =
            take_noisy_samples(&f, &s, 1e-3, &mut rand::rngs::StdRng::seed_from_u64(7)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, take_phaseless_samples(&f, &s));
    }
}
