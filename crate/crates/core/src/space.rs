//! Functions in `V_β(φ_γ)`, their coefficient sequences and the expansion of
//! `|f|²` in the half-step space `V_{β/2}(φ_{2γ})`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest exponent admitted by the `c ↔ d` weight maps (`e^{x} < 1e300`).
pub const MAX_WEIGHT_EXPONENT: f64 = 690.775_527_898_213_7;

/// The pair `(γ, β)`: Gaussian width parameter and step size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceParams {
    gamma: f64,
    beta: f64,
}

impl SpaceParams {
    pub fn new(gamma: f64, beta: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        if !(beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "beta must be positive, got {beta}"
            )));
        }
        Ok(Self { gamma, beta })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Sampling density above which real-valued functions are determined up to sign.
    pub fn critical_density(&self) -> f64 {
        2.0 / self.beta
    }
}

/// What a coefficient sequence stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffRole {
    /// Coefficients `c_k` of `f`.
    C,
    /// Gaussian-decayed coefficients `d_k = c_k e^{-γk²}`.
    D,
    /// Autocorrelation `r = d ∗ d̄`.
    R,
    /// Coefficients `r̃_n = r_n e^{γn²/2}` of `|f|²`.
    RTilde,
}

/// A finitely supported complex sequence indexed from `offset`.
///
/// Exact zeros at either end are trimmed on construction; the all-zero
/// sequence is stored as a single zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffSeq {
    offset: i64,
    values: Vec<Complex64>,
    role: CoeffRole,
}

impl CoeffSeq {
    pub fn new(offset: i64, values: Vec<Complex64>, role: CoeffRole) -> Self {
        let first = values.iter().position(|v| *v != Complex64::ZERO);
        let Some(first) = first else {
            return Self::zero_at(offset, role);
        };
        let last = values
            .iter()
            .rposition(|v| *v != Complex64::ZERO)
            .unwrap_or(first);
        Self {
            offset: offset + first as i64,
            values: values[first..=last].to_vec(),
            role,
        }
    }

    pub fn from_real(offset: i64, values: &[f64], role: CoeffRole) -> Self {
        Self::new(
            offset,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
            role,
        )
    }

    /// Builds a sequence from `(index, value)` pairs; missing indices are zero.
    pub fn from_pairs(pairs: &[(i64, Complex64)], role: CoeffRole) -> Self {
        let Some(lo) = pairs.iter().map(|p| p.0).min() else {
            return Self::zero_at(0, role);
        };
        let hi = pairs.iter().map(|p| p.0).max().unwrap_or(lo);
        let mut values = vec![Complex64::ZERO; (hi - lo + 1) as usize];
        for &(k, v) in pairs {
            values[(k - lo) as usize] += v;
        }
        Self::new(lo, values, role)
    }

    pub fn zero_at(offset: i64, role: CoeffRole) -> Self {
        Self {
            offset,
            values: vec![Complex64::ZERO],
            role,
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Index of the last stored entry.
    pub fn end(&self) -> i64 {
        self.offset + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn role(&self) -> CoeffRole {
        self.role
    }

    pub fn with_role(mut self, role: CoeffRole) -> Self {
        self.role = role;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| *v == Complex64::ZERO)
    }

    pub fn get(&self, k: i64) -> Complex64 {
        if k < self.offset || k > self.end() {
            Complex64::ZERO
        } else {
            self.values[(k - self.offset) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(j, v)| (self.offset + j as i64, *v))
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Moves every entry from index `k` to `k + shift`.
    pub fn shifted(&self, shift: i64) -> Self {
        Self {
            offset: self.offset + shift,
            ..self.clone()
        }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::new(
            self.offset,
            self.values.iter().map(|v| v * factor).collect(),
            self.role,
        )
    }

    /// `max_k |a_k - b_k|` over the union of both supports.
    pub fn max_deviation(&self, other: &CoeffSeq) -> f64 {
        let lo = self.offset.min(other.offset);
        let hi = self.end().max(other.end());
        (lo..=hi)
            .map(|k| (self.get(k) - other.get(k)).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }
}

fn checked_weight_exponent(k: i64, gamma: f64) -> Result<f64> {
    let e = gamma * (k as f64).powi(2);
    if e >= MAX_WEIGHT_EXPONENT {
        Err(Error::IndexRangeTooWide { index: k, gamma })
    } else {
        Ok(e)
    }
}

/// `d_k = c_k e^{-γk²}`.
pub fn decay_weights(c: &CoeffSeq, gamma: f64) -> Result<CoeffSeq> {
    let values = c
        .iter()
        .map(|(k, v)| Ok(v * (-checked_weight_exponent(k, gamma)?).exp()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoeffSeq::new(c.offset(), values, CoeffRole::D))
}

/// `c_k = d_k e^{γk²}`.
pub fn undecay_weights(d: &CoeffSeq, gamma: f64) -> Result<CoeffSeq> {
    let values = d
        .iter()
        .map(|(k, v)| Ok(v * checked_weight_exponent(k, gamma)?.exp()))
        .collect::<Result<Vec<_>>>()?;
    Ok(CoeffSeq::new(d.offset(), values, CoeffRole::C))
}

/// `r_n = Σ_k d_k conj(d_{n-k})`, returned with real entries.
pub fn autocorrelation(d: &CoeffSeq) -> CoeffSeq {
    let n = d.len();
    let mut r = vec![Complex64::ZERO; 2 * n - 1];
    for (i, a) in d.values().iter().enumerate() {
        for (j, b) in d.values().iter().enumerate() {
            r[i + j] += a * b.conj();
        }
    }
    // The imaginary parts cancel pairwise (k <-> n-k); drop the rounding residue.
    let r = r.into_iter().map(|v| Complex64::new(v.re, 0.0)).collect();
    CoeffSeq::new(2 * d.offset(), r, CoeffRole::R)
}

/// `C = max(Σ e^{-2γk²}, Σ e^{-γ(1-2k)²/2})`, so that `‖r̃‖∞ ≤ C‖c‖∞²`.
pub fn rtilde_bound_constant(gamma: f64) -> f64 {
    let even = theta_sum(|k| 2.0 * gamma * k * k);
    let odd = theta_sum(|k| gamma * (1.0 - 2.0 * k).powi(2) / 2.0);
    even.max(odd)
}

/// `Σ_{k∈ℤ} e^{-e(k)}` for a convex quadratic exponent, summed until terms vanish.
pub(crate) fn theta_sum(exponent: impl Fn(f64) -> f64) -> f64 {
    let centre = (-64..=64)
        .min_by(|a, b| exponent(*a as f64).total_cmp(&exponent(*b as f64)))
        .unwrap_or(0);
    let mut total = (-exponent(centre as f64)).exp();
    for dir in [-1i64, 1] {
        let mut k = centre + dir;
        loop {
            let term = (-exponent(k as f64)).exp();
            total += term;
            if term < 1e-18 * total || term == 0.0 {
                break;
            }
            k += dir;
        }
    }
    total
}

/// `f(x) = Σ c_k e^{-γ(x-βk)²}`; with `half_step`, `Σ c_n e^{-2γ(x-βn/2)²}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(
    try_from = "crate::io::SIFunctionJson",
    into = "crate::io::SIFunctionJson"
)]
pub struct SIFunction {
    params: SpaceParams,
    coeffs: CoeffSeq,
    half_step: bool,
}

impl SIFunction {
    pub fn new(params: SpaceParams, coeffs: CoeffSeq) -> Self {
        Self {
            params,
            coeffs,
            half_step: false,
        }
    }

    pub fn half_step(params: SpaceParams, coeffs: CoeffSeq) -> Self {
        Self {
            params,
            coeffs,
            half_step: true,
        }
    }

    pub fn params(&self) -> SpaceParams {
        self.params
    }

    pub fn coeffs(&self) -> &CoeffSeq {
        &self.coeffs
    }

    pub fn is_half_step(&self) -> bool {
        self.half_step
    }

    /// Width parameter of the generator actually used in the sum.
    pub fn generator_gamma(&self) -> f64 {
        if self.half_step {
            2.0 * self.params.gamma
        } else {
            self.params.gamma
        }
    }

    /// Spacing of the generator centres.
    pub fn step(&self) -> f64 {
        if self.half_step {
            self.params.beta / 2.0
        } else {
            self.params.beta
        }
    }

    /// Sums every stored term; stored coefficients are the whole sequence, so
    /// there is no truncation tail.
    pub fn evaluate(&self, x: f64) -> Complex64 {
        let g = self.generator_gamma();
        let h = self.step();
        self.coeffs
            .iter()
            .map(|(k, c)| c * (-g * (x - h * k as f64).powi(2)).exp())
            .sum()
    }

    pub fn map_coeffs(&self, f: impl FnOnce(&CoeffSeq) -> CoeffSeq) -> Self {
        Self {
            coeffs: f(&self.coeffs),
            ..self.clone()
        }
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.is_real(tol)
    }
}

/// `g(x) = f(βx)`, an element of `V_1(φ_{β²γ})` with the same coefficients.
pub fn rescale_to_unit_step(f: &SIFunction) -> Result<SIFunction> {
    if f.half_step {
        return Err(Error::Precondition(
            "rescaling expects a full-step function".into(),
        ));
    }
    let p = f.params;
    let params = SpaceParams::new(p.gamma * p.beta * p.beta, 1.0)?;
    Ok(SIFunction::new(params, f.coeffs.clone()))
}

/// Coefficients `r̃` of `|f|² = Σ r̃_n e^{-2γ(x-n/2)²}` for a unit-step `f`.
pub fn squared_magnitude_expansion(f: &SIFunction) -> Result<SIFunction> {
    if f.half_step || f.params.beta != 1.0 {
        return Err(Error::Precondition(
            "expansion expects a full-step function with beta = 1".into(),
        ));
    }
    let gamma = f.params.gamma;
    let d = decay_weights(&f.coeffs, gamma)?;
    let r = autocorrelation(&d);
    let rtilde = r
        .iter()
        .map(|(n, v)| Ok(v * checked_weight_exponent(n, gamma / 2.0)?.exp()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SIFunction::half_step(
        f.params,
        CoeffSeq::new(r.offset(), rtilde, CoeffRole::RTilde),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn unit(gamma: f64) -> SpaceParams {
        SpaceParams::new(gamma, 1.0).unwrap()
    }

    #[test]
    fn params_reject_nonpositive() {
        assert!(SpaceParams::new(0.0, 1.0).is_err());
        assert!(SpaceParams::new(1.0, -2.0).is_err());
        assert!(SpaceParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn evaluate_examples() {
        let f = SIFunction::new(unit(1.0), CoeffSeq::from_real(0, &[1.0], CoeffRole::C));
        assert_eq!(f.evaluate(0.0), c(1.0));
        assert!((f.evaluate(1.0).re - (-1.0f64).exp()).abs() < 1e-15);
        let f = SIFunction::new(unit(1.0), CoeffSeq::from_real(0, &[1.0, 1.0], CoeffRole::C));
        // brute force of the two terms
        let expected = (-0.25f64).exp() + (-(0.5f64 - 1.0).powi(2)).exp();
        assert!((f.evaluate(0.5).re - expected).abs() < 1e-15);
        assert!((expected - 1.557_601_566).abs() < 1e-8);
    }

    #[test]
    fn coeffseq_trims_zeros() {
        let s = CoeffSeq::from_real(-2, &[0.0, 1.0, 2.0, 0.0], CoeffRole::C);
        assert_eq!(s.offset(), -1);
        assert_eq!(s.end(), 0);
        let z = CoeffSeq::from_real(3, &[0.0, 0.0], CoeffRole::C);
        assert!(z.is_zero());
        assert_eq!(z.len(), 1);
    }

    #[test]
    fn rescale_examples() {
        let f = SIFunction::new(
            SpaceParams::new(1.0, 2.0).unwrap(),
            CoeffSeq::from_real(0, &[1.0], CoeffRole::C),
        );
        let g = rescale_to_unit_step(&f).unwrap();
        assert_eq!(g.params().gamma(), 4.0);
        assert_eq!(g.params().beta(), 1.0);
        assert!((g.evaluate(1.0) - f.evaluate(2.0)).norm() < 1e-15);

        let f = SIFunction::new(
            unit(0.5),
            CoeffSeq::from_real(-1, &[1.0, 2.0], CoeffRole::C),
        );
        assert_eq!(rescale_to_unit_step(&f).unwrap(), f);

        let f = SIFunction::new(
            SpaceParams::new(1.0, 0.5).unwrap(),
            CoeffSeq::from_real(0, &[1.0, -1.0], CoeffRole::C),
        );
        let g = rescale_to_unit_step(&f).unwrap();
        assert_eq!(g.params().gamma(), 0.25);
        for i in 0..=10 {
            let x = -2.5 + 0.5 * i as f64;
            assert!((g.evaluate(x) - f.evaluate(x / 2.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn decay_examples() {
        let d = decay_weights(&CoeffSeq::from_real(0, &[1.0], CoeffRole::C), 1.0).unwrap();
        assert_eq!(d.get(0), c(1.0));
        assert_eq!(d.role(), CoeffRole::D);
        let d = decay_weights(&CoeffSeq::from_real(1, &[1.0], CoeffRole::C), 1.0).unwrap();
        assert!((d.get(1).re - 1.0 / E).abs() < 1e-16);

        let c0 = CoeffSeq::from_real(-1, &[2.0, 1.0, -3.0], CoeffRole::C);
        let d = decay_weights(&c0, 1.0).unwrap();
        assert!((d.get(-1).re - 2.0 / E).abs() < 1e-15);
        assert!((d.get(1).re + 3.0 / E).abs() < 1e-15);
        let back = undecay_weights(&d, 1.0).unwrap();
        assert!(back.max_deviation(&c0) < 1e-15);
    }

    #[test]
    fn undecay_guard() {
        let d = CoeffSeq::from_real(30, &[1.0], CoeffRole::D);
        assert!(matches!(
            undecay_weights(&d, 1.0),
            Err(Error::IndexRangeTooWide { index: 30, .. })
        ));
        assert!(undecay_weights(&d, 0.5).is_ok());
    }

    #[test]
    fn autocorrelation_examples() {
        let r = autocorrelation(&CoeffSeq::from_real(0, &[1.0], CoeffRole::D));
        assert_eq!(r.values(), &[c(1.0)]);

        let r = autocorrelation(&CoeffSeq::from_real(0, &[1.0, 1.0 / E], CoeffRole::D));
        assert_eq!(r.offset(), 0);
        assert!((r.get(1).re - 2.0 / E).abs() < 1e-15);
        assert!((r.get(2).re - 1.0 / (E * E)).abs() < 1e-15);

        let r = autocorrelation(&CoeffSeq::new(0, vec![Complex64::I], CoeffRole::D));
        assert_eq!(r.values(), &[c(1.0)]);
    }

    #[test]
    fn autocorrelation_matches_double_sum() {
        let d = CoeffSeq::new(
            -1,
            vec![
                Complex64::new(0.3, -1.0),
                Complex64::new(2.0, 0.5),
                Complex64::new(-0.7, 0.2),
            ],
            CoeffRole::D,
        );
        let r = autocorrelation(&d);
        assert_eq!(r.offset(), -2);
        assert_eq!(r.len(), 2 * d.len() - 1);
        for n in -2..=2 {
            let mut s = Complex64::ZERO;
            for k in -1..=1 {
                s += d.get(k) * d.get(n - k).conj();
            }
            assert!(s.im.abs() < 1e-15);
            assert!((s - r.get(n)).norm() < 1e-15);
        }
    }

    #[test]
    fn expansion_examples() {
        let f = SIFunction::new(unit(1.0), CoeffSeq::from_real(0, &[1.0], CoeffRole::C));
        let sq = squared_magnitude_expansion(&f).unwrap();
        assert!(sq.is_half_step());
        assert_eq!(sq.coeffs().values(), &[c(1.0)]);
        assert!((sq.evaluate(0.7).re - (-2.0f64 * 0.49).exp()).abs() < 1e-15);

        let f = SIFunction::new(unit(1.0), CoeffSeq::from_real(0, &[1.0, 1.0], CoeffRole::C));
        let sq = squared_magnitude_expansion(&f).unwrap();
        assert!((sq.coeffs().get(0).re - 1.0).abs() < 1e-15);
        assert!((sq.coeffs().get(1).re - 2.0 * (-0.5f64).exp()).abs() < 1e-15);
        assert!((sq.coeffs().get(2).re - 1.0).abs() < 1e-14);
        for i in 0..=20 {
            let x = -1.0 + 0.15 * i as f64;
            assert!((sq.evaluate(x).re - f.evaluate(x).norm_sqr()).abs() < 1e-14);
        }

        let f = SIFunction::new(unit(1.0), CoeffSeq::from_real(0, &[2.0], CoeffRole::C));
        let sq = squared_magnitude_expansion(&f).unwrap();
        assert_eq!(sq.coeffs().values(), &[c(4.0)]);
        assert!(rtilde_bound_constant(1.0) >= 1.0);
        assert!(sq.coeffs().sup_norm() <= rtilde_bound_constant(1.0) * 4.0);
    }

    #[test]
    fn expansion_requires_unit_step() {
        let f = SIFunction::new(
            SpaceParams::new(1.0, 2.0).unwrap(),
            CoeffSeq::from_real(0, &[1.0], CoeffRole::C),
        );
        assert!(matches!(
            squared_magnitude_expansion(&f),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn theta_constant_matches_direct_sum() {
        for gamma in [0.1, 0.5, 1.0, 2.0] {
            let even: f64 = (-200..=200)
                .map(|k| (-2.0 * gamma * (k * k) as f64).exp())
                .sum();
            let odd: f64 = (-200..=200)
                .map(|k| (-gamma * (1.0 - 2.0 * k as f64).powi(2) / 2.0).exp())
                .sum();
            assert!((rtilde_bound_constant(gamma) - even.max(odd)).abs() < 1e-14);
        }
    }
}
