//! Factorization of periodic entire functions from their strip zeros, and the
//! family of all solutions `D` of `D · D* = R` obtained by zero flipping.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::periodic::{
    fourier_coefficients, strip_zeros, LaurentSeries, Region, StripZero, ZeroOptions, ZeroSet,
};
use crate::space::{CoeffRole, CoeffSeq};

/// Relative size of imaginary coefficients tolerated in a self-adjoint series.
pub const SELF_ADJOINT_TOL: f64 = 1e-10;

/// `(e^{2πiz} - 1)^m e^{2πirz} Π_{W+} (e^{-2πiz} - e^{-2πiw}) / (1 - e^{-2πiw})
/// Π_{W-} (e^{2πiz} - e^{2πiw}) / (1 - e^{2πiw})`, where `W+` holds the zeros
/// with `Im w ≥ 0`. Every zero factor equals 1 at `z = 0`.
pub fn pi_product(zeros: &[StripZero], m: u32, r: i64) -> Result<LaurentSeries> {
    let mut acc = LaurentSeries::constant(Complex64::ONE).shift(r);
    let q_minus_one = LaurentSeries::new(0, vec![-Complex64::ONE, Complex64::ONE]);
    for _ in 0..m {
        acc = acc.mul(&q_minus_one);
    }
    for w in zeros {
        if w.is_origin() {
            return Err(Error::ZeroAtOrigin);
        }
        let factor = zero_factor(w)?;
        for _ in 0..w.mult {
            acc = acc.mul(&factor);
        }
    }
    Ok(acc)
}

fn zero_factor(w: &StripZero) -> Result<LaurentSeries> {
    let singular = || Error::NormalizationSingular {
        re: w.z.re,
        im: w.z.im,
    };
    if w.is_upper() {
        // (q^{-1} - a) / (1 - a), a = e^{-2πiw}
        let a = w.q().inv();
        let norm = Complex64::ONE - a;
        if norm.norm() < 1e-300 {
            return Err(singular());
        }
        Ok(LaurentSeries::new(-1, vec![norm.inv(), -a / norm]))
    } else {
        // (q - b) / (1 - b), b = e^{2πiw}
        let b = w.q();
        let norm = Complex64::ONE - b;
        if norm.norm() < 1e-300 {
            return Err(singular());
        }
        Ok(LaurentSeries::new(0, vec![-b / norm, norm.inv()]))
    }
}

/// Applies `J z = -conj z` to every zero.
pub fn reflect(zeros: &[StripZero]) -> Vec<StripZero> {
    zeros.iter().map(StripZero::reflect).collect()
}

/// Outcome of comparing two routes to the same series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub deviation: f64,
    pub scale: f64,
}

impl IdentityCheck {
    fn between(a: &LaurentSeries, b: &LaurentSeries) -> Self {
        Self {
            deviation: a.max_deviation(b),
            scale: a.sup_norm().max(b.sup_norm()),
        }
    }

    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            self.deviation
        } else {
            self.deviation / self.scale
        }
    }
}

/// `Π(W, m, r)*` against `Π(JW, m, r)`.
pub fn involution_of_product(zeros: &[StripZero], m: u32, r: i64) -> Result<IdentityCheck> {
    let lhs = pi_product(zeros, m, r)?.involution();
    let rhs = pi_product(&reflect(zeros), m, r)?;
    Ok(IdentityCheck::between(&lhs, &rhs))
}

/// `Π(W₁, m₁, r₁) Π(W₂, m₂, r₂)` against `Π(W₁ ∪̇ W₂, m₁ + m₂, r₁ + r₂)`.
pub fn product_merge(
    first: (&[StripZero], u32, i64),
    second: (&[StripZero], u32, i64),
) -> Result<IdentityCheck> {
    let lhs =
        pi_product(first.0, first.1, first.2)?.mul(&pi_product(second.0, second.1, second.2)?);
    let merged: Vec<StripZero> = first.0.iter().chain(second.0).copied().collect();
    let rhs = pi_product(&merged, first.1 + second.1, first.2 + second.2)?;
    Ok(IdentityCheck::between(&lhs, &rhs))
}

/// One solution `D_V = C Π(W, m, r)` of `D D* = R`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorSpec {
    pub zeros_w: Vec<StripZero>,
    pub m: u32,
    pub r_shift: i64,
    pub constant: Complex64,
    /// `(index into the S₊ zeros of R, copies kept in V)`, nonzero entries only.
    pub selection: Vec<(usize, u32)>,
    pub series: LaurentSeries,
}

/// Wire form: `{"V": [[zero_index, copies], ...], "m", "r", "C": [re, im]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorSpecJson {
    #[serde(rename = "V")]
    pub selection: Vec<(usize, u32)>,
    pub m: u32,
    pub r: i64,
    #[serde(rename = "C")]
    pub constant: [f64; 2],
}

impl From<&FactorSpec> for FactorSpecJson {
    fn from(f: &FactorSpec) -> Self {
        Self {
            selection: f.selection.clone(),
            m: f.m,
            r: f.r_shift,
            constant: [f.constant.re, f.constant.im],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorFamily {
    /// Zero set of `R`.
    pub zeros: ZeroSet,
    /// Distinct zeros of `R` in `S₊`, the pool the selections index into.
    pub splus: Vec<StripZero>,
    pub members: Vec<FactorSpec>,
    /// `Π (μ_j + 1)` over the `S₊` zeros; may exceed `members.len()`.
    pub total: u128,
}

fn check_self_adjoint(r: &LaurentSeries) -> Result<LaurentSeries> {
    let max_imag = r.max_imag();
    if max_imag > SELF_ADJOINT_TOL * r.sup_norm() {
        return Err(Error::NotSelfAdjoint { max_imag });
    }
    Ok(r.real_part())
}

/// Least-squares `|C|²` with `R ≈ |C|² target`.
fn calibrate(target: &LaurentSeries, r: &LaurentSeries) -> f64 {
    let lo = target.offset().min(r.offset());
    let hi = target.end().max(r.end());
    let (mut num, mut den) = (0.0, 0.0);
    for k in lo..=hi {
        let t = target.coeff(k);
        num += (t.conj() * r.coeff(k)).re;
        den += t.norm_sqr();
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Every factor `D_V` with `D_V D_V* = R`, enumerated over the multiplicity
/// selections `V ⊆ Z ∩ S₊` in lexicographic order, up to `max_count` members.
pub fn solution_family(
    r: &LaurentSeries,
    max_count: usize,
    opts: &ZeroOptions,
) -> Result<FactorFamily> {
    let r = check_self_adjoint(r)?;
    let zeros = strip_zeros(&r, opts)?;
    if let Some(z) = zeros.in_region(Region::SZero).find(|z| z.mult % 2 != 0) {
        return Err(Error::OddMultiplicityOnAxis { mult: z.mult });
    }
    if zeros.m0 % 2 != 0 || zeros.laurent_shift % 2 != 0 {
        return Err(Error::OddShiftOrOrigin {
            m0: zeros.m0,
            shift: zeros.laurent_shift,
        });
    }
    let splus: Vec<StripZero> = zeros.in_region(Region::SPlus).copied().collect();
    let axis: Vec<StripZero> = zeros
        .in_region(Region::SZero)
        .map(|z| StripZero {
            mult: z.mult / 2,
            ..*z
        })
        .collect();
    let m = zeros.m0 / 2;
    let shift = zeros.laurent_shift / 2;
    let total = splus
        .iter()
        .fold(1u128, |acc, z| acc.saturating_mul(z.mult as u128 + 1));

    let mut members = Vec::new();
    let mut choice = vec![0u32; splus.len()];
    while members.len() < max_count {
        let mut w = Vec::new();
        for (zero, &keep) in splus.iter().zip(&choice) {
            if keep > 0 {
                w.push(StripZero {
                    mult: keep,
                    ..*zero
                });
            }
            if zero.mult > keep {
                w.push(StripZero {
                    mult: zero.mult - keep,
                    ..zero.reflect()
                });
            }
        }
        w.extend_from_slice(&axis);
        let pi = pi_product(&w, m, shift)?;
        let c = calibrate(&pi.mul(&pi.involution()), &r).max(0.0).sqrt();
        members.push(FactorSpec {
            selection: choice
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| (i, k))
                .collect(),
            zeros_w: w,
            m,
            r_shift: shift,
            constant: Complex64::new(c, 0.0),
            series: pi.scale(Complex64::new(c, 0.0)),
        });
        if !advance(&mut choice, &splus) {
            break;
        }
    }
    Ok(FactorFamily {
        zeros,
        splus,
        members,
        total,
    })
}

// odometer over 0..=μ_j, last position fastest
fn advance(choice: &mut [u32], pool: &[StripZero]) -> bool {
    for i in (0..choice.len()).rev() {
        if choice[i] < pool[i].mult {
            choice[i] += 1;
            return true;
        }
        choice[i] = 0;
    }
    false
}

/// The real `D` with `D² = R`, for `R` whose zeros all have even
/// multiplicity. The sign is fixed so the largest coefficient is positive.
pub fn real_square_root(r: &LaurentSeries, opts: &ZeroOptions) -> Result<LaurentSeries> {
    let r = check_self_adjoint(r)?;
    let zeros = strip_zeros(&r, opts)?;
    if let Some(mult) = std::iter::once(zeros.m0)
        .chain(zeros.zeros.iter().map(|z| z.mult))
        .find(|m| m % 2 != 0)
    {
        return Err(Error::OddMultiplicity { mult });
    }
    if zeros.laurent_shift % 2 != 0 {
        return Err(Error::OddShiftOrOrigin {
            m0: zeros.m0,
            shift: zeros.laurent_shift,
        });
    }
    let mut w = Vec::new();
    for z in &zeros.zeros {
        let half = StripZero {
            mult: z.mult / 2,
            ..*z
        };
        match z.region {
            Region::SPlus => {
                w.push(half);
                w.push(half.reflect());
            }
            Region::SZero => w.push(half),
            Region::JSPlus => {}
        }
    }
    let pi = pi_product(&w, zeros.m0 / 2, zeros.laurent_shift / 2)?.real_part();
    let c2 = calibrate(&pi.mul(&pi), &r);
    if c2 <= 0.0 {
        return Err(Error::NotASquare);
    }
    Ok(canonical_sign(&pi.scale(Complex64::new(c2.sqrt(), 0.0))))
}

/// Flips the sign so that the largest-magnitude coefficient has positive real part.
pub fn canonical_sign(l: &LaurentSeries) -> LaurentSeries {
    let lead = l
        .coeffs()
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex64::ONE);
    if lead.re < 0.0 {
        l.scale(-Complex64::ONE)
    } else {
        l.clone()
    }
}

/// Decayed coefficients `d` of an even real function from `r̂ = d̂² ≥ 0`, as
/// the Fourier coefficients of the nonnegative root `r̂^{1/2}`.
pub fn even_real_square_root(r_hat: &LaurentSeries, gamma: f64) -> Result<CoeffSeq> {
    let _ = gamma;
    if r_hat.is_zero() {
        return Ok(CoeffSeq::zero_at(0, CoeffRole::D));
    }
    let n = 16.max(8 * (r_hat.span() + 1));
    let values: Vec<Complex64> = (0..n)
        .map(|j| r_hat.eval(Complex64::new(j as f64 / n as f64, 0.0)))
        .collect();
    let scale = values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let max_imag = values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    if max_imag > SELF_ADJOINT_TOL * scale {
        return Err(Error::NonRealSpectrum { max_imag });
    }
    let min = values.iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
    if min < -SELF_ADJOINT_TOL * scale {
        return Err(Error::NegativeSpectrum { min });
    }
    let lo = r_hat.offset().div_euclid(2);
    let hi = -(-r_hat.end()).div_euclid(2);
    let coeffs = fourier_coefficients(
        |xi| {
            Complex64::new(
                values[(xi * n as f64).round() as usize % n]
                    .re
                    .max(0.0)
                    .sqrt(),
                0.0,
            )
        },
        lo,
        hi,
        n,
    );
    Ok(CoeffSeq::new(lo, coeffs, CoeffRole::D))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, TAU};

    fn re(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn zero(re_: f64, im: f64) -> StripZero {
        StripZero::exact(Complex64::new(re_, im), 1)
    }

    #[test]
    fn pi_product_examples() {
        assert_eq!(
            pi_product(&[], 0, 0).unwrap(),
            LaurentSeries::constant(re(1.0))
        );
        assert_eq!(
            pi_product(&[], 1, 0).unwrap(),
            LaurentSeries::new(0, vec![re(-1.0), re(1.0)])
        );

        let w = StripZero::exact(Complex64::new(0.5, -1.0 / TAU), 2);
        let pi = pi_product(&[w], 0, 0).unwrap();
        let target = LaurentSeries::new(0, vec![re(1.0), re(2.0 / E), re(1.0 / (E * E))]);
        let c = target.coeff(0) / pi.coeff(0);
        assert!(pi.scale(c).max_deviation(&target) < 1e-14);
    }

    #[test]
    fn pi_product_factors_are_normalized_at_origin() {
        let ws = [zero(0.2, 0.3), zero(-0.4, -0.1), zero(0.5, 0.0)];
        let pi = pi_product(&ws, 0, 3).unwrap();
        assert!((pi.eval(Complex64::ZERO) - re(1.0)).norm() < 1e-13);
        for w in ws {
            assert!(pi.eval(w.z).norm() < 1e-13);
        }
    }

    #[test]
    fn pi_product_rejects_origin() {
        assert!(matches!(
            pi_product(&[zero(0.0, 0.0)], 0, 0),
            Err(Error::ZeroAtOrigin)
        ));
    }

    #[test]
    fn involution_examples() {
        let check = involution_of_product(&[zero(0.2, 0.3)], 0, 0).unwrap();
        assert!(check.relative() <= 1e-12);

        let w = zero(0.2, 0.3);
        let sym = [w, w.reflect()];
        let pi = pi_product(&sym, 0, 1).unwrap();
        assert!(pi.max_imag() <= 1e-12);

        let check = involution_of_product(&[], 1, 0).unwrap();
        assert_eq!(check.deviation, 0.0);
    }

    #[test]
    fn product_merge_examples() {
        let check = product_merge((&[], 1, 0), (&[], 1, 0)).unwrap();
        assert_eq!(check.deviation, 0.0);
        assert_eq!(
            pi_product(&[], 2, 0).unwrap().coeffs(),
            &[re(1.0), re(-2.0), re(1.0)]
        );

        let check = product_merge((&[zero(0.2, 0.3)], 0, 0), (&[zero(-0.2, 0.3)], 0, 0)).unwrap();
        assert!(check.relative() < 1e-12);

        let a = pi_product(&[], 0, 1)
            .unwrap()
            .mul(&pi_product(&[], 0, 2).unwrap());
        assert_eq!(a.offset(), 3);
    }

    #[test]
    fn family_of_real_two_coefficient_source() {
        let r = LaurentSeries::new(0, vec![re(1.0), re(2.0 / E), re(1.0 / (E * E))]);
        let fam = solution_family(&r, 16, &ZeroOptions::default()).unwrap();
        assert_eq!(fam.total, 1);
        assert_eq!(fam.members.len(), 1);
        let d = &fam.members[0].series;
        let target = LaurentSeries::new(0, vec![re(1.0), re(1.0 / E)]);
        assert!(d.max_deviation(&target) < 1e-12);
    }

    #[test]
    fn family_with_one_flippable_zero() {
        // D = 1 + a q with a non-real: one zero off the axes
        let d = LaurentSeries::new(0, vec![re(1.0), Complex64::new(0.2, 0.25)]);
        let r = d.mul(&d.involution());
        let fam = solution_family(&r, 16, &ZeroOptions::default()).unwrap();
        assert_eq!(fam.total, 2);
        assert_eq!(fam.members.len(), 2);
        for m in &fam.members {
            let prod = m.series.mul(&m.series.involution());
            assert!(prod.max_deviation(&r) < 1e-12 * r.sup_norm());
        }
        let found = fam.members.iter().any(|m| {
            let alpha = d.coeff(0) / m.series.coeff(0);
            (alpha.norm() - 1.0).abs() < 1e-10 && m.series.scale(alpha).max_deviation(&d) < 1e-10
        });
        assert!(found);
    }

    #[test]
    fn family_of_constant() {
        let fam = solution_family(
            &LaurentSeries::constant(re(4.0)),
            4,
            &ZeroOptions::default(),
        )
        .unwrap();
        assert_eq!(fam.total, 1);
        assert!(
            fam.members[0]
                .series
                .max_deviation(&LaurentSeries::constant(re(2.0)))
                < 1e-15
        );
    }

    #[test]
    fn family_error_paths() {
        let r = LaurentSeries::new(0, vec![re(1.0), Complex64::new(0.0, 0.5)]);
        assert!(matches!(
            solution_family(&r, 4, &ZeroOptions::default()),
            Err(Error::NotSelfAdjoint { .. })
        ));
        // 1 + q has a simple zero at z = 1/2
        let r = LaurentSeries::new(0, vec![re(1.0), re(1.0)]);
        assert!(matches!(
            solution_family(&r, 4, &ZeroOptions::default()),
            Err(Error::OddMultiplicityOnAxis { mult: 1 })
        ));
        let r = LaurentSeries::new(0, vec![re(-1.0), re(1.0)]);
        assert!(matches!(
            solution_family(&r, 4, &ZeroOptions::default()),
            Err(Error::OddShiftOrOrigin { .. })
        ));
    }

    #[test]
    fn real_square_root_examples() {
        let d = LaurentSeries::new(0, vec![re(1.0), re(1.0 / E)]);
        let got = real_square_root(&d.mul(&d), &ZeroOptions::default()).unwrap();
        assert!(got.max_deviation(&d) < 1e-12);

        let got =
            real_square_root(&LaurentSeries::constant(re(1.0)), &ZeroOptions::default()).unwrap();
        assert_eq!(got, LaurentSeries::constant(re(1.0)));

        let q1 = LaurentSeries::new(0, vec![re(-1.0), re(1.0)]);
        let got = real_square_root(&q1.mul(&q1), &ZeroOptions::default()).unwrap();
        // canonical sign makes the larger-magnitude (tied, first) coefficient positive
        assert!(got.max_deviation(&q1) < 1e-12 || got.max_deviation(&q1.scale(re(-1.0))) < 1e-12);
        let sq = got.mul(&got);
        assert!(sq.max_deviation(&q1.mul(&q1)) < 1e-12);
    }

    #[test]
    fn real_square_root_rejects_non_squares() {
        let d = LaurentSeries::new(0, vec![re(1.0), Complex64::new(0.2, 0.25)]);
        let r = d.mul(&d.involution());
        assert!(matches!(
            real_square_root(&r, &ZeroOptions::default()),
            Err(Error::OddMultiplicity { mult: 1 })
        ));
        let r = LaurentSeries::constant(re(-1.0));
        assert!(matches!(
            real_square_root(&r, &ZeroOptions::default()),
            Err(Error::NotASquare)
        ));
    }

    #[test]
    fn even_root_examples() {
        let d = even_real_square_root(&LaurentSeries::constant(re(1.0)), 1.0).unwrap();
        assert_eq!(d.offset(), 0);
        assert!((d.get(0) - re(1.0)).norm() < 1e-15);
        assert_eq!(d.len(), 1);

        // c = {-1: 1, 0: 2, 1: 1}, γ = 1
        let dk = [(-1.0f64).exp(), 2.0, (-1.0f64).exp()];
        let dl = LaurentSeries::new(-1, dk.iter().map(|&x| re(x)).collect());
        let got = even_real_square_root(&dl.mul(&dl), 1.0).unwrap();
        for (k, v) in [(-1, dk[0]), (0, dk[1]), (1, dk[2])] {
            assert!((got.get(k) - re(v)).norm() < 1e-12);
        }

        // 1 - 2 cos(2πξ) changes sign
        let r = LaurentSeries::new(-1, vec![re(-1.0), re(1.0), re(-1.0)]);
        assert!(matches!(
            even_real_square_root(&r, 1.0),
            Err(Error::NegativeSpectrum { .. })
        ));
    }

    #[test]
    fn factor_spec_json_shape() {
        let spec = FactorSpec {
            zeros_w: vec![],
            m: 1,
            r_shift: -2,
            constant: Complex64::new(0.5, 0.0),
            selection: vec![(0, 1), (2, 2)],
            series: LaurentSeries::constant(re(1.0)),
        };
        let json = serde_json::to_value(FactorSpecJson::from(&spec)).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"V": [[0, 1], [2, 2]], "m": 1, "r": -2, "C": [0.5, 0.0]})
        );
    }
}
