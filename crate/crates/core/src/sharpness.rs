//! Sign-retrieval counterexamples below the critical density.
//!
//! Split `Λ` into alternating halves `S` and `Sᶜ`. If `f` vanishes on `S` and
//! `g` on `Sᶜ`, then `fg = 0` on `Λ`, so `|f + g|² = |f - g|²` there while
//! `f + g` and `f - g` are linearly independent.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{gaussian_collocation, null_space};
use crate::sampling::SampleSet;
use crate::space::{CoeffRole, CoeffSeq, SIFunction, SpaceParams};

/// Singular values at or below this fraction of the largest count as null.
pub const NULL_TOL: f64 = 1e-8;

/// `(λ₀, λ₂, …)` and `(λ₁, λ₃, …)`.
pub fn split_even_odd(s: &SampleSet) -> (SampleSet, SampleSet) {
    let pick = |parity| {
        let points = s.points().iter().copied().skip(parity).step_by(2).collect();
        let set = SampleSet::new(points).expect("subsequence of a separated set");
        match s.window() {
            Some((a, b)) => set.with_window(a, b),
            None => set,
        }
    };
    (pick(0), pick(1))
}

/// Coefficient indices `k` with `βk` inside `[a, b]`.
fn coefficient_range(p: SpaceParams, a: f64, b: f64) -> (i64, i64) {
    (
        (a / p.beta() - 1e-9).ceil() as i64,
        (b / p.beta() + 1e-9).floor() as i64,
    )
}

/// A real `f` with `‖c‖∞ = 1` vanishing on the points of `s` inside the window
/// shrunk by `guard`, with coefficients on the same shrunk window.
pub fn vanishing_function(
    s: &SampleSet,
    p: SpaceParams,
    window: (f64, f64),
    guard: f64,
) -> Result<SIFunction> {
    let (a, b) = (window.0 + guard, window.1 - guard);
    let (k_lo, k_hi) = coefficient_range(p, a, b);
    if k_lo > k_hi {
        return Err(Error::InvalidParameter(format!(
            "no coefficients fit in [{a}, {b}]"
        )));
    }
    let rows: Vec<f64> = s
        .points()
        .iter()
        .copied()
        .filter(|&x| a <= x && x <= b)
        .collect();
    let centres: Vec<f64> = (k_lo..=k_hi).map(|k| k as f64 * p.beta()).collect();
    let m = gaussian_collocation(&rows, &centres, p.gamma());
    let (basis, ratio) = null_space(&m, NULL_TOL);
    if basis.ncols() == 0 {
        return Err(Error::NoNullSpace { ratio });
    }
    // singular values come sorted, so the last basis column has the smallest one
    let v = if rows.is_empty() {
        basis.column(0)
    } else {
        basis.column(basis.ncols() - 1)
    };
    let coeffs = normalize(v.iter().copied().collect());
    Ok(SIFunction::new(
        p,
        CoeffSeq::from_real(k_lo, &coeffs, CoeffRole::C),
    ))
}

fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let lead = v
        .iter()
        .copied()
        .max_by(|a, b| a.abs().total_cmp(&b.abs()))
        .unwrap_or(1.0);
    for x in &mut v {
        *x /= lead;
    }
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    /// `f + g`.
    pub first: SIFunction,
    /// `f - g`.
    pub second: SIFunction,
    /// `f`, vanishing on the even-indexed guarded points.
    pub f: SIFunction,
    /// `g`, vanishing on the odd-indexed guarded points.
    pub g: SIFunction,
    /// Rows `(λ, |F(λ)|, |G(λ)|)` over the guarded points.
    pub evidence: Vec<(f64, f64, f64)>,
    /// `max_λ ||F(λ)| - |G(λ)||` over the guarded points.
    pub mismatch: f64,
    /// `max(‖F‖∞, ‖G‖∞)` over the guarded points.
    pub scale: f64,
    /// Gram determinant of the unit-normalized coefficient vectors.
    pub gram_determinant: f64,
    /// `max_λ |f(λ)|` on `S` and `|g(λ)|` on `Sᶜ`, guarded.
    pub vanishing: (f64, f64),
}

/// The pair `(f + g, f - g)` with equal magnitudes on the guarded points of `s`.
pub fn build_counterexample(
    s: &SampleSet,
    p: SpaceParams,
    window: (f64, f64),
    guard: f64,
) -> Result<Counterexample> {
    let (a, b) = (window.0 + guard, window.1 - guard);
    let guarded = s.restrict(a, b);
    if guarded.len() >= 2 {
        let density = guarded.len() as f64 / (b - a);
        if density >= p.critical_density() {
            log::warn!(
                "density {density:.3} is not below the critical density {:.3}",
                p.critical_density()
            );
        }
    }
    let (even, odd) = split_even_odd(&guarded);
    let f = vanishing_function(&even, p, window, guard)?;
    let g = vanishing_function(&odd, p, window, guard)?;
    let plus = f.map_coeffs(|c| add(c, g.coeffs(), 1.0));
    let minus = f.map_coeffs(|c| add(c, g.coeffs(), -1.0));

    let evidence: Vec<(f64, f64, f64)> = guarded
        .points()
        .iter()
        .map(|&x| (x, plus.evaluate(x).norm(), minus.evaluate(x).norm()))
        .collect();
    let mismatch = evidence
        .iter()
        .map(|(_, u, v)| (u - v).abs())
        .fold(0.0, f64::max);
    let scale = evidence
        .iter()
        .map(|(_, u, v)| u.max(*v))
        .fold(0.0, f64::max);
    let max_on = |h: &SIFunction, pts: &SampleSet| {
        pts.points()
            .iter()
            .map(|&x| h.evaluate(x).norm())
            .fold(0.0, f64::max)
    };
    let vanishing = (max_on(&f, &even), max_on(&g, &odd));
    let gram_determinant = gram(plus.coeffs(), minus.coeffs());
    Ok(Counterexample {
        first: plus,
        second: minus,
        f,
        g,
        evidence,
        mismatch,
        scale,
        gram_determinant,
        vanishing,
    })
}

fn add(a: &CoeffSeq, b: &CoeffSeq, sign: f64) -> CoeffSeq {
    let lo = a.offset().min(b.offset());
    let hi = a.end().max(b.end());
    let values = (lo..=hi).map(|k| a.get(k) + b.get(k) * sign).collect();
    CoeffSeq::new(lo, values, CoeffRole::C)
}

/// `1 - |⟨u, v⟩|²` for the unit-normalized vectors.
fn gram(a: &CoeffSeq, b: &CoeffSeq) -> f64 {
    let lo = a.offset().min(b.offset());
    let hi = a.end().max(b.end());
    let column = |c: &CoeffSeq| {
        DMatrix::from_iterator((hi - lo + 1) as usize, 1, (lo..=hi).map(|k| c.get(k)))
    };
    let (u, v) = (column(a), column(b));
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    let inner: Complex64 = (u.adjoint() * &v)[(0, 0)] / (nu * nv);
    1.0 - inner.norm_sqr()
}
