//! Periodic entire functions `L(z) = Σ a_k e^{2πikz}` stored as Laurent
//! polynomials in `q = e^{2πiz}`, and their zeros in the strip
//! `S = {-1/2 < Re z ≤ 1/2}`.

use std::collections::HashSet;
use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots;
use crate::space::{theta_sum, CoeffRole, CoeffSeq, MAX_WEIGHT_EXPONENT};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::LaurentJson", into = "crate::io::LaurentJson")]
pub struct LaurentSeries {
    offset: i64,
    coeffs: Vec<Complex64>,
    gamma_tag: Option<f64>,
}

impl LaurentSeries {
    /// Coefficient `coeffs[j]` multiplies `q^{offset + j}`. Exact zeros at
    /// the ends are trimmed; the zero series has no coefficients.
    pub fn new(offset: i64, coeffs: Vec<Complex64>) -> Self {
        let Some(first) = coeffs.iter().position(|c| *c != Complex64::ZERO) else {
            return Self::zero();
        };
        let last = coeffs
            .iter()
            .rposition(|c| *c != Complex64::ZERO)
            .unwrap_or(first);
        Self {
            offset: offset + first as i64,
            coeffs: coeffs[first..=last].to_vec(),
            gamma_tag: None,
        }
    }

    pub fn zero() -> Self {
        Self {
            offset: 0,
            coeffs: Vec::new(),
            gamma_tag: None,
        }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(0, vec![c])
    }

    pub fn from_coeff_seq(d: &CoeffSeq) -> Self {
        Self::new(d.offset(), d.values().to_vec())
    }

    pub fn with_gamma_tag(mut self, gamma: f64) -> Self {
        self.gamma_tag = Some(gamma);
        self
    }

    pub fn gamma_tag(&self) -> Option<f64> {
        self.gamma_tag
    }

    pub fn to_coeff_seq(&self, role: CoeffRole) -> CoeffSeq {
        if self.is_zero() {
            return CoeffSeq::zero_at(0, role);
        }
        CoeffSeq::new(self.offset, self.coeffs.clone(), role)
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// Highest exponent present.
    pub fn end(&self) -> i64 {
        self.offset + self.coeffs.len() as i64 - 1
    }

    /// Ascending coefficients of `q^{-offset} L(q)`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        if self.is_zero() || k < self.offset || k > self.end() {
            Complex64::ZERO
        } else {
            self.coeffs[(k - self.offset) as usize]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Difference between the highest and lowest exponent.
    pub fn span(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn sup_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval_q(&self, q: Complex64) -> Complex64 {
        if self.is_zero() {
            return Complex64::ZERO;
        }
        roots::eval(&self.coeffs, q) * q.powi(self.offset as i32)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.eval_q((Complex64::I * TAU * z).exp())
    }

    /// `d^order/dz^order`, using `d/dz q^k = 2πik q^k`.
    pub fn derivative(&self, order: u32) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                c * (Complex64::I * TAU * (self.offset + j as i64) as f64).powi(order as i32)
            })
            .collect();
        Self {
            gamma_tag: self.gamma_tag,
            ..Self::new(self.offset, coeffs)
        }
    }

    /// `L*(z) = conj(L(-conj z))`: conjugates every coefficient.
    pub fn involution(&self) -> Self {
        Self {
            offset: self.offset,
            coeffs: self.coeffs.iter().map(|c| c.conj()).collect(),
            gamma_tag: self.gamma_tag,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Complex64::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(self.offset + other.offset, out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            gamma_tag: self.gamma_tag,
            ..Self::new(self.offset, self.coeffs.iter().map(|a| a * c).collect())
        }
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            offset: self.offset + shift,
            ..self.clone()
        }
    }

    /// Coefficient-wise `max_k |a_k - b_k|`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => 0.0,
            (true, false) => other.sup_norm(),
            (false, true) => self.sup_norm(),
            (false, false) => {
                let lo = self.offset.min(other.offset);
                let hi = self.end().max(other.end());
                (lo..=hi)
                    .map(|k| (self.coeff(k) - other.coeff(k)).norm())
                    .fold(0.0, f64::max)
            }
        }
    }

    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Drops end coefficients whose magnitude is at most `rel_tol` times the
    /// largest one.
    pub fn trimmed(&self, rel_tol: f64) -> Self {
        let cut = rel_tol * self.sup_norm();
        let Some(first) = self.coeffs.iter().position(|c| c.norm() > cut) else {
            return Self::zero();
        };
        let last = self
            .coeffs
            .iter()
            .rposition(|c| c.norm() > cut)
            .unwrap_or(first);
        Self {
            offset: self.offset + first as i64,
            coeffs: self.coeffs[first..=last].to_vec(),
            gamma_tag: self.gamma_tag,
        }
    }

    /// Sets imaginary parts to zero.
    pub fn real_part(&self) -> Self {
        Self {
            gamma_tag: self.gamma_tag,
            ..Self::new(
                self.offset,
                self.coeffs
                    .iter()
                    .map(|c| Complex64::new(c.re, 0.0))
                    .collect(),
            )
        }
    }
}

/// Fourier coefficients `∫₀¹ F(ξ) e^{-2πikξ} dξ` for `k ∈ [lo, hi]`, by the
/// trapezoid rule on `n` equispaced nodes (exact for trigonometric
/// polynomials whose exponents are distinct modulo `n`).
pub fn fourier_coefficients(
    f: impl Fn(f64) -> Complex64,
    lo: i64,
    hi: i64,
    n: usize,
) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = (0..n).map(|j| f(j as f64 / n as f64)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    (lo..=hi)
        .map(|k| buf[k.rem_euclid(n as i64) as usize] / n as f64)
        .collect()
}

/// Recovers the coefficients of `L` from its values on one period.
pub fn coefficients_from_period(l: &LaurentSeries, oversample: usize) -> Vec<Complex64> {
    if l.is_zero() {
        return Vec::new();
    }
    let n = oversample.max(1) * (l.span() + 1);
    fourier_coefficients(
        |xi| l.eval(Complex64::new(xi, 0.0)),
        l.offset(),
        l.end(),
        n.max(2),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub y: f64,
    pub observed: f64,
    pub bound: f64,
}

/// `sup · Σ_k e^{-γ(k - π|y|/γ)²} · e^{π²y²/γ}`.
pub fn growth_bound(sup: f64, gamma: f64, y: f64) -> f64 {
    let centre = PI * y.abs() / gamma;
    sup * theta_sum(|k| gamma * (k - centre).powi(2)) * (PI * PI * y * y / gamma).exp()
}

/// `max_k |a_k| e^{γk²}`: the `ℓ∞` norm of the undecayed coefficients.
pub fn implied_sup(l: &LaurentSeries, gamma: f64) -> Result<f64> {
    let mut sup: f64 = 0.0;
    for (j, c) in l.coeffs().iter().enumerate() {
        let k = l.offset() + j as i64;
        let e = gamma * (k * k) as f64;
        if e >= MAX_WEIGHT_EXPONENT {
            return Err(Error::IndexRangeTooWide { index: k, gamma });
        }
        sup = sup.max(c.norm() * e.exp());
    }
    Ok(sup)
}

/// Compares `max_ξ |L(ξ+iy)|` against the Gaussian-decay bound for each `y`,
/// where `claimed_sup` is the asserted `‖c‖∞` of the undecayed sequence.
pub fn growth_check(
    l: &LaurentSeries,
    gamma: f64,
    ys: &[f64],
    claimed_sup: f64,
) -> Result<Vec<GrowthRow>> {
    let n = 256.max(16 * (l.span() + 1));
    let mut rows = Vec::with_capacity(ys.len());
    for &y in ys {
        let observed = (0..n)
            .map(|j| l.eval(Complex64::new(j as f64 / n as f64, y)).norm())
            .fold(0.0, f64::max);
        let bound = growth_bound(claimed_sup, gamma, y);
        if observed > bound * (1.0 + 1e-12) {
            return Err(Error::GrowthViolation { y, observed, bound });
        }
        rows.push(GrowthRow { y, observed, bound });
    }
    Ok(rows)
}

/// Position of a zero relative to the symmetry axes of `J z = -conj z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    /// `0 < Re z < 1/2`.
    #[serde(rename = "S_plus")]
    SPlus,
    /// `Re z ∈ {0, 1/2}`, `z ≠ 0`.
    #[serde(rename = "S_zero")]
    SZero,
    /// `-1/2 < Re z < 0`.
    #[serde(rename = "JS_plus")]
    JSPlus,
}

impl Region {
    pub fn as_str(&self) -> &'static str {
        match self {
            Region::SPlus => "S_plus",
            Region::SZero => "S_zero",
            Region::JSPlus => "JS_plus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripZero {
    pub z: Complex64,
    pub mult: u32,
    pub region: Region,
}

impl StripZero {
    /// Normalizes `Re z` into `(-1/2, 1/2]`, snapping it to `0` or `1/2` and
    /// `Im z` to `0` when within `snap`, and classifies the result.
    pub fn new(z: Complex64, mult: u32, snap: f64) -> Self {
        let mut re = z.re - z.re.round();
        if re <= -0.5 {
            re += 1.0;
        }
        if re.abs() <= snap {
            re = 0.0;
        } else if 0.5 - re.abs() <= snap {
            re = 0.5;
        }
        let im = if z.im.abs() <= snap { 0.0 } else { z.im };
        let region = if re == 0.0 || re == 0.5 {
            Region::SZero
        } else if re > 0.0 {
            Region::SPlus
        } else {
            Region::JSPlus
        };
        Self {
            z: Complex64::new(re, im),
            mult,
            region,
        }
    }

    /// Exact constructor for already-normalized data.
    pub fn exact(z: Complex64, mult: u32) -> Self {
        Self::new(z, mult, 0.0)
    }

    pub fn q(&self) -> Complex64 {
        (Complex64::I * TAU * self.z).exp()
    }

    /// Belongs to the factor family written in `e^{-2πiz}` (`Im z ≥ 0`).
    pub fn is_upper(&self) -> bool {
        self.z.im >= 0.0
    }

    /// `J z = -conj z`, renormalized into the strip.
    pub fn reflect(&self) -> Self {
        let z = Complex64::new(-self.z.re, self.z.im);
        Self::exact(
            if z.re == -0.5 {
                Complex64::new(0.5, z.im)
            } else {
                z
            },
            self.mult,
        )
    }

    pub fn is_origin(&self) -> bool {
        self.z == Complex64::ZERO
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "crate::io::ZeroSetJson", into = "crate::io::ZeroSetJson")]
pub struct ZeroSet {
    pub zeros: Vec<StripZero>,
    /// Multiplicity of the zero at the origin (`q = 1`).
    pub m0: u32,
    /// Exponent `r` of `e^{2πirz}` in the zero-set product representation.
    pub laurent_shift: i64,
}

impl ZeroSet {
    /// Multiplicities including the origin.
    pub fn total_count(&self) -> u32 {
        self.m0 + self.zeros.iter().map(|z| z.mult).sum::<u32>()
    }

    pub fn in_region(&self, region: Region) -> impl Iterator<Item = &StripZero> {
        self.zeros.iter().filter(move |z| z.region == region)
    }

    /// Number of zeros (with multiplicity) written with `e^{-2πiz}` factors.
    pub fn upper_count(&self) -> i64 {
        self.zeros
            .iter()
            .filter(|z| z.is_upper())
            .map(|z| z.mult as i64)
            .sum()
    }

    pub fn reflect(&self) -> Self {
        Self {
            zeros: self.zeros.iter().map(StripZero::reflect).collect(),
            m0: self.m0,
            laurent_shift: self.laurent_shift,
        }
    }
}

/// Tolerances for turning computed roots into zeros with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroOptions {
    /// Relative `q`-distance below which roots always merge; also the snapping
    /// tolerance for `Re z ∈ {0, 1/2}` and `Im z = 0`.
    pub cluster_tol: f64,
    /// Largest normalized Taylor term `|P^{(j)}| |q|^j / (j! Σ|a||q|^k)`,
    /// `j < μ`, accepted at a merged centroid.
    pub validate_tol: f64,
    /// Relative distance beyond which roots are never merged.
    pub merge_radius: f64,
}

impl Default for ZeroOptions {
    fn default() -> Self {
        Self {
            cluster_tol: 1e-6,
            validate_tol: 1e-6,
            merge_radius: 1e-2,
        }
    }
}

impl ZeroOptions {
    pub fn with_cluster_tol(cluster_tol: f64) -> Self {
        Self {
            cluster_tol,
            ..Self::default()
        }
    }
}

/// Zeros of `L` in the strip with multiplicities, the origin multiplicity
/// and the exponential shift.
///
/// Roots of `q^{-offset} L` come from the companion matrix. Roots closer than
/// `cluster_tol` merge; farther pairs (up to `merge_radius`) merge only when
/// the merged centroid has vanishing low-order Taylor terms.
pub fn strip_zeros(l: &LaurentSeries, opts: &ZeroOptions) -> Result<ZeroSet> {
    if l.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let a = l.coeffs();
    let raw = roots::roots(a)?;
    let clusters = cluster_roots(a, &raw, opts)?;

    let mut m0 = 0;
    let mut zeros = Vec::new();
    for (centre, mult) in clusters {
        let q = roots::polish(a, centre, mult as usize - 1, 8);
        let z = Complex64::new(q.arg() / TAU, -q.norm().ln() / TAU);
        let zero = StripZero::new(z, mult, opts.cluster_tol);
        if zero.is_origin() {
            m0 += mult;
        } else {
            zeros.push(zero);
        }
    }
    zeros.sort_by(|x, y| x.z.re.total_cmp(&y.z.re).then(x.z.im.total_cmp(&y.z.im)));
    let upper: i64 = zeros
        .iter()
        .filter(|z| z.is_upper())
        .map(|z| z.mult as i64)
        .sum();
    Ok(ZeroSet {
        zeros,
        m0,
        laurent_shift: l.offset() + upper,
    })
}

fn cluster_roots(
    a: &[Complex64],
    raw: &[Complex64],
    opts: &ZeroOptions,
) -> Result<Vec<(Complex64, u32)>> {
    struct Cluster {
        id: usize,
        sum: Complex64,
        count: u32,
    }
    impl Cluster {
        fn centre(&self) -> Complex64 {
            self.sum / self.count as f64
        }
    }
    let rel = |x: Complex64, y: Complex64| (x - y).norm() / x.norm().max(y.norm());

    let mut clusters: Vec<Cluster> = raw
        .iter()
        .enumerate()
        .map(|(id, &q)| Cluster {
            id,
            sum: q,
            count: 1,
        })
        .collect();
    let mut next_id = clusters.len();
    let mut rejected: HashSet<(usize, usize)> = HashSet::new();

    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                let key = (
                    clusters[i].id.min(clusters[j].id),
                    clusters[i].id.max(clusters[j].id),
                );
                if rejected.contains(&key) {
                    continue;
                }
                let d = rel(clusters[i].centre(), clusters[j].centre());
                if best.is_none_or(|b| d < b.2) {
                    best = Some((i, j, d));
                }
            }
        }
        let Some((i, j, dist)) = best else { break };
        if dist > opts.merge_radius {
            break;
        }
        let sum = clusters[i].sum + clusters[j].sum;
        let count = clusters[i].count + clusters[j].count;
        let centre = sum / count as f64;
        let accept = dist <= opts.cluster_tol
            || (0..count as usize)
                .all(|order| roots::normalized_derivative(a, centre, order) <= opts.validate_tol);
        if accept {
            clusters.swap_remove(j);
            clusters[i] = Cluster {
                id: next_id,
                sum,
                count,
            };
            next_id += 1;
        } else if dist < 3.0 * opts.cluster_tol {
            return Err(Error::ClusterAmbiguous {
                distance: dist,
                tol: opts.cluster_tol,
            });
        } else {
            let key = (
                clusters[i].id.min(clusters[j].id),
                clusters[i].id.max(clusters[j].id),
            );
            rejected.insert(key);
        }
    }
    Ok(clusters.iter().map(|c| (c.centre(), c.count)).collect())
}
