//! End-to-end reconstruction from phaseless samples.
//!
//! The samples are rescaled to unit step, the `|f|²` coefficients `r̃` are
//! fitted, the periodic series `R(q) = Σ r̃_n e^{-γn²/2} qⁿ` is built and
//! factored as `D D* = R`, and the coefficients `c_k = d_k e^{γk²}` are read
//! back. Before factoring, the support of `r̃` is moved next to the origin by
//! an even shift so that the weights `e^{±γk²}` stay moderate; the shift is
//! undone on `c`.

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::factorization::{even_real_square_root, real_square_root, solution_family};
use crate::periodic::{LaurentSeries, ZeroOptions, ZeroSet};
use crate::sampling::{default_rtilde_window, recover_rtilde, FrameBounds, PhaselessSamples};
use crate::space::{decay_weights, undecay_weights, CoeffRole, CoeffSeq, SIFunction, SpaceParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RetrievalMode {
    /// Real-valued source, recovered up to sign.
    Real,
    /// Complex-valued source; the whole zero-flipping family.
    Complex,
    /// Even real source with a nonnegative Fourier series.
    EvenReal,
}

impl std::str::FromStr for RetrievalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Self::Real),
            "complex" | "all" => Ok(Self::Complex),
            "even_real" | "even-real" => Ok(Self::EvenReal),
            _ => Err(Error::InvalidParameter(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RetrievalOptions {
    /// Support `[a, b]` of `c` to fit; the `r̃` window is `[2a, 2b]`. Defaults
    /// to the half-step centres inside the sample hull.
    pub coefficient_window: Option<(i64, i64)>,
    pub max_solutions: usize,
    pub zero_opts: ZeroOptions,
    /// Ends of `r̃` below `trim_tol ‖r̃‖∞` are dropped before factoring.
    pub trim_tol: f64,
}

impl Default for RetrievalOptions {
    fn default() -> Self {
        Self {
            coefficient_window: None,
            max_solutions: 64,
            zero_opts: ZeroOptions::default(),
            trim_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrievalReport {
    pub mode: RetrievalMode,
    pub recovered: Vec<SIFunction>,
    /// `max_λ ||f(λ)| - m_λ|` for each recovered function.
    pub residuals: Vec<f64>,
    pub conditioning: FrameBounds,
    #[serde(serialize_with = "saturating_u64")]
    pub family_size: u128,
    /// Largest misfit of the `|f|²` least-squares fit.
    pub rtilde_residual: f64,
    pub note: String,
    /// Strip zeros of the (recentred) `R`, for the complex mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeros: Option<ZeroSet>,
}

fn saturating_u64<S: Serializer>(v: &u128, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(u64::try_from(*v).unwrap_or(u64::MAX))
}

const SIGN_NOTE: &str = "real solution determined up to sign; -f has the same samples";
const PHASE_NOTE: &str =
    "each solution is determined up to a unimodular factor; the largest coefficient is normalized to be real and positive";

struct Prepared {
    unit: SpaceParams,
    r: LaurentSeries,
    shift: i64,
    bounds: FrameBounds,
    rtilde_residual: f64,
}

fn prepare(m: &PhaselessSamples, p: SpaceParams, opts: &RetrievalOptions) -> Result<Prepared> {
    let unit = SpaceParams::new(p.gamma() * p.beta() * p.beta(), 1.0)?;
    let scaled = PhaselessSamples::new(
        m.locations().iter().map(|x| x / p.beta()).collect(),
        m.magnitudes().to_vec(),
    )?;
    let window = match opts.coefficient_window {
        Some((a, b)) => (2 * a, 2 * b),
        None => default_rtilde_window(&scaled.sample_set(), 1.0)
            .ok_or_else(|| Error::InvalidParameter("no samples".into()))?,
    };
    let fit = recover_rtilde(&scaled, unit, window)?;
    let rt = LaurentSeries::from_coeff_seq(&fit.coeffs).trimmed(opts.trim_tol);
    if rt.is_zero() {
        return Ok(Prepared {
            unit,
            r: rt,
            shift: 0,
            bounds: fit.bounds,
            rtilde_residual: fit.residual,
        });
    }
    let shift = ((rt.offset() + rt.end()) as f64 / 4.0).round() as i64;
    let centred = rt.to_coeff_seq(CoeffRole::RTilde).shifted(-2 * shift);
    let r = decay_weights(&centred, unit.gamma() / 2.0)?.with_role(CoeffRole::R);
    Ok(Prepared {
        unit,
        r: LaurentSeries::from_coeff_seq(&r).with_gamma_tag(unit.gamma()),
        shift,
        bounds: fit.bounds,
        rtilde_residual: fit.residual,
    })
}

fn assemble(d: &CoeffSeq, prep: &Prepared, p: SpaceParams) -> Result<SIFunction> {
    let c =
        undecay_weights(&d.clone().with_role(CoeffRole::D), prep.unit.gamma())?.shifted(prep.shift);
    Ok(SIFunction::new(p, c.with_role(CoeffRole::C)))
}

fn largest(c: &CoeffSeq) -> Complex64 {
    c.values()
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex64::ONE)
}

fn canonical_sign(f: SIFunction) -> SIFunction {
    if largest(f.coeffs()).re < 0.0 {
        f.map_coeffs(|c| c.scaled(-Complex64::ONE))
    } else {
        f
    }
}

fn canonical_phase(f: SIFunction) -> SIFunction {
    let lead = largest(f.coeffs());
    if lead.norm() == 0.0 {
        return f;
    }
    let alpha = lead.conj() / lead.norm();
    f.map_coeffs(|c| c.scaled(alpha))
}

/// Recovers `f` from `|f(λ)|` in the given mode.
pub fn reconstruct(
    m: &PhaselessSamples,
    p: SpaceParams,
    mode: RetrievalMode,
    opts: &RetrievalOptions,
) -> Result<RetrievalReport> {
    let prep = prepare(m, p, opts)?;
    let note = match mode {
        RetrievalMode::Complex => PHASE_NOTE,
        _ => SIGN_NOTE,
    }
    .to_string();
    let mut report = RetrievalReport {
        mode,
        recovered: Vec::new(),
        residuals: Vec::new(),
        conditioning: prep.bounds,
        family_size: 1,
        rtilde_residual: prep.rtilde_residual,
        note,
        zeros: None,
    };
    if prep.r.is_zero() {
        report
            .recovered
            .push(SIFunction::new(p, CoeffSeq::zero_at(0, CoeffRole::C)));
    } else {
        match mode {
            RetrievalMode::Real => {
                let d = real_square_root(&prep.r, &opts.zero_opts)?;
                let f = assemble(&d.to_coeff_seq(CoeffRole::D), &prep, p)?;
                report.recovered.push(canonical_sign(f));
            }
            RetrievalMode::EvenReal => {
                let d = even_real_square_root(&prep.r, prep.unit.gamma())?;
                report
                    .recovered
                    .push(canonical_sign(assemble(&d, &prep, p)?));
            }
            RetrievalMode::Complex => {
                let family = solution_family(&prep.r, opts.max_solutions, &opts.zero_opts)?;
                for member in &family.members {
                    let f = assemble(&member.series.to_coeff_seq(CoeffRole::D), &prep, p)?;
                    report.recovered.push(canonical_phase(f));
                }
                report.family_size = family.total;
                report.zeros = Some(family.zeros);
            }
        }
    }
    report.residuals = report
        .recovered
        .iter()
        .map(|f| verify_solution(f, m))
        .collect();
    Ok(report)
}

pub fn reconstruct_real(
    m: &PhaselessSamples,
    p: SpaceParams,
    opts: &RetrievalOptions,
) -> Result<RetrievalReport> {
    reconstruct(m, p, RetrievalMode::Real, opts)
}

pub fn reconstruct_all(
    m: &PhaselessSamples,
    p: SpaceParams,
    opts: &RetrievalOptions,
) -> Result<RetrievalReport> {
    reconstruct(m, p, RetrievalMode::Complex, opts)
}

/// `max_λ ||f(λ)| - m_λ|`.
pub fn verify_solution(f: &SIFunction, m: &PhaselessSamples) -> f64 {
    m.iter()
        .map(|(x, v)| (f.evaluate(x).norm() - v).abs())
        .fold(0.0, f64::max)
}

/// The unimodular `α` with `g ≈ α f`, if `‖coeffs(g) - α coeffs(f)‖∞ ≤ tol`.
pub fn phase_equivalent(f: &SIFunction, g: &SIFunction, tol: f64) -> Option<Complex64> {
    if f.params() != g.params() || f.is_half_step() != g.is_half_step() {
        return None;
    }
    let (cf, cg) = (f.coeffs(), g.coeffs());
    let lo = cf.offset().min(cg.offset());
    let hi = cf.end().max(cg.end());
    let k = (lo..=hi).max_by(|&a, &b| cf.get(a).norm().total_cmp(&cf.get(b).norm()))?;
    let alpha = if cf.get(k).norm() == 0.0 {
        Complex64::ONE
    } else {
        let ratio = cg.get(k) / cf.get(k);
        if ratio.norm() == 0.0 {
            return None;
        }
        ratio / ratio.norm()
    };
    let deviation = (lo..=hi)
        .map(|k| (cg.get(k) - alpha * cf.get(k)).norm())
        .fold(0.0, f64::max);
    (deviation <= tol).then_some(alpha)
}
