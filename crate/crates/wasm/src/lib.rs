//! Browser bindings for the demo page in `www/`.
//!
//! Each exported function returns a JSON string ready for plotting. The
//! builders behind them are plain Rust so they can be tested natively.

use gausspr::pipeline::{reconstruct, RetrievalOptions};
use gausspr::sampling::take_phaseless_samples;
use gausspr::sharpness::build_counterexample;
use gausspr::{
    CoeffRole, CoeffSeq, Complex64, Error, Result, RetrievalMode, SIFunction, SampleSet,
    SpaceParams,
};
use serde::Serialize;
use serde_json::json;
use wasm_bindgen::prelude::*;

const PLOT_POINTS: usize = 400;

fn grid(a: f64, b: f64) -> Vec<f64> {
    (0..PLOT_POINTS)
        .map(|i| a + (b - a) * i as f64 / (PLOT_POINTS - 1) as f64)
        .collect()
}

fn centred(p: SpaceParams, values: Vec<Complex64>) -> Result<SIFunction> {
    if values.is_empty() {
        return Err(Error::InvalidParameter("no coefficients".into()));
    }
    let offset = -((values.len() as i64 - 1) / 2);
    Ok(SIFunction::new(
        p,
        CoeffSeq::new(offset, values, CoeffRole::C),
    ))
}

fn support(f: &SIFunction) -> (f64, f64) {
    let c = f.coeffs();
    let beta = f.params().beta();
    (c.offset() as f64 * beta, c.end() as f64 * beta)
}

#[derive(Serialize)]
struct Curve {
    re: Vec<f64>,
    im: Vec<f64>,
    abs: Vec<f64>,
}

impl Curve {
    fn of(f: &SIFunction, xs: &[f64]) -> Self {
        let v: Vec<Complex64> = xs.iter().map(|&x| f.evaluate(x)).collect();
        Self {
            re: v.iter().map(|z| z.re).collect(),
            im: v.iter().map(|z| z.im).collect(),
            abs: v.iter().map(|z| z.norm()).collect(),
        }
    }
}

fn pairs(c: &CoeffSeq) -> Vec<[f64; 2]> {
    c.values().iter().map(|z| [z.re, z.im]).collect()
}

/// Samples a real function with step `step` and recovers it up to sign.
pub fn real_demo(gamma: f64, beta: f64, coeffs: &[f64], step: f64) -> Result<String> {
    let p = SpaceParams::new(gamma, beta)?;
    let f = centred(p, coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())?;
    let (lo, hi) = support(&f);
    let (a, b) = (lo - 3.0 * beta, hi + 3.0 * beta);
    let m = take_phaseless_samples(&f, &SampleSet::arithmetic(step, a, b)?);
    let report = reconstruct(&m, p, RetrievalMode::Real, &RetrievalOptions::default())?;
    let g = &report.recovered[0];
    let xs = grid(a, b);
    Ok(json!({
        "xs": xs,
        "truth": Curve::of(&f, &xs).re,
        "recovered": Curve::of(g, &xs).re,
        "samples": m.iter().collect::<Vec<_>>(),
        "coeffs": coeffs,
        "recovered_coeffs": g.coeffs().values().iter().map(|z| z.re).collect::<Vec<_>>(),
        "residual": report.residuals[0],
        "condition": report.conditioning.condition(),
        "critical_density": p.critical_density(),
    })
    .to_string())
}

/// All functions sharing `|f|` with the complex function `f`, given as
/// interleaved `re, im` coefficient pairs.
pub fn family_demo(
    gamma: f64,
    beta: f64,
    interleaved: &[f64],
    step: f64,
    max_solutions: usize,
) -> Result<String> {
    if !interleaved.len().is_multiple_of(2) {
        return Err(Error::InvalidParameter(
            "coefficients must come in re, im pairs".into(),
        ));
    }
    let p = SpaceParams::new(gamma, beta)?;
    let f = centred(
        p,
        interleaved
            .chunks(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect(),
    )?;
    let (lo, hi) = support(&f);
    let (a, b) = (lo - 3.0 * beta, hi + 3.0 * beta);
    let m = take_phaseless_samples(&f, &SampleSet::arithmetic(step, a, b)?);
    let opts = RetrievalOptions {
        max_solutions,
        ..Default::default()
    };
    let report = reconstruct(&m, p, RetrievalMode::Complex, &opts)?;
    let xs = grid(a, b);
    let members: Vec<_> = report
        .recovered
        .iter()
        .zip(&report.residuals)
        .map(|(g, r)| json!({ "coeffs": pairs(g.coeffs()), "curve": Curve::of(g, &xs), "residual": r }))
        .collect();
    let zeros = report.zeros.map(|z| {
        z.zeros.iter().map(|w| json!({ "re": w.z.re, "im": w.z.im, "mult": w.mult, "region": w.region.as_str() })).collect::<Vec<_>>()
    });
    Ok(json!({
        "xs": xs,
        "truth": Curve::of(&f, &xs),
        "members": members,
        "family_size": u64::try_from(report.family_size).unwrap_or(u64::MAX),
        "zeros": zeros.unwrap_or_default(),
    })
    .to_string())
}

/// Two functions with equal magnitudes on the grid `step Z ∩ [-half_width, half_width]`.
pub fn counterexample_demo(gamma: f64, beta: f64, step: f64, half_width: f64) -> Result<String> {
    let p = SpaceParams::new(gamma, beta)?;
    let window = (-half_width, half_width);
    let guard = 4.0 * beta;
    let s = SampleSet::arithmetic(step, window.0, window.1)?;
    let ce = build_counterexample(&s, p, window, guard)?;
    let xs = grid(window.0 + guard, window.1 - guard);
    Ok(json!({
        "xs": xs,
        "F": Curve::of(&ce.first, &xs).re,
        "G": Curve::of(&ce.second, &xs).re,
        "evidence": ce.evidence,
        "mismatch": ce.mismatch,
        "gram_determinant": ce.gram_determinant,
        "density": 1.0 / step,
        "critical_density": p.critical_density(),
    })
    .to_string())
}

fn to_js(r: Result<String>) -> std::result::Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen(js_name = realDemo)]
pub fn real_demo_js(
    gamma: f64,
    beta: f64,
    coeffs: &[f64],
    step: f64,
) -> std::result::Result<String, JsError> {
    to_js(real_demo(gamma, beta, coeffs, step))
}

#[wasm_bindgen(js_name = familyDemo)]
pub fn family_demo_js(
    gamma: f64,
    beta: f64,
    interleaved: &[f64],
    step: f64,
    max_solutions: usize,
) -> std::result::Result<String, JsError> {
    to_js(family_demo(gamma, beta, interleaved, step, max_solutions))
}

#[wasm_bindgen(js_name = counterexampleDemo)]
pub fn counterexample_demo_js(
    gamma: f64,
    beta: f64,
    step: f64,
    half_width: f64,
) -> std::result::Result<String, JsError> {
    to_js(counterexample_demo(gamma, beta, step, half_width))
}
