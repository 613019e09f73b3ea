use std::fs;
use std::path::Path;

use gausspr::io::{
    parse_sample_set, parse_samples_csv, read_json, samples_csv, table_csv, zeros_csv,
};
use gausspr::periodic::strip_zeros;
use gausspr::pipeline;
use gausspr::sampling::{take_noisy_samples, take_phaseless_samples};
use gausspr::sharpness::build_counterexample;
use gausspr::space::{autocorrelation, decay_weights, rescale_to_unit_step};
use gausspr::{
    CoeffRole, CoeffSeq, Complex64, Error, LaurentSeries, Result, RetrievalMode, RetrievalOptions,
    SIFunction, SampleSet, SpaceParams, ZeroOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::{
    CounterexampleArgs, Mode, ReconstructArgs, SampleArgs, Series, SynthesizeArgs, ZerosArgs,
};

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("in-memory values serialize") + "\n"
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct SynthConfig {
    gamma: Option<f64>,
    beta: Option<f64>,
    offset: Option<i64>,
    coeffs: Option<Vec<[f64; 2]>>,
    seed: Option<u64>,
    support: Option<usize>,
    #[serde(default)]
    complex: bool,
}

pub fn synthesize(a: SynthesizeArgs) -> Result<()> {
    let cfg: SynthConfig = match &a.config {
        Some(path) => read_json(path)?,
        None => SynthConfig::default(),
    };
    let gamma = a
        .gamma
        .or(cfg.gamma)
        .ok_or_else(|| Error::InvalidParameter("--gamma is required".into()))?;
    let params = SpaceParams::new(gamma, a.beta.or(cfg.beta).unwrap_or(1.0))?;
    let values: Vec<Complex64> = match (&cfg.coeffs, a.seed.or(cfg.seed)) {
        (Some(c), None) => c.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
        (None, Some(seed)) => {
            let support = a.support.or(cfg.support).unwrap_or(5);
            let complex = a.complex || cfg.complex;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..support)
                .map(|_| {
                    let re = rng.random_range(-1.0..1.0);
                    let im = if complex {
                        rng.random_range(-1.0..1.0)
                    } else {
                        0.0
                    };
                    Complex64::new(re, im)
                })
                .collect()
        }
        (Some(_), Some(_)) => {
            return Err(Error::InvalidParameter(
                "give either coeffs or a seed, not both".into(),
            ))
        }
        (None, None) => {
            return Err(Error::InvalidParameter(
                "give coeffs in --config or a --seed".into(),
            ))
        }
    };
    if values.is_empty() {
        return Err(Error::InvalidParameter("empty coefficient list".into()));
    }
    let offset = a
        .offset
        .or(cfg.offset)
        .unwrap_or(-((values.len() as i64 - 1) / 2));
    let f = SIFunction::new(params, CoeffSeq::new(offset, values, CoeffRole::C));
    emit(a.out.as_deref(), &to_json(&f))
}

pub fn sample(a: SampleArgs) -> Result<()> {
    let f: SIFunction = read_json(&a.function)?;
    let set = match (&a.points, a.step, &a.window) {
        (Some(path), _, _) => parse_sample_set(&fs::read_to_string(path)?)?,
        (None, Some(step), Some(w)) => SampleSet::arithmetic(step, w[0], w[1])?,
        _ => {
            return Err(Error::InvalidParameter(
                "give --points or --step with --window".into(),
            ))
        }
    };
    if set.is_empty() {
        return Err(Error::InvalidParameter("sample set is empty".into()));
    }
    let m = match a.noise {
        Some(sigma) => take_noisy_samples(&f, &set, sigma, &mut ChaCha8Rng::seed_from_u64(a.seed))?,
        None => take_phaseless_samples(&f, &set),
    };
    emit(a.out.as_deref(), &samples_csv(&m))
}

pub fn reconstruct(a: ReconstructArgs) -> Result<()> {
    let m = parse_samples_csv(&fs::read_to_string(&a.samples)?)?;
    let params = SpaceParams::new(a.gamma, a.beta)?;
    let mode = match a.mode {
        Mode::Real => RetrievalMode::Real,
        Mode::All => RetrievalMode::Complex,
        Mode::EvenReal => RetrievalMode::EvenReal,
    };
    let mut opts = RetrievalOptions {
        max_solutions: a.max_solutions,
        ..Default::default()
    };
    if let Some(w) = &a.window {
        opts.coefficient_window = Some((w[0], w[1]));
    }
    if let Some(tol) = a.tol_cluster {
        opts.zero_opts = ZeroOptions::with_cluster_tol(tol);
    }
    let report = pipeline::reconstruct(&m, params, mode, &opts)?;
    if let Some(path) = &a.plot {
        let mut header = vec!["lambda".to_string(), "measured".to_string()];
        header.extend((0..report.recovered.len()).map(|i| format!("f{i}")));
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        let rows = m.iter().map(|(x, v)| {
            let mut row = vec![x, v];
            row.extend(report.recovered.iter().map(|f| f.evaluate(x).norm()));
            row
        });
        fs::write(path, table_csv(&header, rows))?;
    }
    emit(a.out.as_deref(), &to_json(&report))
}

pub fn counterexample(a: CounterexampleArgs) -> Result<()> {
    let params = SpaceParams::new(a.gamma, a.beta)?;
    let window = (a.window[0], a.window[1]);
    let guard = a.guard.unwrap_or(4.0 * a.beta);
    let set = SampleSet::arithmetic(a.step, window.0, window.1)?;
    let ce = match build_counterexample(&set, params, window, guard) {
        Ok(ce) => ce,
        Err(Error::NoNullSpace { ratio }) => {
            eprintln!(
                "no counterexample: sample density {:.4} exceeds what a vanishing pair allows \
                 (sign retrieval is unique above the critical density 2/beta = {:.4}); \
                 smallest singular value ratio {ratio:.3e}",
                1.0 / a.step,
                params.critical_density()
            );
            return Err(Error::NoNullSpace { ratio });
        }
        Err(e) => return Err(e),
    };
    let evidence = table_csv(
        &["lambda", "abs_F", "abs_G"],
        ce.evidence.iter().map(|&(x, u, v)| vec![x, u, v]),
    );
    match &a.out {
        Some(dir) => {
            fs::create_dir_all(dir)?;
            fs::write(dir.join("F.json"), to_json(&ce.first))?;
            fs::write(dir.join("G.json"), to_json(&ce.second))?;
            fs::write(dir.join("evidence.csv"), &evidence)?;
        }
        None => print!("{evidence}"),
    }
    eprintln!(
        "density {:.4} < {:.4}: gram determinant {:.6e}, max magnitude mismatch {:.3e} (scale {:.3e})",
        1.0 / a.step,
        params.critical_density(),
        ce.gram_determinant,
        ce.mismatch,
        ce.scale
    );
    Ok(())
}

pub fn zeros(a: ZerosArgs) -> Result<()> {
    let series = match (&a.function, &a.laurent) {
        (Some(path), _) => {
            let f: SIFunction = read_json(path)?;
            let unit = rescale_to_unit_step(&f)?;
            let d = decay_weights(unit.coeffs(), unit.params().gamma())?;
            match a.series {
                Series::D => LaurentSeries::from_coeff_seq(&d),
                Series::R => LaurentSeries::from_coeff_seq(&autocorrelation(&d)),
            }
        }
        (None, Some(path)) => read_json(path)?,
        (None, None) => {
            return Err(Error::InvalidParameter(
                "give --function or --laurent".into(),
            ))
        }
    };
    let opts = a
        .tol_cluster
        .map(ZeroOptions::with_cluster_tol)
        .unwrap_or_default();
    let zs = strip_zeros(&series, &opts)?;
    if let Some(path) = &a.plot {
        fs::write(path, zeros_csv(&zs))?;
    }
    emit(a.out.as_deref(), &to_json(&zs))
}
