//! JSON and CSV formats.
//!
//! Complex numbers are written as `[re, im]` pairs. Floats use the shortest
//! decimal form that round-trips exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::periodic::{LaurentSeries, Region, StripZero, ZeroSet};
use crate::sampling::{PhaselessSamples, SampleSet};
use crate::space::{CoeffRole, CoeffSeq, SIFunction, SpaceParams};

fn to_pairs(v: &[Complex64]) -> Vec<[f64; 2]> {
    v.iter().map(|c| [c.re, c.im]).collect()
}

fn from_pairs(v: &[[f64; 2]]) -> Vec<Complex64> {
    v.iter().map(|&[re, im]| Complex64::new(re, im)).collect()
}

fn default_role() -> CoeffRole {
    CoeffRole::C
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SIFunctionJson {
    pub gamma: f64,
    pub beta: f64,
    pub offset: i64,
    pub coeffs: Vec<[f64; 2]>,
    #[serde(default)]
    pub half_step: bool,
    #[serde(default = "default_role")]
    pub role: CoeffRole,
}

impl TryFrom<SIFunctionJson> for SIFunction {
    type Error = Error;

    fn try_from(j: SIFunctionJson) -> Result<Self> {
        let params = SpaceParams::new(j.gamma, j.beta)?;
        if j.coeffs.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parse("non-finite coefficient".into()));
        }
        let coeffs = CoeffSeq::new(j.offset, from_pairs(&j.coeffs), j.role);
        Ok(if j.half_step {
            SIFunction::half_step(params, coeffs)
        } else {
            SIFunction::new(params, coeffs)
        })
    }
}

impl From<SIFunction> for SIFunctionJson {
    fn from(f: SIFunction) -> Self {
        let p = f.params();
        Self {
            gamma: p.gamma(),
            beta: p.beta(),
            offset: f.coeffs().offset(),
            coeffs: to_pairs(f.coeffs().values()),
            half_step: f.is_half_step(),
            role: f.coeffs().role(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LaurentJson {
    pub offset: i64,
    pub coeffs: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_tag: Option<f64>,
}

impl TryFrom<LaurentJson> for LaurentSeries {
    type Error = Error;

    fn try_from(j: LaurentJson) -> Result<Self> {
        if j.coeffs.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parse("non-finite coefficient".into()));
        }
        let l = LaurentSeries::new(j.offset, from_pairs(&j.coeffs));
        Ok(match j.gamma_tag {
            Some(g) => l.with_gamma_tag(g),
            None => l,
        })
    }
}

impl From<LaurentSeries> for LaurentJson {
    fn from(l: LaurentSeries) -> Self {
        Self {
            offset: l.offset(),
            coeffs: to_pairs(l.coeffs()),
            gamma_tag: l.gamma_tag(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroJson {
    pub re: f64,
    pub im: f64,
    pub mult: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroSetJson {
    pub zeros: Vec<ZeroJson>,
    pub m0: u32,
    pub shift: i64,
}

impl TryFrom<ZeroSetJson> for ZeroSet {
    type Error = Error;

    fn try_from(j: ZeroSetJson) -> Result<Self> {
        let mut zeros = Vec::with_capacity(j.zeros.len());
        for z in j.zeros {
            if !(z.re.is_finite() && z.im.is_finite()) || z.mult == 0 {
                return Err(Error::Parse(format!(
                    "bad zero {} + {}i (multiplicity {})",
                    z.re, z.im, z.mult
                )));
            }
            let zero = StripZero::exact(Complex64::new(z.re, z.im), z.mult);
            if zero.is_origin() {
                return Err(Error::ZeroAtOrigin);
            }
            if let Some(region) = z.region.filter(|r| *r != zero.region) {
                return Err(Error::Parse(format!(
                    "zero {} + {}i lies in {}, not {}",
                    z.re,
                    z.im,
                    zero.region.as_str(),
                    region.as_str()
                )));
            }
            zeros.push(zero);
        }
        Ok(ZeroSet {
            zeros,
            m0: j.m0,
            laurent_shift: j.shift,
        })
    }
}

impl From<ZeroSet> for ZeroSetJson {
    fn from(z: ZeroSet) -> Self {
        Self {
            zeros: z
                .zeros
                .iter()
                .map(|w| ZeroJson {
                    re: w.z.re,
                    im: w.z.im,
                    mult: w.mult,
                    region: Some(w.region),
                })
                .collect(),
            m0: z.m0,
            shift: z.laurent_shift,
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn write_json<T: Serialize>(path: impl AsRef<Path>, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

// Data lines of a CSV file: blank lines, `#` comments and a non-numeric
// header are skipped.
fn csv_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    let mut first = true;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let header_allowed = std::mem::replace(&mut first, false);
        let fields: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        match fields {
            Ok(v) => rows.push(v),
            Err(_) if header_allowed && line.chars().any(|c| c.is_ascii_alphabetic()) => continue,
            Err(e) => return Err(Error::Parse(format!("line {}: {e}", i + 1))),
        }
    }
    Ok(rows)
}

#[derive(Serialize, Deserialize)]
struct PointsJson {
    points: Vec<f64>,
}

/// `{"points": [...]}` or one location per line.
pub fn parse_sample_set(text: &str) -> Result<SampleSet> {
    let points = if text.trim_start().starts_with('{') {
        serde_json::from_str::<PointsJson>(text)
            .map_err(|e| Error::Parse(e.to_string()))?
            .points
    } else {
        let rows = csv_rows(text)?;
        if let Some(row) = rows.iter().find(|r| r.len() != 1) {
            return Err(Error::Parse(format!(
                "expected one value per line, got {}",
                row.len()
            )));
        }
        rows.into_iter().map(|r| r[0]).collect()
    };
    SampleSet::new(points)
}

pub fn sample_set_json(s: &SampleSet) -> String {
    serde_json::to_string(&PointsJson {
        points: s.points().to_vec(),
    })
    .expect("plain floats serialize")
}

/// Rows `lambda,magnitude`.
pub fn parse_samples_csv(text: &str) -> Result<PhaselessSamples> {
    let rows = csv_rows(text)?;
    if let Some(row) = rows.iter().find(|r| r.len() != 2) {
        return Err(Error::Parse(format!(
            "expected lambda,magnitude, got {} fields",
            row.len()
        )));
    }
    PhaselessSamples::new(
        rows.iter().map(|r| r[0]).collect(),
        rows.iter().map(|r| r[1]).collect(),
    )
}

pub fn samples_csv(m: &PhaselessSamples) -> String {
    let mut out = String::from("lambda,magnitude\n");
    for (x, v) in m.iter() {
        writeln!(out, "{x},{v}").unwrap();
    }
    out
}

/// Rows `re,im,mult,region` followed by the origin as a row when `m0 > 0`.
pub fn zeros_csv(z: &ZeroSet) -> String {
    let mut out = String::from("re,im,mult,region\n");
    for w in &z.zeros {
        writeln!(
            out,
            "{},{},{},{}",
            w.z.re,
            w.z.im,
            w.mult,
            w.region.as_str()
        )
        .unwrap();
    }
    if z.m0 > 0 {
        writeln!(out, "0,0,{},origin", z.m0).unwrap();
    }
    out
}

/// Table with a header row; each row is `x` followed by the column values.
pub fn table_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.iter().map(f64::to_string).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
