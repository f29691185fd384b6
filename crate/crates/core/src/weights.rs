//! Builtin weight and parameter families, weight sampling, and the CSV
//! ingestion format.
//!
//! Weights are sampled on the uniform grid `t_l = exp(2 pi i l / M)`. The
//! CSV format carries `(angle, value)` rows with angles in turns of `2 pi`,
//! so row `l` of an `M`-row file must have angle `l / M`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::schur::SchurParams;

/// Nonnegative weight families on the circle.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightFamily {
    /// `w = 1` (Lebesgue measure).
    Constant,
    /// `w(angle) = 1 + sum_k c_k cos(k angle)`.
    CosinePolynomial(Vec<f64>),
    /// `w(t) = |1 - t|^(2p)`, a boundary zero of order `2p` at `t = 1`.
    BoundaryZero { p: f64 },
}

impl WeightFamily {
    /// Parses `constant`, `cosine:c1[,c2,..]`, `zero:p`, or the alias
    /// `zero-squared` for `zero:1`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("constant") {
            return Ok(Self::Constant);
        }
        if text.eq_ignore_ascii_case("zero-squared") {
            return Ok(Self::BoundaryZero { p: 1.0 });
        }
        if let Some(rest) = text.strip_prefix("zero:") {
            let p: f64 = rest
                .trim()
                .parse()
                .map_err(|_| Error::InvalidWeight(format!("bad exponent in '{text}'")))?;
            if p <= 0.0 {
                return Err(Error::InvalidWeight("exponent must be positive".into()));
            }
            return Ok(Self::BoundaryZero { p });
        }
        if let Some(rest) = text.strip_prefix("cosine:") {
            let coeffs: Result<Vec<f64>> = rest
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidWeight(format!("bad coefficient '{s}'")))
                })
                .collect();
            return Ok(Self::CosinePolynomial(coeffs?));
        }
        Err(Error::InvalidWeight(format!(
            "unknown weight family '{text}'; expected constant, cosine:c1[,..], zero:p, \
             or zero-squared"
        )))
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Constant => "constant".to_string(),
            Self::CosinePolynomial(c) => format!("cosine-polynomial {c:?}"),
            Self::BoundaryZero { p } => format!("|1 - t|^{}", 2.0 * p),
        }
    }

    /// Samples on the uniform `grid`-point angle grid.
    pub fn sample(&self, grid: usize) -> Vec<f64> {
        (0..grid)
            .map(|l| {
                let angle = 2.0 * std::f64::consts::PI * l as f64 / grid as f64;
                match self {
                    Self::Constant => 1.0,
                    Self::CosinePolynomial(coeffs) => {
                        1.0 + coeffs
                            .iter()
                            .enumerate()
                            .map(|(k, c)| c * ((k + 1) as f64 * angle).cos())
                            .sum::<f64>()
                    }
                    Self::BoundaryZero { p } => (2.0 - 2.0 * angle.cos()).max(0.0).powf(*p),
                }
            })
            .collect()
    }
}

/// Synthetic parameter families for exercising the matrix criteria.
#[derive(Clone, Debug, PartialEq)]
pub enum GammaFamily {
    /// `gamma_j = q^(j+1)`: successive powers with ratio `q`.
    Geometric { q: f64, len: usize },
    /// A single nonzero entry.
    SingleSpike { index: usize, value: f64 },
    /// `gamma_j = c / (j + 1)`.
    Harmonic { c: f64, len: usize },
}

impl GammaFamily {
    /// Parses `geometric:q[,len]`, `spike:index,value`, `harmonic:c[,len]`.
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidWeight(format!("{msg} in gamma family '{text}'"));
        let (name, args) = text
            .trim()
            .split_once(':')
            .ok_or_else(|| bad("missing arguments"))?;
        let parts: Vec<&str> = args.split(',').map(str::trim).collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| bad("bad number"));
        match name.to_ascii_lowercase().as_str() {
            "geometric" => {
                let q = num(parts[0])?;
                let len = if parts.len() > 1 {
                    parts[1].parse().map_err(|_| bad("bad length"))?
                } else {
                    20
                };
                Ok(Self::Geometric { q, len })
            }
            "spike" => {
                if parts.len() != 2 {
                    return Err(bad("expected spike:index,value"));
                }
                Ok(Self::SingleSpike {
                    index: parts[0].parse().map_err(|_| bad("bad index"))?,
                    value: num(parts[1])?,
                })
            }
            "harmonic" => {
                let c = num(parts[0])?;
                let len = if parts.len() > 1 {
                    parts[1].parse().map_err(|_| bad("bad length"))?
                } else {
                    32
                };
                Ok(Self::Harmonic { c, len })
            }
            other => Err(Error::InvalidWeight(format!(
                "unknown gamma family '{other}'"
            ))),
        }
    }

    pub fn synthesize(&self) -> Result<SchurParams> {
        let entries: Vec<f64> = match *self {
            Self::Geometric { q, len } => (0..len).map(|j| q.powi(j as i32 + 1)).collect(),
            Self::SingleSpike { index, value } => {
                let mut v = vec![0.0; index + 1];
                v[index] = value;
                v
            }
            Self::Harmonic { c, len } => (0..len).map(|j| c / (j as f64 + 1.0)).collect(),
        };
        SchurParams::regular_real(&entries)
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Geometric { q, len } => format!("geometric q={q} len={len}"),
            Self::SingleSpike { index, value } => format!("spike gamma_{index}={value}"),
            Self::Harmonic { c, len } => format!("harmonic c={c} len={len}"),
        }
    }
}

/// Parses weight CSV: rows `angle,value`, angles in turns over a uniform
/// grid in row order. Lines starting with `#` and an optional `angle,value`
/// header are skipped.
pub fn parse_weight_csv(text: &str) -> Result<Vec<f64>> {
    let mut rows: Vec<(f64, f64)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if lineno == 0 && line.to_ascii_lowercase().starts_with("angle") {
            continue;
        }
        let (a, v) = line.split_once(',').ok_or_else(|| {
            Error::InvalidWeight(format!("line {}: expected angle,value", lineno + 1))
        })?;
        let angle: f64 = a
            .trim()
            .parse()
            .map_err(|_| Error::InvalidWeight(format!("line {}: bad angle '{a}'", lineno + 1)))?;
        let value: f64 = v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidWeight(format!("line {}: bad value '{v}'", lineno + 1)))?;
        rows.push((angle, value));
    }
    if rows.is_empty() {
        return Err(Error::InvalidWeight("no samples in CSV".into()));
    }
    let grid = rows.len();
    for (l, &(angle, _)) in rows.iter().enumerate() {
        let expect = l as f64 / grid as f64;
        if (angle - expect).abs() > 0.5 / grid as f64 {
            return Err(Error::InvalidWeight(format!(
                "row {} has angle {angle}, expected {expect} on a uniform {grid}-point grid",
                l + 1
            )));
        }
    }
    Ok(rows.into_iter().map(|(_, v)| v).collect())
}

/// Renders samples in the same CSV format.
pub fn render_weight_csv(samples: &[f64]) -> String {
    let mut out = String::from("angle,value\n");
    let grid = samples.len();
    for (l, v) in samples.iter().enumerate() {
        out.push_str(&format!("{},{}\n", l as f64 / grid as f64, v));
    }
    out
}

/// Complex-valued parse helper shared by the CLI ingestion paths: accepts a
/// JSON number or an `[re, im]` pair.
pub fn complex_from_json(value: &serde_json::Value) -> Result<Complex64> {
    match value {
        serde_json::Value::Number(x) => Ok(Complex64::new(
            x.as_f64()
                .ok_or_else(|| Error::Inconsistent("non-finite number".into()))?,
            0.0,
        )),
        serde_json::Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::Inconsistent("bad real part".into()))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::Inconsistent("bad imaginary part".into()))?;
            Ok(Complex64::new(re, im))
        }
        other => Err(Error::Inconsistent(format!(
            "expected number or [re, im] pair, got {other}"
        ))),
    }
}
