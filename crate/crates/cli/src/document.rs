//! Input documents: one JSON object describing `(σ, Δ, ξ₀)` and named
//! monomial filtrations. Rationals are `"p/q"` strings or JSON integers;
//! floats are rejected so nothing inexact gets in.
//!
//! ```json
//! {
//!   "rank": 2,
//!   "rays": [[1, 0], [0, 1]],
//!   "coefficients": ["0", "0"],
//!   "reeb": ["1", "1"],
//!   "filtrations": { "fex": { "covectors": [["2", "1"], ["1", "2"]] } },
//!   "options": { "budget": 1000000, "tolerance": "1/1000000000", "levels": "1..50" }
//! }
//! ```

use std::collections::BTreeMap;
use std::fmt;

use conestab_core::exactgeom::parse_rational;
use conestab_core::{ConeSingularity, MonomialFiltration, RationalVector, Q};
use num::{One, Signed};
use serde_json::Value;

use crate::CliError;

/// A problem anchored at a dotted field path such as `filtrations.fex.covectors[1][0]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

fn at(field: impl Into<String>, message: impl Into<String>) -> CliError {
    CliError::Field(Diagnostic {
        field: field.into(),
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawFiltration {
    pub covectors: Vec<RationalVector>,
    pub scale: Q,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Options {
    pub budget: Option<usize>,
    pub tolerance: Option<Q>,
    pub levels: Option<Vec<u64>>,
}

/// Syntactically valid document; nothing geometric has been checked yet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawDocument {
    pub rank: usize,
    pub rays: Vec<RationalVector>,
    pub coefficients: Vec<Q>,
    pub reeb: RationalVector,
    pub filtrations: BTreeMap<String, RawFiltration>,
    pub options: Options,
}

/// Geometrically valid document.
#[derive(Clone, Debug)]
pub struct Document {
    pub singularity: ConeSingularity,
    pub xi0: RationalVector,
    pub filtrations: BTreeMap<String, MonomialFiltration>,
    pub options: Options,
}

pub fn parse_document(text: &str) -> Result<RawDocument, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = v.as_object().ok_or_else(|| at("$", "expected an object"))?;
    for key in obj.keys() {
        if ![
            "rank",
            "rays",
            "coefficients",
            "reeb",
            "filtrations",
            "options",
        ]
        .contains(&key.as_str())
        {
            return Err(at(key.clone(), "unknown field"));
        }
    }
    let field = |k: &str| obj.get(k).ok_or_else(|| at(k, "missing field"));
    let rank = field("rank")?
        .as_u64()
        .filter(|&r| r >= 1)
        .ok_or_else(|| at("rank", "expected a positive integer"))? as usize;
    let rays = array(field("rays")?, "rays")?
        .iter()
        .enumerate()
        .map(|(i, r)| integer_vector(r, &format!("rays[{i}]"), rank))
        .collect::<Result<Vec<_>, _>>()?;
    let coefficients = array(field("coefficients")?, "coefficients")?
        .iter()
        .enumerate()
        .map(|(i, a)| rational(a, &format!("coefficients[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    if coefficients.len() != rays.len() {
        return Err(at(
            "coefficients",
            format!(
                "{} coefficients for {} rays",
                coefficients.len(),
                rays.len()
            ),
        ));
    }
    let reeb = rational_vector(field("reeb")?, "reeb", rank)?;
    let mut filtrations = BTreeMap::new();
    if let Some(fs) = obj.get("filtrations") {
        let fs = fs
            .as_object()
            .ok_or_else(|| at("filtrations", "expected an object"))?;
        for (name, f) in fs {
            let path = format!("filtrations.{name}");
            filtrations.insert(name.clone(), raw_filtration(f, &path, rank)?);
        }
    }
    let options = match obj.get("options") {
        Some(o) => parse_options(o)?,
        None => Options::default(),
    };
    Ok(RawDocument {
        rank,
        rays,
        coefficients,
        reeb,
        filtrations,
        options,
    })
}

fn raw_filtration(v: &Value, path: &str, rank: usize) -> Result<RawFiltration, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| at(path, "expected an object"))?;
    for key in obj.keys() {
        if key != "covectors" && key != "scale" {
            return Err(at(format!("{path}.{key}"), "unknown field"));
        }
    }
    let cpath = format!("{path}.covectors");
    let covs = obj
        .get("covectors")
        .ok_or_else(|| at(&cpath, "missing field"))?;
    let covectors = array(covs, &cpath)?
        .iter()
        .enumerate()
        .map(|(i, z)| rational_vector(z, &format!("{cpath}[{i}]"), rank))
        .collect::<Result<Vec<_>, _>>()?;
    if covectors.is_empty() {
        return Err(at(cpath, "at least one covector is required"));
    }
    let scale = match obj.get("scale") {
        Some(s) => rational(s, &format!("{path}.scale"))?,
        None => Q::one(),
    };
    if !scale.is_positive() {
        return Err(at(format!("{path}.scale"), "scale must be positive"));
    }
    Ok(RawFiltration { covectors, scale })
}

fn parse_options(v: &Value) -> Result<Options, CliError> {
    let obj = v
        .as_object()
        .ok_or_else(|| at("options", "expected an object"))?;
    let mut out = Options::default();
    for (key, val) in obj {
        let path = format!("options.{key}");
        match key.as_str() {
            "budget" => {
                let b = val
                    .as_u64()
                    .filter(|&b| b >= 1)
                    .ok_or_else(|| at(&path, "expected a positive integer"))?;
                out.budget = Some(usize::try_from(b).map_err(|_| at(&path, "budget too large"))?);
            }
            "tolerance" => {
                let t = rational(val, &path)?;
                if !t.is_positive() {
                    return Err(at(path, "tolerance must be positive"));
                }
                out.tolerance = Some(t);
            }
            "levels" => {
                out.levels = Some(match val {
                    Value::String(s) => parse_levels(s).map_err(|m| at(&path, m))?,
                    Value::Array(items) => items
                        .iter()
                        .enumerate()
                        .map(|(i, x)| {
                            x.as_u64().filter(|&m| m >= 1).ok_or_else(|| {
                                at(format!("{path}[{i}]"), "expected a positive integer")
                            })
                        })
                        .collect::<Result<_, _>>()?,
                    _ => return Err(at(path, "expected a level list such as \"1..50\"")),
                });
            }
            _ => return Err(at(path, "unknown option")),
        }
    }
    Ok(out)
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| at(path, "expected an array"))
}

fn rational(v: &Value, path: &str) -> Result<Q, CliError> {
    match v {
        Value::String(s) => {
            parse_rational(s).ok_or_else(|| at(path, format!("cannot parse {s:?} as p/q")))
        }
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Q::from_integer(i.into())),
            None => Err(at(
                path,
                "non-integer numbers must be written as \"p/q\" strings",
            )),
        },
        _ => Err(at(path, "expected a rational as a \"p/q\" string")),
    }
}

fn rational_vector(v: &Value, path: &str, rank: usize) -> Result<RationalVector, CliError> {
    let items = array(v, path)?;
    if items.len() != rank {
        return Err(at(
            path,
            format!("expected {rank} entries, got {}", items.len()),
        ));
    }
    Ok(RationalVector::new(
        items
            .iter()
            .enumerate()
            .map(|(i, x)| rational(x, &format!("{path}[{i}]")))
            .collect::<Result<_, _>>()?,
    ))
}

fn integer_vector(v: &Value, path: &str, rank: usize) -> Result<RationalVector, CliError> {
    let r = rational_vector(v, path, rank)?;
    if !r.is_integral() {
        return Err(at(path, "ray generators must be integer vectors"));
    }
    if r.is_zero() {
        return Err(at(path, "ray generator is zero"));
    }
    Ok(r)
}

/// Level lists: comma-separated entries, each `m` or an inclusive range `a..b`.
pub fn parse_levels(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u64 = a
                .trim()
                .parse()
                .map_err(|_| format!("bad range start in {part:?}"))?;
            let b: u64 = b
                .trim()
                .parse()
                .map_err(|_| format!("bad range end in {part:?}"))?;
            if a == 0 || a > b {
                return Err(format!("empty or zero-based range {part:?}"));
            }
            if b - a >= 1_000_000 {
                return Err(format!("range {part:?} is too long"));
            }
            out.extend(a..=b);
        } else {
            let m: u64 = part.parse().map_err(|_| format!("bad level {part:?}"))?;
            if m == 0 {
                return Err("levels start at 1".into());
            }
            out.push(m);
        }
        if out.len() > 1_000_000 {
            return Err("more than 10^6 levels".into());
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

impl RawDocument {
    pub fn singularity(&self) -> Result<ConeSingularity, CliError> {
        ConeSingularity::from_rays(&self.rays, &self.coefficients)
            .map_err(|e| at("rays", e.to_string()))
    }

    /// Builds `F` from its covectors, then rescales. Non-primary but
    /// nonnegative transforms (divisorial filtrations) are accepted here.
    pub fn filtration(
        &self,
        s: &ConeSingularity,
        name: &str,
    ) -> Result<MonomialFiltration, CliError> {
        let raw = self
            .filtrations
            .get(name)
            .ok_or_else(|| CliError::UnknownFiltration(name.to_string()))?;
        let path = format!("filtrations.{name}");
        MonomialFiltration::nonnegative(s, raw.covectors.clone())
            .and_then(|f| f.rescale(&raw.scale))
            .map_err(|e| at(path, e.to_string()))
    }

    pub fn build(&self) -> Result<Document, CliError> {
        let singularity = self.singularity()?;
        if !singularity.reeb_contains(&self.reeb) {
            return Err(at(
                "reeb",
                format!("{} is not in the open Reeb cone", self.reeb),
            ));
        }
        let filtrations = self
            .filtrations
            .keys()
            .map(|name| Ok((name.clone(), self.filtration(&singularity, name)?)))
            .collect::<Result<_, CliError>>()?;
        Ok(Document {
            singularity,
            xi0: self.reeb.clone(),
            filtrations,
            options: self.options.clone(),
        })
    }
}

impl Document {
    pub fn filtration(&self, name: &str) -> Result<&MonomialFiltration, CliError> {
        self.filtrations
            .get(name)
            .ok_or_else(|| CliError::UnknownFiltration(name.to_string()))
    }
}
