//! The verbs. Each returns the text to print on stdout; the binary maps
//! errors to exit codes.

use std::fmt::Write as _;

use conestab_core::estimators::{okounkov_export, sweep, sweep_approx};
use conestab_core::exactgeom::{to_decimal, DEFAULT_BUDGET};
use conestab_core::invariants::{default_tolerance, Polarization, ReportEntry};
use conestab_core::optimize::minimize_nvol;
use conestab_core::{MonomialFiltration, RationalVector, Q};
use num::{Signed, Zero};
use serde_json::json;

use crate::document::{parse_document, Document, RawDocument};
use crate::{CliError, BUDGET_ENV};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

pub fn read_document(path: &str) -> Result<RawDocument, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    parse_document(&text)
}

/// `p/q (d.dddddddddddd)`.
pub fn fmt_q(x: &Q) -> String {
    format!("{x} ({})", to_decimal(x, 12))
}

pub fn fmt_vec(v: &RationalVector) -> String {
    let dec: Vec<String> = v.coords().iter().map(|x| to_decimal(x, 12)).collect();
    format!("{v} ({})", dec.join(", "))
}

fn json_q(x: &Q) -> serde_json::Value {
    json!({ "value": x.to_string(), "decimal": to_decimal(x, 12) })
}

fn json_vec(v: &RationalVector) -> serde_json::Value {
    json!(v)
}

/// Enumeration cap: `CONESTAB_BUDGET` beats the document, which beats the default.
pub fn resolve_budget(doc: &Document) -> Result<usize, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| {
                CliError::Usage(format!(
                    "{BUDGET_ENV} must be a positive integer, got {s:?}"
                ))
            }),
        Err(_) => Ok(doc.options.budget.unwrap_or(DEFAULT_BUDGET)),
    }
}

fn resolve_tolerance(doc: &Document, flag: Option<&Q>) -> Q {
    flag.cloned()
        .or_else(|| doc.options.tolerance.clone())
        .unwrap_or_else(default_tolerance)
}

/// Diagnostics for every stage, and whether all of them passed.
pub fn validate(raw: &RawDocument) -> (String, bool) {
    let mut out = String::new();
    let s = match raw.singularity() {
        Ok(s) => s,
        Err(e) => {
            let _ = writeln!(out, "{e}");
            return (out, false);
        }
    };
    let mut ok = true;
    let u = s.log_discrepancy_covector();
    let _ = writeln!(out, "Q-Gorenstein: u = {u}");
    let _ = writeln!(out, "klt: yes");
    if s.reeb_contains(&raw.reeb) {
        let _ = writeln!(out, "reeb {}: interior", raw.reeb);
    } else if s.sigma().contains(&raw.reeb) {
        let _ = writeln!(out, "reeb {}: boundary, rejected", raw.reeb);
        ok = false;
    } else {
        let _ = writeln!(out, "reeb {}: outside the cone, rejected", raw.reeb);
        ok = false;
    }
    for name in raw.filtrations.keys() {
        match raw.filtration(&s, name) {
            Ok(f) if f.is_primary() => {
                let _ = writeln!(out, "filtration {name}: primary");
            }
            Ok(_) => {
                let _ = writeln!(
                    out,
                    "filtration {name}: not m-primary (vanishes on a weight ray), closed-form invariants only"
                );
                ok = false;
            }
            Err(CliError::Field(d)) => {
                let _ = writeln!(out, "filtration {name}: {}", d.message);
                ok = false;
            }
            Err(e) => {
                let _ = writeln!(out, "filtration {name}: {e}");
                ok = false;
            }
        }
    }
    if ok {
        let _ = writeln!(out, "valid, u={u}");
    } else {
        let _ = writeln!(out, "invalid");
    }
    (out, ok)
}

pub fn invariants(
    doc: &Document,
    filtration: Option<&str>,
    tol: Option<&Q>,
    format: Format,
) -> Result<String, CliError> {
    let pol = Polarization::new(&doc.singularity, &doc.xi0)?;
    let f = filtration
        .map(|n| Ok::<_, CliError>((n, doc.filtration(n)?)))
        .transpose()?;
    let tol = resolve_tolerance(doc, tol);
    let report = pol.report(f, &tol)?;
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&report).expect("report serializes") + "\n",
        Format::Csv => {
            let mut out = String::from("name,value,decimal,method,lower\n");
            for e in &report.entries {
                let lower = e.lower.as_ref().map(|l| l.to_string()).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{lower}",
                    e.name,
                    e.value,
                    e.decimal,
                    method_name(e)
                );
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for (k, v) in &report.parameters {
                let _ = writeln!(out, "{k}: {v}");
            }
            for e in &report.entries {
                let _ = write!(out, "{} = {}", e.name, fmt_q(&e.value));
                if let Some(gap) = e.gap() {
                    let _ = write!(
                        out,
                        " [{}, certificate gap {}]",
                        method_name(e),
                        fmt_q(&gap)
                    );
                }
                out.push('\n');
            }
            out
        }
    })
}

fn method_name(e: &ReportEntry) -> String {
    serde_json::to_value(e.method)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn stability(doc: &Document, format: Format) -> Result<String, CliError> {
    let pol = Polarization::new(&doc.singularity, &doc.xi0)?;
    let delta = pol.delta_t()?;
    let verdict = pol.semistable_verdict();
    let fut_ray = pol.futaki_product(&delta.minimizer_ray);
    if format == Format::Json {
        let mut v = json!({
            "delta_T": json_q(&delta.value),
            "minimizing_ray": json_vec(&delta.minimizer_ray),
            "futaki_certificate": json_vec(&verdict.certificate),
            "semistable": verdict.semistable,
        });
        if !verdict.semistable {
            v["destabilizer"] =
                json!({ "ray": json_vec(&delta.minimizer_ray), "futaki": json_q(&fut_ray) });
        }
        return Ok(serde_json::to_string_pretty(&v).expect("json") + "\n");
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "delta_T = {}, minimizing ray {}",
        fmt_q(&delta.value),
        delta.minimizer_ray
    );
    if verdict.certificate.is_zero() {
        let _ = writeln!(out, "Fut|_N = 0");
    } else {
        let _ = writeln!(out, "Fut|_N = {}", fmt_vec(&verdict.certificate));
    }
    let _ = writeln!(
        out,
        "T-semistable: {}",
        if verdict.semistable { "yes" } else { "no" }
    );
    if !verdict.semistable {
        let _ = writeln!(
            out,
            "destabilizer ray {}: Fut = {}",
            delta.minimizer_ray,
            fmt_q(&fut_ray)
        );
    }
    Ok(out)
}

pub fn nvolmin(doc: &Document, tol: Option<&Q>, format: Format) -> Result<String, CliError> {
    let tol = resolve_tolerance(doc, tol);
    let r = minimize_nvol(&doc.singularity, &tol)?;
    if format == Format::Json {
        let v = json!({
            "minimizer": json_vec(&r.minimizer),
            "nvol": json_q(&r.nvol),
            "certificateGap": json_q(&r.certificate_gap),
            "alignmentResidual": json_vec(&r.alignment_residual),
            "iterations": r.iterations,
        });
        return Ok(serde_json::to_string_pretty(&v).expect("json") + "\n");
    }
    let mut out = String::new();
    let _ = writeln!(out, "xi* = {}", fmt_vec(&r.minimizer));
    let _ = writeln!(out, "nvol = {}", fmt_q(&r.nvol));
    let _ = writeln!(out, "certificateGap = {}", fmt_q(&r.certificate_gap));
    let _ = writeln!(
        out,
        "alignmentResidual = {}",
        fmt_vec(&r.alignment_residual)
    );
    let _ = writeln!(out, "iterations = {}", r.iterations);
    Ok(out)
}

fn levels_or(doc: &Document, flag: Option<&[u64]>, default: &[u64]) -> Vec<u64> {
    flag.map(<[u64]>::to_vec)
        .or_else(|| doc.options.levels.clone())
        .unwrap_or_else(|| default.to_vec())
}

pub fn estimate(
    doc: &Document,
    filtration: &str,
    levels: Option<&[u64]>,
    approx: Option<u64>,
    format: Format,
) -> Result<String, CliError> {
    let f = doc.filtration(filtration)?;
    let cap = resolve_budget(doc)?;
    let levels = levels_or(doc, levels, &(1..=50).collect::<Vec<_>>());
    let sw = match approx {
        Some(m) => sweep_approx(&doc.singularity, &doc.xi0, f, m, &levels, cap)?,
        None => sweep(&doc.singularity, &doc.xi0, f, &levels, cap)?,
    };
    Ok(match format {
        Format::Json => serde_json::to_string_pretty(&sw).expect("sweep serializes") + "\n",
        _ => sw.to_csv(),
    })
}

pub fn okounkov(
    doc: &Document,
    filtration: Option<&str>,
    levels: Option<&[u64]>,
    t: Option<&Q>,
) -> Result<String, CliError> {
    let owned;
    let f = match filtration {
        Some(n) => doc.filtration(n)?,
        None => {
            owned = MonomialFiltration::toric(&doc.singularity, &doc.xi0)?;
            &owned
        }
    };
    let t = t.cloned().unwrap_or_else(Q::zero);
    if t.is_negative() {
        return Err(CliError::Usage("t must be nonnegative".into()));
    }
    let cap = resolve_budget(doc)?;
    let levels = levels_or(doc, levels, &[1, 2, 3]);
    let export = okounkov_export(&doc.singularity, &doc.xi0, f, &levels, &t, cap)?;
    Ok(serde_json::to_string_pretty(&export).expect("export serializes") + "\n")
}
