use std::fmt;

use renyi_core::tol;
use serde::Serialize;
use serde_json::{json, Value};

/// Formats with 12 significant digits, switching to exponent notation
/// outside `[1e-5, 1e12)`.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.11e}");
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..12).contains(&exp) {
        format!("{x:.*}", (11 - exp) as usize)
    } else {
        sci
    }
}

/// Failure printed to stderr as a JSON object.
#[derive(Debug, Clone, Serialize)]
pub struct CliError {
    pub code: String,
    pub message: String,
    pub offending_field: Option<String>,
    /// Malformed invocation rather than a failed computation.
    #[serde(skip)]
    pub usage: bool,
}

impl CliError {
    pub fn new(code: &str, message: impl Into<String>, field: Option<&str>) -> Self {
        Self { code: code.to_string(), message: message.into(), offending_field: field.map(str::to_string), usage: false }
    }

    pub fn usage(message: impl Into<String>, field: &str) -> Self {
        Self { usage: true, ..Self::new("UsageError", message, Some(field)) }
    }

    /// Wraps a library error, attributing it to `field` unless the error
    /// names a more specific one.
    pub fn core(err: renyi_core::Error, field: Option<&str>) -> Self {
        use renyi_core::Error as E;
        let specific = match &err {
            E::AlphaOutOfRange { .. } | E::AlphaOne => Some("alpha"),
            E::BetaOne { .. } | E::BetaOutOfRange { .. } => Some("beta"),
            E::DomainError { field, .. } => Some(*field),
            E::BadRank { .. } => Some("rank"),
            E::BadZeros { .. } => Some("zeros"),
            E::UnknownSuite(_) => Some("suite"),
            E::NotBipartite => Some("dims"),
            _ => None,
        };
        Self::new(err.code(), err.to_string(), specific.or(field))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serde_json::to_string(self).expect("error object serialises"))
    }
}

pub type CliResult<T> = Result<T, CliError>;

pub fn tolerances() -> Value {
    json!({
        "herm_tol": tol::HERM_TOL,
        "psd_tol": tol::PSD_TOL,
        "zero_threshold": tol::ZERO_THRESHOLD,
        "chain_tol": tol::CHAIN_TOL,
        "eq_tol": tol::EQ_TOL,
        "opt_tol": tol::OPT_TOL,
        "unit_trace_tol": tol::UNIT_TRACE_TOL,
    })
}

/// A finished command: a JSON report and its human rendering.
pub struct Output {
    pub json: Value,
    pub lines: Vec<String>,
}

impl Output {
    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let mut s = serde_json::to_string_pretty(&self.json).expect("report serialises");
            s.push('\n');
            s
        } else {
            let mut s = self.lines.join("\n");
            s.push('\n');
            s
        }
    }
}

pub fn report_lines(reports: &[renyi_core::BoundReport]) -> Vec<String> {
    reports
        .iter()
        .map(|r| {
            let sides = match r.middle {
                Some(m) => format!("{} <= {} <= {}", sig12(r.lhs), sig12(m), sig12(r.rhs)),
                None => format!("lhs {} rhs {}", sig12(r.lhs), sig12(r.rhs)),
            };
            format!(
                "{}: {} [{}{}] gap {}",
                r.label,
                sides,
                if r.pass { "pass" } else { "FAIL" },
                if r.equality { ", equality" } else { "" },
                sig12(r.gap)
            )
        })
        .collect()
}
