//! Rendering of report records as JSON lines, CSV or aligned text. Each
//! CSV cell carries the same datum as the matching JSON field (nested
//! values become compact JSON), so the two machine formats are
//! interchangeable.

use std::io::Write;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::Format;
use crate::arith::Factorization;
use crate::certify::CertifyResult;
use crate::criteria::{Reason, Status, Verdict};
use crate::error::{Error, Result};
use crate::polyff::RationalFunctionRepr;

pub trait Report: Serialize {
    const HEADERS: &'static [&'static str];

    fn cells(&self) -> Vec<String>;

    fn pretty_headers() -> &'static [&'static str] {
        Self::HEADERS
    }

    fn pretty_cells(&self) -> Vec<String> {
        self.cells()
    }
}

fn io(e: impl std::fmt::Display) -> Error {
    Error::Io(e.to_string())
}

pub fn emit<R: Report>(out: &mut dyn Write, format: Format, rows: &[R]) -> Result<()> {
    match format {
        Format::Json => {
            for r in rows {
                let line = serde_json::to_string(r).map_err(io)?;
                writeln!(out, "{line}").map_err(io)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(R::HEADERS).map_err(io)?;
            for r in rows {
                w.write_record(r.cells()).map_err(io)?;
            }
            out.write_all(&w.into_inner().map_err(io)?).map_err(io)?;
        }
        Format::Pretty => {
            let header: Vec<String> = R::pretty_headers().iter().map(|s| s.to_string()).collect();
            let body: Vec<Vec<String>> = rows.iter().map(Report::pretty_cells).collect();
            write_aligned(out, &header, &body)?;
        }
    }
    out.flush().map_err(io)
}

fn write_aligned(out: &mut dyn Write, header: &[String], body: &[Vec<String>]) -> Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in body {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    for row in std::iter::once(header).chain(body.iter().map(Vec::as_slice)) {
        let mut line = String::new();
        for (i, (cell, w)) in row.iter().zip(&widths).enumerate() {
            if i > 0 {
                line.push_str("  ");
            }
            line.push_str(cell);
            line.extend(std::iter::repeat(' ').take(w - cell.chars().count()));
        }
        writeln!(out, "{}", line.trim_end()).map_err(io)?;
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("report values serialize")
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::InGamma => "InGamma",
        Status::NotInGamma => "NotInGamma",
        Status::Unknown => "Unknown",
    }
}

fn approx(r: &str) -> String {
    let parsed: Option<BigRational> = r.parse().ok();
    match parsed.and_then(|v| v.to_f64()) {
        Some(v) => format!("{v:.4}"),
        None => r.to_string(),
    }
}

/// One line of a Γ table: the deciding criterion plus, for the sieve, the
/// split of q − 1 into ℓ and the sieve primes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct TableRow {
    pub k: String,
    pub status: String,
    pub reason: String,
    pub ell: String,
    /// Space-separated, ascending.
    pub sieve_primes: String,
    pub delta: String,
    #[serde(rename = "Delta")]
    pub big_delta: String,
}

impl TableRow {
    pub fn from_verdict(v: &Verdict) -> Self {
        let mut row = TableRow {
            k: v.k.to_string(),
            status: status_name(v.status).to_string(),
            reason: v.reason.as_ref().map(Reason::name).unwrap_or("").to_string(),
            ell: String::new(),
            sieve_primes: String::new(),
            delta: String::new(),
            big_delta: String::new(),
        };
        if let Some(Reason::Sieve(c)) = &v.reason {
            row.ell = c.ell_radical.to_string();
            row.sieve_primes = c
                .sieve_primes
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            row.delta = c.delta.to_string();
            row.big_delta = c.big_delta.to_string();
        }
        row
    }
}

impl Report for TableRow {
    const HEADERS: &'static [&'static str] =
        &["k", "status", "reason", "ell", "sieve_primes", "delta", "Delta"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.k.clone(),
            self.status.clone(),
            self.reason.clone(),
            self.ell.clone(),
            self.sieve_primes.clone(),
            self.delta.clone(),
            self.big_delta.clone(),
        ]
    }

    fn pretty_headers() -> &'static [&'static str] {
        &["k", "status", "reason", "ℓ", "{p_1..p_r}", "δ", "Δ"]
    }

    fn pretty_cells(&self) -> Vec<String> {
        let primes = if self.sieve_primes.is_empty() {
            String::new()
        } else {
            format!("{{{}}}", self.sieve_primes.replace(' ', ", "))
        };
        vec![
            self.k.clone(),
            self.status.clone(),
            self.reason.clone(),
            self.ell.clone(),
            primes,
            approx(&self.delta),
            approx(&self.big_delta),
        ]
    }
}

impl Report for Verdict {
    const HEADERS: &'static [&'static str] =
        &["p", "k", "m1", "m2", "status", "reason", "attempted", "detail"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.k.to_string(),
            self.m1.to_string(),
            self.m2.to_string(),
            status_name(self.status).to_string(),
            self.reason.as_ref().map(Reason::name).unwrap_or("").to_string(),
            self.attempted.join(";"),
            self.reason.as_ref().map(json).unwrap_or_default(),
        ]
    }

    fn pretty_headers() -> &'static [&'static str] {
        &["p", "k", "(m1, m2)", "status", "reason", "attempted"]
    }

    fn pretty_cells(&self) -> Vec<String> {
        vec![
            self.p.to_string(),
            self.k.to_string(),
            format!("({}, {})", self.m1, self.m2),
            status_name(self.status).to_string(),
            self.reason.as_ref().map(Reason::name).unwrap_or("-").to_string(),
            self.attempted.join(", "),
        ]
    }
}

impl Report for CertifyResult {
    const HEADERS: &'static [&'static str] = &[
        "p",
        "k",
        "m1",
        "m2",
        "status",
        "functions_examined",
        "functions_in_upsilon",
        "wall_time_ms",
        "counterexample",
        "field",
        "samples",
    ];

    fn cells(&self) -> Vec<String> {
        let opt = |v: Option<u64>| v.map(|n| n.to_string()).unwrap_or_default();
        vec![
            self.field.p.to_string(),
            self.field.k.to_string(),
            self.m1.to_string(),
            self.m2.to_string(),
            json(&self.status).trim_matches('"').to_string(),
            self.stats.functions_examined.to_string(),
            opt(self.stats.functions_in_upsilon),
            opt(self.stats.wall_time_ms),
            self.counterexample.as_ref().map(json).unwrap_or_default(),
            json(&self.field),
            json(&self.samples),
        ]
    }

    fn pretty_headers() -> &'static [&'static str] {
        &["q", "(m1, m2)", "status", "examined", "counterexample"]
    }

    fn pretty_cells(&self) -> Vec<String> {
        vec![
            format!("{}^{}", self.field.p, self.field.k),
            format!("({}, {})", self.m1, self.m2),
            json(&self.status).trim_matches('"').to_string(),
            self.stats.functions_examined.to_string(),
            self.counterexample.as_ref().map(json).unwrap_or_else(|| "-".into()),
        ]
    }
}

/// One numeric check made by `verify`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub check: &'static str,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub q: u64,
    pub f: RationalFunctionRepr,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub l1: u64,
    #[serde(serialize_with = "crate::serde_util::decimal")]
    pub l2: u64,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Report for CheckRecord {
    const HEADERS: &'static [&'static str] = &["check", "q", "f", "l1", "l2", "lhs", "rhs", "pass"];

    fn cells(&self) -> Vec<String> {
        vec![
            self.check.to_string(),
            self.q.to_string(),
            json(&self.f),
            self.l1.to_string(),
            self.l2.to_string(),
            self.lhs.clone(),
            self.rhs.clone(),
            self.pass.to_string(),
        ]
    }
}

/// A factorization as a report record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct FactorReport(pub Factorization);

impl Report for FactorReport {
    const HEADERS: &'static [&'static str] = &["value", "factors"];

    fn cells(&self) -> Vec<String> {
        vec![self.0.value().to_string(), self.0.to_string()]
    }
}
