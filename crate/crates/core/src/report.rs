//! Report serialization: JSON (whole report) and CSV (verdict rows).
//!
//! CSV columns mirror the JSON verdict fields in order; numbers are printed
//! with 17 significant digits so every f64 round-trips exactly.

use crate::audit::{AuditReport, VerdictRow};
use thiserror::Error;

/// Column order shared by the JSON verdict objects and the CSV rows.
pub const CSV_HEADER: &str = "claim,f,a,b,p,n,lhs,rhs,margin,holds,slack,quad_error";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReportError {
    #[error("csv row {row}: {message}")]
    Csv { row: usize, message: String },
    #[error("json: {0}")]
    Json(String),
}

pub fn to_json(report: &AuditReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

pub fn from_json(text: &str) -> Result<AuditReport, ReportError> {
    serde_json::from_str(text).map_err(|e| ReportError::Json(e.to_string()))
}

/// 17 significant digits: enough for exact f64 round-trips.
fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn escape_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

pub fn verdict_to_csv_row(v: &VerdictRow) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{}",
        escape_field(&v.claim),
        escape_field(&v.f),
        fmt_f64(v.a),
        fmt_f64(v.b),
        fmt_f64(v.p),
        v.n.map_or(String::new(), |n| n.to_string()),
        fmt_f64(v.lhs),
        fmt_f64(v.rhs),
        fmt_f64(v.margin),
        v.holds,
        fmt_f64(v.slack),
        fmt_f64(v.quad_error),
    )
}

/// CSV rendering of the verdict rows (header mandatory).
pub fn to_csv(report: &AuditReport) -> String {
    let mut out = String::with_capacity(64 * (report.verdicts.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for v in &report.verdicts {
        out.push_str(&verdict_to_csv_row(v));
        out.push('\n');
    }
    out
}

fn split_csv_line(line: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut field = String::new();
    let mut chars = line.chars().peekable();
    let mut quoted = false;
    while let Some(c) = chars.next() {
        match c {
            '"' if quoted => {
                if chars.peek() == Some(&'"') {
                    chars.next();
                    field.push('"');
                } else {
                    quoted = false;
                }
            }
            '"' => quoted = true,
            ',' if !quoted => fields.push(std::mem::take(&mut field)),
            other => field.push(other),
        }
    }
    fields.push(field);
    fields
}

/// Parse CSV text produced by [`to_csv`] back into verdict rows.
pub fn parse_csv(text: &str) -> Result<Vec<VerdictRow>, ReportError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == CSV_HEADER => {}
        other => {
            return Err(ReportError::Csv {
                row: 0,
                message: format!("missing or wrong header: {:?}", other.map(|(_, h)| h)),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields = split_csv_line(line);
        if fields.len() != 12 {
            return Err(ReportError::Csv {
                row: idx,
                message: format!("expected 12 fields, got {}", fields.len()),
            });
        }
        let err = |message: String| ReportError::Csv { row: idx, message };
        let num = |s: &str| -> Result<f64, ReportError> {
            s.parse().map_err(|_| err(format!("bad number '{s}'")))
        };
        rows.push(VerdictRow {
            claim: fields[0].clone(),
            f: fields[1].clone(),
            a: num(&fields[2])?,
            b: num(&fields[3])?,
            p: num(&fields[4])?,
            n: if fields[5].is_empty() {
                None
            } else {
                Some(
                    fields[5]
                        .parse()
                        .map_err(|_| err(format!("bad degree '{}'", fields[5])))?,
                )
            },
            lhs: num(&fields[6])?,
            rhs: num(&fields[7])?,
            margin: num(&fields[8])?,
            holds: match fields[9].as_str() {
                "true" => true,
                "false" => false,
                other => return Err(err(format!("bad bool '{other}'"))),
            },
            slack: num(&fields[10])?,
            quad_error: num(&fields[11])?,
        });
    }
    Ok(rows)
}
