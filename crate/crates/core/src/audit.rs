//! Suite orchestration and counterexample search.
//!
//! [`run_suite`] evaluates a claim list against a case grid and assembles an
//! [`AuditReport`]: one verdict row per (claim, case), per-claim summaries, a
//! worst-violation record, constant-discrepancy ratios, and chain findings.
//! Violations are re-checked at 10x tighter quadrature tolerance before they
//! are reported, so quadrature noise cannot masquerade as a counterexample.
//!
//! [`search`] sweeps a coarse grid over a parameter box and then performs
//! seeded local refinement (shrink factor 1/2 per round) around the best
//! point, maximizing the violation margin of a single claim.

use crate::bounds::{
    self, proof_chain_audit, BoundId, Case, ChebyshevError, MomentWeight, TheoremId, Verdict,
    NUMERIC_SLACK,
};
use crate::expr::{parse, Expression};
use crate::props::{self, PropCase, PropId};
use crate::quad::QuadConfig;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use std::time::{SystemTime, UNIX_EPOCH};
use thiserror::Error;

/// Every claim the toolkit can evaluate, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimId {
    Bound(BoundId),
    Prop(PropId),
    Hh,
    Lemma,
    Young,
    Kernel,
    Chebyshev,
}

impl ClaimId {
    pub const ALL: [ClaimId; 22] = [
        ClaimId::Bound(BoundId::T1),
        ClaimId::Bound(BoundId::T2),
        ClaimId::Bound(BoundId::T3Stated),
        ClaimId::Bound(BoundId::T3Derived),
        ClaimId::Bound(BoundId::C1),
        ClaimId::Bound(BoundId::C2Stated),
        ClaimId::Bound(BoundId::C2Derived),
        ClaimId::Bound(BoundId::C3Stated),
        ClaimId::Bound(BoundId::C3Derived),
        ClaimId::Bound(BoundId::Da1),
        ClaimId::Bound(BoundId::Da2),
        ClaimId::Prop(PropId::P1),
        ClaimId::Prop(PropId::P2),
        ClaimId::Prop(PropId::P3),
        ClaimId::Prop(PropId::P4),
        ClaimId::Prop(PropId::P5),
        ClaimId::Prop(PropId::P6),
        ClaimId::Hh,
        ClaimId::Lemma,
        ClaimId::Young,
        ClaimId::Kernel,
        ClaimId::Chebyshev,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            ClaimId::Bound(b) => b.token(),
            ClaimId::Prop(p) => p.token(),
            ClaimId::Hh => "hh",
            ClaimId::Lemma => "lemma",
            ClaimId::Young => "young",
            ClaimId::Kernel => "kernel",
            ClaimId::Chebyshev => "chebyshev",
        }
    }

    pub fn from_token(token: &str) -> Option<ClaimId> {
        ClaimId::ALL.iter().copied().find(|c| c.token() == token)
    }

    /// Sound claims must never show a violation; a violation of an audited
    /// claim is a finding.
    pub fn sound(&self) -> bool {
        match self {
            ClaimId::Bound(b) => b.sound(),
            ClaimId::Prop(p) => p.sound(),
            ClaimId::Hh
            | ClaimId::Lemma
            | ClaimId::Young
            | ClaimId::Kernel
            | ClaimId::Chebyshev => true,
        }
    }
}

/// One function of the test family.
#[derive(Debug, Clone)]
pub struct FamilyMember {
    pub source: String,
    pub expr: Expression,
    /// Monomial degree, when the member is `x^n` (reused by p1-p3).
    pub degree: Option<u32>,
}

impl FamilyMember {
    fn new(source: &str, degree: Option<u32>) -> FamilyMember {
        FamilyMember {
            source: source.to_owned(),
            expr: parse(source).expect("family member must parse"),
            degree,
        }
    }
}

/// Named function family for searches and suites.
#[derive(Debug, Clone)]
pub enum Family {
    /// `x^n` for n in 2..=8.
    Monomials,
    /// `exp(c x)` for a small spread of c in [0.1, 3].
    ExpScaled,
    /// `1/x` (positive intervals only).
    Reciprocal,
    /// `x ln x` (positive intervals only).
    XLnX,
    /// A single caller-supplied convex function.
    Custom(Expression),
}

impl Family {
    pub fn from_name(name: &str) -> Option<Family> {
        match name {
            "monomials" => Some(Family::Monomials),
            "exp" => Some(Family::ExpScaled),
            "reciprocal" => Some(Family::Reciprocal),
            "xlnx" => Some(Family::XLnX),
            _ => None,
        }
    }

    pub fn members(&self) -> Vec<FamilyMember> {
        match self {
            Family::Monomials => (2..=8)
                .map(|n| FamilyMember::new(&format!("x^{n}"), Some(n)))
                .collect(),
            Family::ExpScaled => [0.1, 0.5, 1.0, 2.0, 3.0]
                .iter()
                .map(|c| FamilyMember::new(&format!("exp({c:?} * x)"), None))
                .collect(),
            Family::Reciprocal => vec![FamilyMember::new("1/x", None)],
            Family::XLnX => vec![FamilyMember::new("x*ln(x)", None)],
            Family::Custom(e) => vec![FamilyMember {
                source: e.to_string(),
                expr: e.clone(),
                degree: None,
            }],
        }
    }
}

/// Case grid a suite runs every claim against.
#[derive(Debug, Clone)]
pub struct SuiteSpec {
    pub name: String,
    pub functions: Vec<FamilyMember>,
    pub a_grid: Vec<f64>,
    pub delta_grid: Vec<f64>,
    pub p_grid: Vec<f64>,
    /// Extra (source, a, b) triples appended to the function x interval grid.
    pub pinned: Vec<(String, f64, f64)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    /// Monomial family over the standard grid, plus the pinned unit-interval
    /// square case.
    Default,
    /// Adds the exp / reciprocal / x ln x members.
    Full,
}

impl SuiteKind {
    pub const NAMES: [&'static str; 2] = ["default", "full"];

    pub fn from_name(name: &str) -> Option<SuiteKind> {
        match name {
            "default" => Some(SuiteKind::Default),
            "full" => Some(SuiteKind::Full),
            _ => None,
        }
    }

    pub fn spec(&self) -> SuiteSpec {
        let mut functions = Family::Monomials.members();
        if *self == SuiteKind::Full {
            functions.extend(Family::ExpScaled.members());
            functions.push(FamilyMember::new("1/x", None));
            functions.push(FamilyMember::new("x*ln(x)", None));
        }
        SuiteSpec {
            name: match self {
                SuiteKind::Default => "default".to_owned(),
                SuiteKind::Full => "full".to_owned(),
            },
            functions,
            a_grid: vec![0.5, 1.0, 2.0],
            delta_grid: vec![0.5, 1.0, 2.0, 5.0],
            p_grid: vec![1.1, 1.5, 2.0, 3.0, 5.0, 10.0],
            pinned: vec![("x^2".to_owned(), 0.0, 1.0)],
        }
    }
}

/// Tolerance and seed configuration for a suite run.
#[derive(Debug, Clone)]
pub struct AuditConfig {
    /// Base quadrature tolerance (absolute and relative).
    pub tol: f64,
    pub seed: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            tol: 1e-10,
            seed: 42,
        }
    }
}

impl AuditConfig {
    fn quad(&self) -> QuadConfig {
        QuadConfig::with_tol(self.tol)
    }

    /// 10x tighter configuration used to re-check violations.
    fn quad_tight(&self) -> QuadConfig {
        QuadConfig::with_tol(self.tol / 10.0)
    }
}

/// One row of the report; field order matches the emitted JSON and CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictRow {
    pub claim: String,
    pub f: String,
    pub a: f64,
    pub b: f64,
    /// 0.0 for claims that do not involve an exponent (hh, lemma, da1,
    /// chebyshev).
    pub p: f64,
    pub n: Option<u32>,
    pub lhs: f64,
    pub rhs: f64,
    /// Positive beyond `slack` constitutes a violation; equality-style rows
    /// store |lhs - rhs| here.
    pub margin: f64,
    pub holds: bool,
    pub slack: f64,
    pub quad_error: f64,
}

impl VerdictRow {
    fn from_verdict(claim: &ClaimId, v: &Verdict, n: Option<u32>) -> VerdictRow {
        VerdictRow {
            claim: claim.token().to_owned(),
            f: v.f.clone(),
            a: v.a,
            b: v.b,
            p: v.p,
            n,
            lhs: v.lhs,
            rhs: v.rhs,
            margin: v.margin,
            holds: v.holds,
            slack: v.slack,
            quad_error: v.quad_error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRef {
    pub claim: String,
    pub f: String,
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub n: Option<u32>,
    pub margin: f64,
}

impl CaseRef {
    fn of(row: &VerdictRow) -> CaseRef {
        CaseRef {
            claim: row.claim.clone(),
            f: row.f.clone(),
            a: row.a,
            b: row.b,
            p: row.p,
            n: row.n,
            margin: row.margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub claim: String,
    pub cases: usize,
    pub holds: usize,
    pub violations: usize,
    pub max_margin: f64,
    pub argmax: Option<CaseRef>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRow {
    pub claim: String,
    pub f: String,
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub n: Option<u32>,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioRow {
    pub f: String,
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub ratio: f64,
}

/// Constant-discrepancy measurements the audit records alongside verdicts.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Discrepancies {
    /// Printed corollary constant over re-derived constant: 11/483 vs 11/672,
    /// i.e. 672/483.
    pub c2_stated_over_derived: Option<f64>,
    /// Per-case ratio of the printed t3 right-hand side to the re-derived
    /// one.
    pub t3_stated_over_derived: Vec<RatioRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainFinding {
    pub theorem: String,
    pub f: String,
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub first_failing: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub per_claim: Vec<ClaimSummary>,
    pub worst_violation: Option<CaseRef>,
    pub failures: Vec<FailureRow>,
    pub discrepancy_ratios: Discrepancies,
    pub chain_findings: Vec<ChainFinding>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub abs: f64,
    pub rel: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub seed: u64,
    pub tolerances: Tolerances,
    pub suite: String,
    pub timestamp: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub meta: Meta,
    pub verdicts: Vec<VerdictRow>,
    pub summary: Summary,
}

impl AuditReport {
    pub fn claim_summary(&self, token: &str) -> Option<&ClaimSummary> {
        self.summary.per_claim.iter().find(|s| s.claim == token)
    }

    pub fn rows(&self, token: &str) -> impl Iterator<Item = &VerdictRow> {
        let token = token.to_owned();
        self.verdicts.iter().filter(move |r| r.claim == token)
    }
}

/// The (function, interval) combinations of a suite, pinned triples included.
fn function_intervals(suite: &SuiteSpec) -> Vec<(FamilyMember, f64, f64)> {
    let mut out = Vec::new();
    for member in &suite.functions {
        for &a in &suite.a_grid {
            for &delta in &suite.delta_grid {
                out.push((member.clone(), a, a + delta));
            }
        }
    }
    for (source, a, b) in &suite.pinned {
        let degree = parse_degree(source);
        out.push((
            FamilyMember {
                source: source.clone(),
                expr: parse(source).expect("pinned case must parse"),
                degree,
            },
            *a,
            *b,
        ));
    }
    out
}

fn parse_degree(source: &str) -> Option<u32> {
    source.strip_prefix("x^").and_then(|d| d.parse().ok())
}

/// Interval pairs with positive left endpoint (prop / young domain).
fn positive_intervals(suite: &SuiteSpec) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for &a in &suite.a_grid {
        if a > 0.0 {
            for &delta in &suite.delta_grid {
                out.push((a, a + delta));
            }
        }
    }
    out
}

struct RowCollector {
    rows: Vec<VerdictRow>,
    failures: Vec<FailureRow>,
}

impl RowCollector {
    #[allow(clippy::too_many_arguments)]
    fn fail(
        &mut self,
        claim: &ClaimId,
        f: &str,
        a: f64,
        b: f64,
        p: f64,
        n: Option<u32>,
        err: String,
    ) {
        self.failures.push(FailureRow {
            claim: claim.token().to_owned(),
            f: f.to_owned(),
            a,
            b,
            p,
            n,
            error: err,
        });
    }
}

fn bound_rows(
    claim: &ClaimId,
    bound: BoundId,
    suite: &SuiteSpec,
    cfg: &AuditConfig,
    out: &mut RowCollector,
) {
    let quad = cfg.quad();
    let p_values: Vec<f64> = match bound.fixed_p() {
        Some(p) => vec![p],
        // da1 has no exponent in its formula; one row per interval
        None if bound == BoundId::Da1 => vec![2.0],
        None => suite.p_grid.clone(),
    };
    for (member, a, b) in function_intervals(suite) {
        for &p in &p_values {
            let case = match Case::new(member.expr.clone(), a, b, p) {
                Ok(c) => c,
                Err(e) => {
                    out.fail(claim, &member.source, a, b, p, member.degree, e.to_string());
                    continue;
                }
            };
            let mut verdict = match bounds::verdict(bound, &case, &quad) {
                Ok(v) => v,
                Err(e) => {
                    out.fail(claim, &member.source, a, b, p, member.degree, e.to_string());
                    continue;
                }
            };
            if !verdict.holds {
                // re-check violations at 10x tighter tolerance
                match bounds::verdict(bound, &case, &cfg.quad_tight()) {
                    Ok(v) => verdict = v,
                    Err(e) => {
                        out.fail(claim, &member.source, a, b, p, member.degree, e.to_string());
                        continue;
                    }
                }
            }
            let mut row = VerdictRow::from_verdict(claim, &verdict, member.degree);
            if bound == BoundId::Da1 {
                row.p = 0.0;
            }
            out.rows.push(row);
        }
    }
}

fn prop_rows(
    claim: &ClaimId,
    prop: PropId,
    suite: &SuiteSpec,
    cfg: &AuditConfig,
    out: &mut RowCollector,
) {
    let quad = cfg.quad();
    let degrees: Vec<Option<u32>> = if prop.needs_degree() {
        suite
            .functions
            .iter()
            .filter_map(|m| m.degree)
            .map(Some)
            .collect()
    } else {
        vec![None]
    };
    for n in degrees {
        for (a, b) in positive_intervals(suite) {
            for &p in &suite.p_grid {
                let case = match PropCase::new(prop, a, b, p, n) {
                    Ok(c) => c,
                    Err(e) => {
                        out.fail(claim, "", a, b, p, n, e.to_string());
                        continue;
                    }
                };
                let mut verdict = match props::prop_verdict(&case, &quad) {
                    Ok(v) => v,
                    Err(e) => {
                        out.fail(claim, "", a, b, p, n, e.to_string());
                        continue;
                    }
                };
                if !verdict.holds {
                    match props::prop_verdict(&case, &cfg.quad_tight()) {
                        Ok(v) => verdict = v,
                        Err(e) => {
                            out.fail(claim, "", a, b, p, n, e.to_string());
                            continue;
                        }
                    }
                }
                out.rows
                    .push(VerdictRow::from_verdict(claim, &verdict, case.n));
            }
        }
    }
}

fn hh_rows(claim: &ClaimId, suite: &SuiteSpec, cfg: &AuditConfig, out: &mut RowCollector) {
    let quad = cfg.quad();
    for (member, a, b) in function_intervals(suite) {
        match bounds::hh_check(&member.expr, a, b, &quad) {
            Ok(h) => {
                let violation = (h.left - h.mid).max(h.mid - h.right);
                out.rows.push(VerdictRow {
                    claim: claim.token().to_owned(),
                    f: member.source.clone(),
                    a,
                    b,
                    p: 0.0,
                    n: member.degree,
                    lhs: violation,
                    rhs: 0.0,
                    margin: violation,
                    holds: h.holds,
                    slack: h.slack,
                    quad_error: h.slack - NUMERIC_SLACK,
                });
            }
            Err(e) => out.fail(
                claim,
                &member.source,
                a,
                b,
                0.0,
                member.degree,
                e.to_string(),
            ),
        }
    }
}

fn lemma_rows(claim: &ClaimId, suite: &SuiteSpec, cfg: &AuditConfig, out: &mut RowCollector) {
    let quad = cfg.quad();
    for (member, a, b) in function_intervals(suite) {
        let case = match Case::new(member.expr.clone(), a, b, 2.0) {
            Ok(c) => c,
            Err(e) => {
                out.fail(
                    claim,
                    &member.source,
                    a,
                    b,
                    0.0,
                    member.degree,
                    e.to_string(),
                );
                continue;
            }
        };
        match bounds::lemma_identity_residual(&case, &quad) {
            Ok(r) => out.rows.push(VerdictRow {
                claim: claim.token().to_owned(),
                f: member.source.clone(),
                a,
                b,
                p: 0.0,
                n: member.degree,
                lhs: r.lhs,
                rhs: r.rhs,
                margin: r.residual,
                holds: r.residual <= r.slack,
                slack: r.slack,
                quad_error: r.slack - NUMERIC_SLACK,
            }),
            Err(e) => out.fail(
                claim,
                &member.source,
                a,
                b,
                0.0,
                member.degree,
                e.to_string(),
            ),
        }
    }
}

fn young_rows(claim: &ClaimId, suite: &SuiteSpec, out: &mut RowCollector) {
    for (a, b) in positive_intervals(suite) {
        for &p in &suite.p_grid {
            let y = bounds::young_check(a, b, p);
            out.rows.push(VerdictRow {
                claim: claim.token().to_owned(),
                f: String::new(),
                a,
                b,
                p,
                n: None,
                lhs: y.lhs,
                rhs: y.rhs,
                margin: y.lhs - y.rhs,
                holds: y.holds,
                slack: 1e-12,
                quad_error: 0.0,
            });
        }
    }
}

fn kernel_rows(claim: &ClaimId, suite: &SuiteSpec, cfg: &AuditConfig, out: &mut RowCollector) {
    let quad = cfg.quad();
    for &p in &suite.p_grid {
        // pointwise lower bound over a fine t grid
        let mut min_k = f64::INFINITY;
        for i in 1..2000 {
            let t = i as f64 / 2000.0;
            min_k = min_k.min(bounds::kernel_eval(p, t));
        }
        out.rows.push(VerdictRow {
            claim: claim.token().to_owned(),
            f: "pointwise".to_owned(),
            a: 0.0,
            b: 1.0,
            p,
            n: None,
            lhs: 1.0,
            rhs: min_k,
            margin: 1.0 - min_k,
            holds: 1.0 - min_k <= 1e-12,
            slack: 1e-12,
            quad_error: 0.0,
        });
        for (tag, weight) in [
            ("unit-moment", MomentWeight::Unit),
            ("weighted-moment", MomentWeight::OneMinusTwoT),
        ] {
            match bounds::kernel_moment(p, weight, &quad) {
                Ok(r) => {
                    let expected = weight.closed_form(p);
                    let margin = (r.value - expected).abs();
                    let slack = r.abs_error_estimate + NUMERIC_SLACK;
                    out.rows.push(VerdictRow {
                        claim: claim.token().to_owned(),
                        f: tag.to_owned(),
                        a: 0.0,
                        b: 1.0,
                        p,
                        n: None,
                        lhs: r.value,
                        rhs: expected,
                        margin,
                        holds: margin <= slack,
                        slack,
                        quad_error: r.abs_error_estimate,
                    });
                }
                Err(e) => out.fail(claim, tag, 0.0, 1.0, p, None, e.to_string()),
            }
        }
    }
}

/// (f, g, w) triples used for the suite's Chebyshev rows; all screen as
/// monotone on the nonnegative grid intervals.
fn chebyshev_pairs() -> Vec<(&'static str, &'static str, Option<&'static str>)> {
    vec![
        ("x", "x^2", None),
        ("x", "1 - 2*x", None),
        ("exp(x)", "x", Some("x^2")),
    ]
}

fn chebyshev_rows(claim: &ClaimId, suite: &SuiteSpec, cfg: &AuditConfig, out: &mut RowCollector) {
    let quad = cfg.quad();
    let mut intervals = positive_intervals(suite);
    intervals.extend(suite.pinned.iter().map(|(_, a, b)| (*a, *b)));
    intervals.sort_by(|l, r| l.partial_cmp(r).unwrap());
    intervals.dedup();
    for (fs, gs, ws) in chebyshev_pairs() {
        let f = parse(fs).unwrap();
        let g = parse(gs).unwrap();
        let w = ws.map(|s| parse(s).unwrap());
        for &(a, b) in &intervals {
            let label = match ws {
                Some(w) => format!("{fs} ; {gs} ; {w}"),
                None => format!("{fs} ; {gs} ; 1"),
            };
            match bounds::chebyshev_check(&f, &g, w.as_ref(), a, b, &quad) {
                Ok(c) => {
                    // orient so that positive margin = violation
                    let margin = match c.orientation {
                        bounds::Orientation::Comonotone => c.rhs - c.lhs,
                        bounds::Orientation::AntiMonotone => c.lhs - c.rhs,
                    };
                    out.rows.push(VerdictRow {
                        claim: claim.token().to_owned(),
                        f: label,
                        a,
                        b,
                        p: 0.0,
                        n: None,
                        lhs: c.lhs,
                        rhs: c.rhs,
                        margin,
                        holds: c.holds,
                        slack: c.slack,
                        quad_error: c.slack - NUMERIC_SLACK,
                    });
                }
                Err(ChebyshevError::MonotonicityScreen { which }) => {
                    out.fail(claim, &label, a, b, 0.0, None, format!("screen: {which}"))
                }
                Err(e) => out.fail(claim, &label, a, b, 0.0, None, e.to_string()),
            }
        }
    }
}

/// Ratio of the printed t3 constant to the re-derived one, measured from the
/// evaluated right-hand sides of matching rows.
fn t3_discrepancies(rows: &[VerdictRow]) -> Vec<RatioRow> {
    let stated: Vec<&VerdictRow> = rows.iter().filter(|r| r.claim == "t3-stated").collect();
    let derived: Vec<&VerdictRow> = rows.iter().filter(|r| r.claim == "t3-derived").collect();
    stated
        .iter()
        .zip(derived.iter())
        .filter(|(s, d)| s.f == d.f && s.a == d.a && s.b == d.b && s.p == d.p)
        .map(|(s, d)| RatioRow {
            f: s.f.clone(),
            a: s.a,
            b: s.b,
            p: s.p,
            ratio: s.rhs / d.rhs,
        })
        .collect()
}

fn c2_discrepancy(rows: &[VerdictRow]) -> Option<f64> {
    let stated = rows
        .iter()
        .find(|r| r.claim == "c2-stated" && r.rhs.abs() > 1e-300)?;
    let derived = rows.iter().find(|r| {
        r.claim == "c2-derived" && r.f == stated.f && r.a == stated.a && r.b == stated.b
    })?;
    Some(stated.rhs / derived.rhs)
}

fn chain_findings(cfg: &AuditConfig) -> Vec<ChainFinding> {
    let quad = cfg.quad();
    let mut findings = Vec::new();
    if let Ok(case) = Case::from_source("x^2", 0.0, 1.0, 2.0) {
        for theorem in [TheoremId::T1, TheoremId::T2, TheoremId::T3] {
            if let Ok(steps) = proof_chain_audit(theorem, &case, &quad) {
                findings.push(ChainFinding {
                    theorem: theorem.token().to_owned(),
                    f: "x^2".to_owned(),
                    a: 0.0,
                    b: 1.0,
                    p: 2.0,
                    first_failing: bounds::first_failing(&steps).map(|s| s.id.to_owned()),
                });
            }
        }
    }
    findings
}

/// Evaluate `claims` over the suite grid and assemble the report.
pub fn run_suite(claims: &[ClaimId], suite: &SuiteSpec, cfg: &AuditConfig) -> AuditReport {
    let mut collector = RowCollector {
        rows: Vec::new(),
        failures: Vec::new(),
    };
    for claim in claims {
        match claim {
            ClaimId::Bound(b) => bound_rows(claim, *b, suite, cfg, &mut collector),
            ClaimId::Prop(p) => prop_rows(claim, *p, suite, cfg, &mut collector),
            ClaimId::Hh => hh_rows(claim, suite, cfg, &mut collector),
            ClaimId::Lemma => lemma_rows(claim, suite, cfg, &mut collector),
            ClaimId::Young => young_rows(claim, suite, &mut collector),
            ClaimId::Kernel => kernel_rows(claim, suite, cfg, &mut collector),
            ClaimId::Chebyshev => chebyshev_rows(claim, suite, cfg, &mut collector),
        }
    }

    let per_claim = claims
        .iter()
        .map(|claim| {
            let token = claim.token();
            let rows: Vec<&VerdictRow> =
                collector.rows.iter().filter(|r| r.claim == token).collect();
            let holds = rows.iter().filter(|r| r.holds).count();
            let argmax = rows
                .iter()
                .max_by(|l, r| l.margin.partial_cmp(&r.margin).unwrap())
                .map(|r| CaseRef::of(r));
            ClaimSummary {
                claim: token.to_owned(),
                cases: rows.len(),
                holds,
                violations: rows.len() - holds,
                max_margin: argmax.as_ref().map_or(0.0, |c| c.margin),
                argmax,
            }
        })
        .collect();

    let worst_violation = collector
        .rows
        .iter()
        .filter(|r| !r.holds)
        .max_by(|l, r| l.margin.partial_cmp(&r.margin).unwrap())
        .map(CaseRef::of);

    let discrepancy_ratios = Discrepancies {
        c2_stated_over_derived: c2_discrepancy(&collector.rows),
        t3_stated_over_derived: t3_discrepancies(&collector.rows),
    };

    AuditReport {
        meta: Meta {
            seed: cfg.seed,
            tolerances: Tolerances {
                abs: cfg.tol,
                rel: cfg.tol,
            },
            suite: suite.name.clone(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        },
        summary: Summary {
            per_claim,
            worst_violation,
            failures: collector.failures,
            discrepancy_ratios,
            chain_findings: chain_findings(cfg),
        },
        verdicts: collector.rows,
    }
}

/// Convenience: every claim over the named suite.
pub fn run_named_suite(kind: SuiteKind, cfg: &AuditConfig) -> AuditReport {
    run_suite(&ClaimId::ALL, &kind.spec(), cfg)
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("claim '{0}' is not searchable (only bounds and propositions)")]
    NotSearchable(String),
    #[error("budget {budget} is below the initial grid size {grid}")]
    BudgetBelowGrid { budget: usize, grid: usize },
}

/// Search problem: maximize the violation margin of one claim over a
/// parameter box.
#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub claim: ClaimId,
    pub family: Family,
    pub a_range: (f64, f64),
    pub b_range: (f64, f64),
    pub p_range: (f64, f64),
    /// Maximum number of margin evaluations.
    pub budget: usize,
    /// Local refinement rounds after the coarse sweep.
    pub rounds: usize,
    pub seed: u64,
}

impl SearchSpec {
    /// Standard box: intervals inside [0, 7], exponents in [1.1, 10].
    pub fn new(claim: ClaimId, family: Family) -> SearchSpec {
        SearchSpec {
            claim,
            family,
            a_range: (0.0, 2.0),
            b_range: (0.5, 7.0),
            p_range: (1.1, 10.0),
            budget: 10_000,
            rounds: 5,
            seed: 42,
        }
    }
}

/// Most violating case found by a search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestCase {
    pub claim: String,
    pub f: String,
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub n: Option<u32>,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    /// None when no point of the box yields a valid case.
    pub best: Option<BestCase>,
    pub evaluations: usize,
    /// Best margin after the sweep and after each refinement round;
    /// nondecreasing.
    pub trace: Vec<f64>,
}

struct SearchProblem<'a> {
    spec: &'a SearchSpec,
    members: Vec<FamilyMember>,
    quad: QuadConfig,
}

impl SearchProblem<'_> {
    /// Evaluate the claim margin at one grid point; None when the point is
    /// not a valid case (domain, convexity, or ordering).
    fn margin_at(&self, member: &FamilyMember, a: f64, b: f64, p: f64) -> Option<BestCase> {
        match self.spec.claim {
            ClaimId::Bound(bound) => {
                let case = Case::new(member.expr.clone(), a, b, p).ok()?;
                let v = bounds::verdict(bound, &case, &self.quad).ok()?;
                Some(BestCase {
                    claim: self.spec.claim.token().to_owned(),
                    f: member.source.clone(),
                    a,
                    b,
                    p,
                    n: member.degree,
                    lhs: v.lhs,
                    rhs: v.rhs,
                    margin: v.margin,
                    slack: v.slack,
                })
            }
            ClaimId::Prop(prop) => {
                let case = PropCase::new(prop, a, b, p, member.degree).ok()?;
                let v = props::prop_verdict(&case, &self.quad).ok()?;
                Some(BestCase {
                    claim: self.spec.claim.token().to_owned(),
                    f: v.f.clone(),
                    a,
                    b,
                    p,
                    n: case.n,
                    lhs: v.lhs,
                    rhs: v.rhs,
                    margin: v.margin,
                    slack: v.slack,
                })
            }
            _ => None,
        }
    }
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count <= 1 || hi <= lo {
        return vec![lo];
    }
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

/// Coarse grid sweep followed by seeded local refinement; deterministic for a
/// fixed spec (seed included).
pub fn search(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    let members = match spec.claim {
        ClaimId::Bound(_) => spec.family.members(),
        ClaimId::Prop(p) if p.needs_degree() => Family::Monomials.members(),
        ClaimId::Prop(_) => vec![FamilyMember::new("1/x", None)],
        other => return Err(SearchError::NotSearchable(other.token().to_owned())),
    };

    let fixed_p = match spec.claim {
        ClaimId::Bound(b) => b.fixed_p(),
        _ => None,
    };

    // per-dimension resolution sized so the sweep uses about half the budget
    let dims = if fixed_p.is_some() { 2.0 } else { 3.0 };
    let per_dim = ((spec.budget as f64 / (2.0 * members.len() as f64)).powf(1.0 / dims) as usize)
        .clamp(2, 12);
    let grid_size = members.len() * per_dim * per_dim * if fixed_p.is_some() { 1 } else { per_dim };
    if spec.budget < grid_size {
        return Err(SearchError::BudgetBelowGrid {
            budget: spec.budget,
            grid: grid_size,
        });
    }

    let problem = SearchProblem {
        spec,
        members,
        quad: QuadConfig::default(),
    };

    let a_pts = linspace(spec.a_range.0, spec.a_range.1, per_dim);
    let b_pts = linspace(spec.b_range.0, spec.b_range.1, per_dim);
    let p_pts = match fixed_p {
        Some(p) => vec![p],
        None => linspace(spec.p_range.0, spec.p_range.1, per_dim),
    };

    let mut evaluations = 0usize;
    let mut best: Option<BestCase> = None;

    let consider = |cand: Option<BestCase>, best: &mut Option<BestCase>| {
        if let Some(c) = cand {
            if best.as_ref().is_none_or(|b| c.margin > b.margin) {
                *best = Some(c);
            }
        }
    };

    'sweep: for member in &problem.members {
        for &a in &a_pts {
            for &b in &b_pts {
                for &p in &p_pts {
                    if evaluations >= spec.budget {
                        break 'sweep;
                    }
                    evaluations += 1;
                    consider(problem.margin_at(member, a, b, p), &mut best);
                }
            }
        }
    }

    let mut trace = vec![best.as_ref().map_or(f64::NEG_INFINITY, |b| b.margin)];

    if let Some(mut center) = best.clone() {
        let member = problem
            .members
            .iter()
            .find(|m| m.source == center.f || m.degree == center.n)
            .cloned()
            .unwrap_or_else(|| problem.members[0].clone());
        let mut rng = StdRng::seed_from_u64(spec.seed);
        let mut half_a = 0.5 * (spec.a_range.1 - spec.a_range.0);
        let mut half_b = 0.5 * (spec.b_range.1 - spec.b_range.0);
        let mut half_p = 0.5 * (spec.p_range.1 - spec.p_range.0);

        for _ in 0..spec.rounds {
            half_a *= 0.5;
            half_b *= 0.5;
            half_p *= 0.5;
            let clamp = |v: f64, range: (f64, f64)| v.max(range.0).min(range.1);
            let a_lo = clamp(center.a - half_a, spec.a_range);
            let a_hi = clamp(center.a + half_a, spec.a_range);
            let b_lo = clamp(center.b - half_b, spec.b_range);
            let b_hi = clamp(center.b + half_b, spec.b_range);
            let p_lo = clamp(center.p - half_p, spec.p_range);
            let p_hi = clamp(center.p + half_p, spec.p_range);

            let p_refine = match fixed_p {
                Some(p) => vec![p],
                None => linspace(p_lo, p_hi, 3),
            };
            let mut points: Vec<(f64, f64, f64)> = Vec::new();
            for &a in &linspace(a_lo, a_hi, 3) {
                for &b in &linspace(b_lo, b_hi, 3) {
                    for &p in &p_refine {
                        points.push((a, b, p));
                    }
                }
            }
            for _ in 0..8 {
                let a = rng.gen_range(a_lo..=a_hi);
                let b = rng.gen_range(b_lo..=b_hi);
                let p = fixed_p.unwrap_or_else(|| rng.gen_range(p_lo..=p_hi));
                points.push((a, b, p));
            }

            for (a, b, p) in points {
                if evaluations >= spec.budget {
                    break;
                }
                evaluations += 1;
                consider(problem.margin_at(&member, a, b, p), &mut best);
            }
            center = best.clone().expect("best persists once set");
            trace.push(center.margin);
        }
    }

    Ok(SearchOutcome {
        best,
        evaluations,
        trace,
    })
}
