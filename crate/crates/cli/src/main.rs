//! `ineq`: evaluate, audit, and search for counterexamples to a family of
//! trapezoid-type integral inequalities and special-means propositions.
//!
//! Exit codes: 0 = success / claim holds; 2 = claim violated (or, for
//! `audit`, a sound claim violated); 1 = usage, domain, or I/O error.

// NaN-aware validations: `!(p > 1.0)` also rejects NaN, `p <= 1.0` would not
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use ineq_core::audit::{
    run_suite, search, AuditConfig, AuditReport, ClaimId, Family, SearchSpec, SuiteKind,
};
use ineq_core::bounds::{
    self, chebyshev_check, hh_check, kernel_eval, kernel_moment, lemma_identity_residual,
    young_check, BoundId, Case, MomentWeight, Verdict,
};
use ineq_core::expr::parse;
use ineq_core::means::{self, MeanKind};
use ineq_core::props::{prop_verdict, PropCase};
use ineq_core::quad::QuadConfig;
use ineq_core::report;

#[derive(Parser)]
#[command(
    name = "ineq",
    version,
    about = "Numerical auditing toolkit for trapezoid-type integral inequalities and special means"
)]
struct Cli {
    /// Quadrature tolerance override (also settable via INEQ_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate one claim on one case and report holds/violated.
    Check(CheckArgs),
    /// Run a claim x case suite and write a report.
    Audit(AuditArgs),
    /// Print the special means of (a, b) with the ordering-chain status.
    Means(MeansArgs),
    /// Search a parameter box for the most violating case of a claim.
    Search(SearchArgs),
}

#[derive(Args)]
struct CheckArgs {
    /// Claim token: t1, t2, t3-stated, t3-derived, c1, c2-stated, c2-derived,
    /// c3-stated, c3-derived, da1, da2, p1..p6, hh, lemma, young, chebyshev,
    /// kernel.
    claim: String,
    /// Function under test (expression in x), e.g. "x^2".
    #[arg(long)]
    f: Option<String>,
    /// Second function (chebyshev only).
    #[arg(long)]
    g: Option<String>,
    /// Weight function (chebyshev only; default 1).
    #[arg(long)]
    w: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    a: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    /// Monomial degree for p1/p2/p3.
    #[arg(long)]
    n: Option<u32>,
    /// Kernel evaluation point (kernel only).
    #[arg(long)]
    t: Option<f64>,
}

#[derive(Args)]
struct AuditArgs {
    /// Suite name: default | full.
    #[arg(long, default_value = "default")]
    suite: String,
    /// Output format: table | json | csv.
    #[arg(long, default_value = "table")]
    format: String,
    /// Report path (defaults to audit-report.json / audit-report.csv).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

#[derive(Args)]
struct MeansArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: f64,
    #[arg(long, allow_negative_numbers = true)]
    b: f64,
    /// Additional p-logarithmic exponent to tabulate.
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
}

#[derive(Args)]
struct SearchArgs {
    /// Claim token (bounds and propositions are searchable).
    #[arg(long)]
    claim: String,
    /// Function family: monomials | exp | reciprocal | xlnx.
    #[arg(long, default_value = "monomials")]
    family: String,
    /// Custom function overriding --family.
    #[arg(long)]
    f: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    budget: usize,
    #[arg(long, default_value_t = 5)]
    rounds: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    a_min: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    a_max: f64,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    b_min: f64,
    #[arg(long, default_value_t = 7.0, allow_negative_numbers = true)]
    b_max: f64,
    #[arg(long, default_value_t = 1.1)]
    p_min: f64,
    #[arg(long, default_value_t = 10.0)]
    p_max: f64,
}

/// Errors that terminate the process with exit code 1.
#[derive(Debug)]
struct CliError(String);

impl<E: std::error::Error> From<E> for CliError {
    fn from(e: E) -> Self {
        CliError(e.to_string())
    }
}

type CliResult = Result<ExitCode, CliError>;

const HOLDS: ExitCode = ExitCode::SUCCESS;

fn violated() -> ExitCode {
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
            let _ = e.print();
            return code;
        }
    };

    let tol = match resolve_tol(cli.tol) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {}", e.0);
            return ExitCode::from(1);
        }
    };

    let result = match cli.cmd {
        Cmd::Check(args) => cmd_check(args, tol),
        Cmd::Audit(args) => cmd_audit(args, tol),
        Cmd::Means(args) => cmd_means(args),
        Cmd::Search(args) => cmd_search(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(1)
        }
    }
}

fn resolve_tol(flag: Option<f64>) -> Result<f64, CliError> {
    let tol = match flag {
        Some(t) => t,
        None => match std::env::var("INEQ_TOL") {
            Ok(text) => text
                .parse::<f64>()
                .map_err(|_| CliError(format!("INEQ_TOL is not a number: '{text}'")))?,
            Err(_) => 1e-10,
        },
    };
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(CliError(format!("tolerance must be positive, got {tol}")))
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str, claim: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError(format!("claim '{claim}' requires --{flag}")))
}

fn print_verdict(v: &Verdict, claim: &str, n: Option<u32>) {
    println!("claim: {claim}");
    let degree = n.map_or(String::new(), |n| format!("  n: {n}"));
    println!(
        "f: {}  interval: [{}, {}]  p: {}{degree}",
        v.f, v.a, v.b, v.p
    );
    println!(
        "lhs {:.6}  rhs {:.6}  margin {:.6}  (slack {:.2e}, quad error {:.2e})",
        v.lhs, v.rhs, v.margin, v.slack, v.quad_error
    );
    println!("{}", if v.holds { "HOLDS" } else { "VIOLATED" });
}

fn cmd_check(args: CheckArgs, tol: f64) -> CliResult {
    let claim = ClaimId::from_token(&args.claim).ok_or_else(|| {
        CliError(format!(
            "unknown claim '{}'; available: {}",
            args.claim,
            ClaimId::ALL.map(|c| c.token()).join(", ")
        ))
    })?;
    let cfg = QuadConfig::with_tol(tol);
    let token = claim.token();

    match claim {
        ClaimId::Bound(bound) => {
            let src = require(args.f.as_deref(), "f", token)?;
            let a = require(args.a, "a", token)?;
            let b = require(args.b, "b", token)?;
            let p = match bound.fixed_p() {
                Some(p) => {
                    if let Some(given) = args.p {
                        if (given - p).abs() > 1e-12 {
                            return Err(CliError(format!(
                                "claim '{token}' fixes p = {p}; drop --p or pass {p}"
                            )));
                        }
                    }
                    p
                }
                // da1's right-hand side is exponent-free
                None if bound == BoundId::Da1 => args.p.unwrap_or(2.0),
                None => require(args.p, "p", token)?,
            };
            let case = Case::from_source(src, a, b, p)?;
            let v = bounds::verdict(bound, &case, &cfg)?;
            print_verdict(&v, token, None);
            Ok(if v.holds { HOLDS } else { violated() })
        }
        ClaimId::Prop(prop) => {
            let a = require(args.a, "a", token)?;
            let b = require(args.b, "b", token)?;
            let p = require(args.p, "p", token)?;
            let n = if prop.needs_degree() {
                Some(require(args.n, "n", token)?)
            } else {
                None
            };
            let case = PropCase::new(prop, a, b, p, n)?;
            let v = prop_verdict(&case, &cfg)?;
            print_verdict(&v, token, case.n);
            Ok(if v.holds { HOLDS } else { violated() })
        }
        ClaimId::Hh => {
            let src = require(args.f.as_deref(), "f", token)?;
            let a = require(args.a, "a", token)?;
            let b = require(args.b, "b", token)?;
            let f = parse(src)?;
            let h = hh_check(&f, a, b, &cfg)?;
            println!("claim: hh");
            println!("f: {src}  interval: [{a}, {b}]");
            println!(
                "midpoint {:.6} <= mean {:.6} <= trapezoid {:.6}  (slack {:.2e})",
                h.left, h.mid, h.right, h.slack
            );
            println!("{}", if h.holds { "HOLDS" } else { "VIOLATED" });
            Ok(if h.holds { HOLDS } else { violated() })
        }
        ClaimId::Lemma => {
            let src = require(args.f.as_deref(), "f", token)?;
            let a = require(args.a, "a", token)?;
            let b = require(args.b, "b", token)?;
            let case = Case::from_source(src, a, b, args.p.unwrap_or(2.0))?;
            let r = lemma_identity_residual(&case, &cfg)?;
            println!("claim: lemma");
            println!("f: {src}  interval: [{a}, {b}]");
            println!(
                "gap {:.6}  weighted-derivative form {:.6}  residual {:.3e}  (slack {:.2e})",
                r.lhs, r.rhs, r.residual, r.slack
            );
            let holds = r.residual <= r.slack;
            println!("{}", if holds { "HOLDS" } else { "VIOLATED" });
            Ok(if holds { HOLDS } else { violated() })
        }
        ClaimId::Young => {
            let a = require(args.a, "a", token)?;
            let b = require(args.b, "b", token)?;
            let p = require(args.p, "p", token)?;
            if !(a > 0.0 && b > 0.0) {
                return Err(CliError("young requires a, b > 0".to_owned()));
            }
            if !(p > 1.0) {
                return Err(CliError("young requires p > 1".to_owned()));
            }
            let y = young_check(a, b, p);
            println!("claim: young  a: {a}  b: {b}  p: {p}");
            println!(
                "lhs {:.6}  rhs {:.6}  margin {:.6}{}",
                y.lhs,
                y.rhs,
                y.lhs - y.rhs,
                if y.equality { "  (equality case)" } else { "" }
            );
            println!("{}", if y.holds { "HOLDS" } else { "VIOLATED" });
            Ok(if y.holds { HOLDS } else { violated() })
        }
        ClaimId::Kernel => {
            let p = require(args.p, "p", token)?;
            if !(p > 1.0) {
                return Err(CliError("kernel requires p > 1".to_owned()));
            }
            let unit = kernel_moment(p, MomentWeight::Unit, &cfg)?;
            let weighted = kernel_moment(p, MomentWeight::OneMinusTwoT, &cfg)?;
            let unit_expect = MomentWeight::Unit.closed_form(p);
            let weighted_expect = MomentWeight::OneMinusTwoT.closed_form(p);
            let mut min_k = f64::INFINITY;
            for i in 1..2000 {
                min_k = min_k.min(kernel_eval(p, i as f64 / 2000.0));
            }
            println!("claim: kernel  p: {p}");
            if let Some(t) = args.t {
                if t <= 0.0 || t >= 1.0 {
                    return Err(CliError("kernel point t must lie in (0, 1)".to_owned()));
                }
                println!("K_p({t}) = {:.12}", kernel_eval(p, t));
            }
            println!(
                "unit moment {:.12} vs closed form {:.12}",
                unit.value, unit_expect
            );
            println!(
                "weighted moment {:.12} vs closed form {:.12}",
                weighted.value, weighted_expect
            );
            println!("pointwise minimum over t-grid: {min_k:.12} (>= 1 expected)");
            let holds = (unit.value - unit_expect).abs() <= unit.abs_error_estimate + 1e-9
                && (weighted.value - weighted_expect).abs() <= weighted.abs_error_estimate + 1e-9
                && min_k >= 1.0 - 1e-12;
            println!("{}", if holds { "HOLDS" } else { "VIOLATED" });
            Ok(if holds { HOLDS } else { violated() })
        }
        ClaimId::Chebyshev => {
            let fs = require(args.f.as_deref(), "f", token)?;
            let gs = require(args.g.as_deref(), "g", token)?;
            let a = require(args.a, "a", token)?;
            let b = require(args.b, "b", token)?;
            if !(a < b) {
                return Err(CliError(format!(
                    "chebyshev requires a < b, got [{a}, {b}]"
                )));
            }
            let f = parse(fs)?;
            let g = parse(gs)?;
            let w = args.w.as_deref().map(parse).transpose()?;
            let c = chebyshev_check(&f, &g, w.as_ref(), a, b, &cfg)?;
            println!("claim: chebyshev  orientation: {:?}", c.orientation);
            println!(
                "f: {fs}  g: {gs}  w: {}  interval: [{a}, {b}]",
                args.w.as_deref().unwrap_or("1")
            );
            println!(
                "int w * int wfg = {:.6}  vs  int wf * int wg = {:.6}  (slack {:.2e})",
                c.lhs, c.rhs, c.slack
            );
            println!("{}", if c.holds { "HOLDS" } else { "VIOLATED" });
            Ok(if c.holds { HOLDS } else { violated() })
        }
    }
}

fn summary_table(report: &AuditReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<12} {:>6} {:>6} {:>10} {:>14}\n",
        "claim", "cases", "holds", "violations", "max margin"
    ));
    for s in &report.summary.per_claim {
        out.push_str(&format!(
            "{:<12} {:>6} {:>6} {:>10} {:>14.6e}\n",
            s.claim, s.cases, s.holds, s.violations, s.max_margin
        ));
    }
    if let Some(w) = &report.summary.worst_violation {
        out.push_str(&format!(
            "worst violation: {} f={} a={} b={} p={} margin={:.6e}\n",
            w.claim, w.f, w.a, w.b, w.p, w.margin
        ));
    }
    if let Some(r) = report.summary.discrepancy_ratios.c2_stated_over_derived {
        out.push_str(&format!("c2 stated/derived constant ratio: {r:.12}\n"));
    }
    for finding in &report.summary.chain_findings {
        out.push_str(&format!(
            "chain {} on f={} [{}, {}] p={}: {}\n",
            finding.theorem,
            finding.f,
            finding.a,
            finding.b,
            finding.p,
            finding
                .first_failing
                .as_deref()
                .map_or("all links hold".to_owned(), |id| format!(
                    "first failing link {id}"
                )),
        ));
    }
    if !report.summary.failures.is_empty() {
        out.push_str(&format!(
            "case failures recorded: {}\n",
            report.summary.failures.len()
        ));
    }
    out
}

fn cmd_audit(args: AuditArgs, tol: f64) -> CliResult {
    let kind = SuiteKind::from_name(&args.suite).ok_or_else(|| {
        CliError(format!(
            "unknown suite '{}'; available: {}",
            args.suite,
            SuiteKind::NAMES.join(", ")
        ))
    })?;
    let cfg = AuditConfig {
        tol,
        seed: args.seed,
    };
    let report = run_suite(&ClaimId::ALL, &kind.spec(), &cfg);

    let (rendered, default_name) = match args.format.as_str() {
        "json" => (report::to_json(&report), Some("audit-report.json")),
        "csv" => (report::to_csv(&report), Some("audit-report.csv")),
        "table" => (summary_table(&report), None),
        other => {
            return Err(CliError(format!(
                "unknown format '{other}'; available: table, json, csv"
            )))
        }
    };

    match (&args.out, default_name) {
        (Some(path), _) => {
            std::fs::write(path, &rendered)
                .map_err(|e| CliError(format!("writing {}: {e}", path.display())))?;
            println!("report written to {}", path.display());
        }
        (None, Some(name)) => {
            std::fs::write(name, &rendered)
                .map_err(|e| CliError(format!("writing {name}: {e}")))?;
            println!("report written to {name}");
        }
        (None, None) => print!("{rendered}"),
    }

    let violations: usize = report.summary.per_claim.iter().map(|s| s.violations).sum();
    let sound_violations: usize = report
        .summary
        .per_claim
        .iter()
        .filter(|s| ClaimId::from_token(&s.claim).is_some_and(|c| c.sound()))
        .map(|s| s.violations)
        .sum();
    println!(
        "suite={} verdicts={} violations={} sound-claim-violations={} failures={}",
        report.meta.suite,
        report.verdicts.len(),
        violations,
        sound_violations,
        report.summary.failures.len()
    );
    // audited-claim violations are findings, not process failures
    Ok(if sound_violations == 0 {
        HOLDS
    } else {
        violated()
    })
}

fn cmd_means(args: MeansArgs) -> CliResult {
    let entries = means::chain_check(args.a, args.b)?;
    for entry in &entries {
        println!("{:<3} {:.12}", entry.kind.symbol(), entry.value);
    }
    if let Some(r) = args.r {
        let kind = if r == -1.0 {
            MeanKind::Logarithmic
        } else if r == 0.0 {
            MeanKind::Identric
        } else {
            MeanKind::PLog(r)
        };
        println!(
            "{:<3} {:.12}",
            kind.symbol(),
            means::mean(kind, args.a, args.b)?
        );
    }
    let ok = means::chain_holds(&entries);
    println!(
        "chain H <= G <= L <= I <= A: {}",
        if ok { "OK" } else { "VIOLATED" }
    );
    Ok(if ok { HOLDS } else { violated() })
}

fn cmd_search(args: SearchArgs) -> CliResult {
    let claim = ClaimId::from_token(&args.claim).ok_or_else(|| {
        CliError(format!(
            "unknown claim '{}'; available: {}",
            args.claim,
            ClaimId::ALL.map(|c| c.token()).join(", ")
        ))
    })?;
    let family = match &args.f {
        Some(src) => Family::Custom(parse(src)?),
        None => Family::from_name(&args.family).ok_or_else(|| {
            CliError(format!(
                "unknown family '{}'; available: monomials, exp, reciprocal, xlnx",
                args.family
            ))
        })?,
    };
    let spec = SearchSpec {
        claim,
        family,
        a_range: (args.a_min, args.a_max),
        b_range: (args.b_min, args.b_max),
        p_range: (args.p_min, args.p_max),
        budget: args.budget,
        rounds: args.rounds,
        seed: args.seed,
    };
    let outcome = search(&spec)?;
    println!(
        "evaluations: {}  margin trace: {}",
        outcome.evaluations,
        outcome
            .trace
            .iter()
            .map(|m| format!("{m:.6e}"))
            .collect::<Vec<_>>()
            .join(" -> ")
    );
    match &outcome.best {
        None => println!("no valid case inside the box"),
        Some(best) => {
            println!(
                "best case: f={} a={} b={} p={}{}",
                best.f,
                best.a,
                best.b,
                best.p,
                best.n.map_or(String::new(), |n| format!(" n={n}"))
            );
            println!(
                "lhs {:.6}  rhs {:.6}  margin {:.6e}",
                best.lhs, best.rhs, best.margin
            );
            if best.margin > best.slack {
                println!(
                    "VIOLATION FOUND (margin exceeds numeric slack {:.2e})",
                    best.slack
                );
            } else {
                println!(
                    "no violation found (best margin within slack {:.2e})",
                    best.slack
                );
            }
        }
    }
    Ok(HOLDS)
}
