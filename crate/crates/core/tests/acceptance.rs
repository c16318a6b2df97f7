//! Acceptance suite: one test per criterion, each printing a PASS line.
//!
//! Run with `cargo test -p ineq-core --test acceptance -- --nocapture` to see
//! the per-criterion lines.

use ineq_core::audit::{
    self, run_named_suite, AuditConfig, AuditReport, ClaimId, Family, SearchSpec, SuiteKind,
};
use ineq_core::bounds::{
    self, first_failing, kernel_eval, proof_chain_audit, BoundId, Case, MomentWeight, TheoremId,
};
use ineq_core::expr::parse;
use ineq_core::means;
use ineq_core::props::{prop_crosscheck, PropCase, PropId};
use ineq_core::quad::QuadConfig;
use ineq_core::report;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::sync::OnceLock;

/// The shared default-suite report; computed once for the whole suite.
fn default_report() -> &'static AuditReport {
    static REPORT: OnceLock<AuditReport> = OnceLock::new();
    REPORT.get_or_init(|| run_named_suite(SuiteKind::Default, &AuditConfig::default()))
}

fn tight() -> QuadConfig {
    QuadConfig::with_tol(1e-12)
}

/// The six-function built-in family with domain-respecting random intervals.
fn family_intervals(rng: &mut StdRng) -> Vec<(String, f64, f64)> {
    let a_sq = rng.gen_range(-2.0..2.0);
    let a_cube = rng.gen_range(0.0..2.0);
    let a_exp = rng.gen_range(-2.0..1.5);
    let a_rec = rng.gen_range(0.05..2.0);
    let a_xln = rng.gen_range(0.05..2.0);
    let a_abs = rng.gen_range(-2.0..2.0);
    let d = |rng: &mut StdRng| rng.gen_range(0.3..1.8);
    let kink = a_abs + 0.37; // interior kink of the |x-c|^2 member
    vec![
        ("x^2".to_owned(), a_sq, a_sq + d(rng)),
        ("x^3".to_owned(), a_cube, a_cube + d(rng)),
        ("exp(x)".to_owned(), a_exp, a_exp + d(rng)),
        ("1/x".to_owned(), a_rec, a_rec + d(rng)),
        ("x*ln(x)".to_owned(), a_xln, a_xln + d(rng)),
        (format!("abs(x - {kink:.6})^2"), a_abs, a_abs + d(rng)),
    ]
}

#[test]
fn criterion_01_lemma_identity() {
    let mut rng = StdRng::seed_from_u64(101);
    let mut checked = 0;
    for _ in 0..100 {
        for (src, a, b) in family_intervals(&mut rng) {
            let case = Case::from_source(&src, a, b, 2.0)
                .unwrap_or_else(|e| panic!("{src} on [{a}, {b}]: {e}"));
            let r = bounds::lemma_identity_residual(&case, &tight()).unwrap();
            assert!(
                r.residual < 1e-8,
                "{src} on [{a}, {b}]: residual {}",
                r.residual
            );
            checked += 1;
        }
    }
    assert_eq!(checked, 600);
    println!("acceptance 01 (lemma identity residual < 1e-8 on family x 100 intervals): PASS");
}

#[test]
fn criterion_02_hermite_hadamard() {
    let mut rng = StdRng::seed_from_u64(202);
    for _ in 0..40 {
        for (src, a, b) in family_intervals(&mut rng) {
            let f = parse(&src).unwrap();
            let h = bounds::hh_check(&f, a, b, &tight()).unwrap();
            assert!(h.holds, "{src} on [{a}, {b}]: {h:?}");
        }
    }
    let h = bounds::hh_check(&parse("x^2").unwrap(), 0.0, 1.0, &tight()).unwrap();
    assert!((h.left - 0.25).abs() < 1e-10);
    assert!((h.mid - 1.0 / 3.0).abs() < 1e-10);
    assert!((h.right - 0.5).abs() < 1e-10);
    println!("acceptance 02 (hermite-hadamard sandwich; x^2 triple = 1/4, 1/3, 1/2): PASS");
}

#[test]
fn criterion_03_kernel() {
    let mut rng = StdRng::seed_from_u64(303);
    for _ in 0..10_000 {
        let p = rng.gen_range(1.0_f64..20.0).max(1.0 + 1e-9);
        let t = rng.gen_range(0.0_f64..1.0).clamp(1e-15, 1.0 - 1e-15);
        let k = kernel_eval(p, t);
        assert!(k >= 1.0 - 1e-12, "K_{p}({t}) = {k}");
    }
    let cfg = QuadConfig::default();
    for p in [1.1, 1.5, 2.0, 3.0, 5.0, 10.0] {
        let unit = bounds::kernel_moment(p, MomentWeight::Unit, &cfg).unwrap();
        assert!(
            (unit.value - 2.0 * p / (p + 1.0)).abs() < 1e-9,
            "unit moment p={p}: {}",
            unit.value
        );
        let weighted = bounds::kernel_moment(p, MomentWeight::OneMinusTwoT, &cfg).unwrap();
        let expect = 2.0 * p * (p - 1.0) / ((p + 1.0) * (2.0 * p + 1.0));
        assert!(
            (weighted.value - expect).abs() < 1e-9,
            "weighted moment p={p}: {}",
            weighted.value
        );
    }
    println!("acceptance 03 (kernel >= 1 on 10^4 samples; moments match closed forms): PASS");
}

#[test]
fn criterion_04_t1_soundness() {
    let report = default_report();
    let t1 = report.claim_summary("t1").expect("t1 summary");
    assert_eq!(t1.violations, 0, "t1 must have zero violations: {t1:?}");
    assert!(
        t1.cases >= 500,
        "default grid should hold about 500 t1 cases, got {}",
        t1.cases
    );
    let spot = bounds::verdict(
        BoundId::T1,
        &Case::from_source("x^2", 0.0, 1.0, 2.0).unwrap(),
        &tight(),
    )
    .unwrap();
    assert!((spot.lhs - 1.0 / 6.0).abs() < 1e-10, "lhs {}", spot.lhs);
    assert!((spot.rhs - 4.0 / 9.0).abs() < 1e-9, "rhs {}", spot.rhs);
    println!(
        "acceptance 04 (t1 sound on {} default-grid cases; spot lhs 1/6, rhs 4/9): PASS",
        t1.cases
    );
}

#[test]
fn criterion_05_t2_falsification() {
    // the default audit reports the violation at f = x^2, [0,1], p = 2
    let report = default_report();
    let row = report
        .rows("t2")
        .find(|r| r.a == 0.0 && r.b == 1.0 && r.p == 2.0 && r.f == "x^2")
        .expect("pinned t2 case must be in the default grid");
    assert!(!row.holds, "{row:?}");
    assert!(
        (row.margin - 1.0 / 30.0).abs() < 1e-9,
        "margin {}",
        row.margin
    );

    // the search also finds it (or better)
    let out = audit::search(&SearchSpec::new(
        ClaimId::Bound(BoundId::T2),
        Family::Monomials,
    ))
    .unwrap();
    let best = out.best.expect("search result");
    assert!(
        best.margin >= 1.0 / 30.0 - 1e-9,
        "search best margin {}",
        best.margin
    );

    // and the chain audit localizes the failure to a Chebyshev link
    let case = Case::from_source("x^2", 0.0, 1.0, 2.0).unwrap();
    let steps = proof_chain_audit(TheoremId::T2, &case, &QuadConfig::default()).unwrap();
    let fail = first_failing(&steps).expect("t2 chain must fail");
    assert!(
        fail.id.starts_with("chebyshev"),
        "first failing link {}",
        fail.id
    );
    println!(
        "acceptance 05 (t2 falsified: margin 1/30 at x^2/[0,1]/p=2; chain fails at {}): PASS",
        fail.id
    );
}

#[test]
fn criterion_06_c2_constant_discrepancy() {
    let cfg = QuadConfig::default();
    let case = Case::from_source("x^2", 0.0, 1.0, 1.1).unwrap();
    let delta_f = 1.0; // f(1) - f(0)
    let stated = bounds::rhs(BoundId::C2Stated, &case, &cfg).unwrap();
    assert!((stated.value - 11.0 / 483.0 * delta_f).abs() < 1e-15);
    let derived = bounds::rhs(BoundId::C2Derived, &case, &cfg).unwrap();
    assert!((derived.value - 11.0 / 672.0 * delta_f).abs() < 1e-15);

    let report = default_report();
    let ratio = report
        .summary
        .discrepancy_ratios
        .c2_stated_over_derived
        .expect("c2 ratio recorded");
    assert!(
        (ratio - 672.0 / 483.0).abs() < 1e-12,
        "c2 ratio {ratio} should be 672/483"
    );
    println!("acceptance 06 (c2 constants 11/483 vs 11/672; ratio 672/483 recorded): PASS");
}

#[test]
fn criterion_07_t3_derived_soundness() {
    let report = default_report();
    let t3d = report
        .claim_summary("t3-derived")
        .expect("t3-derived summary");
    assert_eq!(t3d.violations, 0, "t3-derived must be sound: {t3d:?}");

    let spot = bounds::rhs(
        BoundId::T3Derived,
        &Case::from_source("x^2", 0.0, 1.0, 2.0).unwrap(),
        &tight(),
    )
    .unwrap();
    assert!(
        (spot.value - 1.0 / 6.0_f64.sqrt()).abs() < 1e-9,
        "rhs {}",
        spot.value
    );

    let ratios = &report.summary.discrepancy_ratios.t3_stated_over_derived;
    let t3_cases = report.claim_summary("t3-stated").unwrap().cases;
    assert_eq!(
        ratios.len(),
        t3_cases,
        "stated/derived ratio recorded per case"
    );
    assert!(ratios.iter().all(|r| r.ratio.is_finite()));
    let pinned = ratios
        .iter()
        .find(|r| r.a == 0.0 && r.b == 1.0 && r.p == 2.0)
        .expect("pinned ratio");
    // 2^(1-1/q) (b-a)^(2/q-2) = sqrt(2) on the unit interval at q = 2
    assert!(
        (pinned.ratio - 2.0_f64.sqrt()).abs() < 1e-8,
        "pinned ratio {}",
        pinned.ratio
    );
    println!(
        "acceptance 07 (t3-derived sound on {} cases; spot rhs 1/sqrt(6); {} stated/derived ratios): PASS",
        t3d.cases,
        ratios.len()
    );
}

#[test]
fn criterion_08_means() {
    let mut rng = StdRng::seed_from_u64(808);
    for _ in 0..1000 {
        let a = rng.gen_range(1e-3_f64..100.0);
        let b = rng.gen_range(1e-3_f64..100.0);
        let entries = means::chain_check(a, b).unwrap();
        assert!(means::chain_holds(&entries), "({a}, {b}): {entries:?}");
    }

    let entries = means::chain_check(1.0, 2.0).unwrap();
    let expected = [
        4.0 / 3.0,
        std::f64::consts::SQRT_2,
        1.0 / std::f64::consts::LN_2,
        4.0 / std::f64::consts::E,
        1.5,
    ];
    for (entry, want) in entries.iter().zip(expected) {
        assert!(
            (entry.value - want).abs() <= 1e-12 * want,
            "{:?}: {} vs {want}",
            entry.kind,
            entry.value
        );
    }

    for _ in 0..100 {
        let a = rng.gen_range(0.01_f64..50.0);
        let b = a + rng.gen_range(1e-6_f64..50.0);
        assert!(
            means::lp_monotonicity_check(a, b, &[-1.0, 0.0, 1.0, 2.0, 3.0]).unwrap(),
            "({a}, {b})"
        );
    }
    println!("acceptance 08 (mean chain on 10^3 pairs; (1,2) quintuple; L_p monotonicity): PASS");
}

#[test]
fn criterion_09_propositions() {
    let mut rng = StdRng::seed_from_u64(909);
    let cfg = tight();

    // p4 and p6 are exact substitutions of their parents
    for _ in 0..50 {
        let a = rng.gen_range(0.1_f64..3.0);
        let b = a + rng.gen_range(0.2_f64..4.0);
        let p = rng.gen_range(1.1_f64..5.0);
        for id in [PropId::P4, PropId::P6] {
            let case = PropCase::new(id, a, b, p, None).unwrap();
            let c = prop_crosscheck(&case, &cfg).unwrap();
            assert!(
                c.agree,
                "{id:?} ({a}, {b}, {p}): printed {} vs theorem {}",
                c.printed, c.theorem
            );
        }
    }

    // p1/p2/p3/p5 cross-checks emit finite ratios
    for _ in 0..20 {
        let a = rng.gen_range(0.1_f64..3.0);
        let b = a + rng.gen_range(0.2_f64..4.0);
        let p = rng.gen_range(1.1_f64..5.0);
        let n = rng.gen_range(2u32..6);
        for id in [PropId::P1, PropId::P2, PropId::P3, PropId::P5] {
            let need_n = id.needs_degree().then_some(n);
            let case = PropCase::new(id, a, b, p, need_n).unwrap();
            let c = prop_crosscheck(&case, &cfg).unwrap();
            assert!(c.ratio.is_finite(), "{id:?}: ratio {:?}", c.ratio);
        }
    }

    // p1 ratio is invariant under (a, b) -> (lambda a, lambda b)
    for _ in 0..10 {
        let a = rng.gen_range(0.2_f64..2.0);
        let b = a + rng.gen_range(0.3_f64..2.0);
        let p = rng.gen_range(1.2_f64..4.0);
        let n = rng.gen_range(2u32..5);
        let base =
            prop_crosscheck(&PropCase::new(PropId::P1, a, b, p, Some(n)).unwrap(), &cfg).unwrap();
        for lambda in [0.25, 2.0, 7.5] {
            let scaled = prop_crosscheck(
                &PropCase::new(PropId::P1, lambda * a, lambda * b, p, Some(n)).unwrap(),
                &cfg,
            )
            .unwrap();
            let rel = (scaled.ratio - base.ratio).abs() / base.ratio.abs();
            assert!(
                rel < 1e-10,
                "lambda {lambda}: {} vs {}",
                scaled.ratio,
                base.ratio
            );
        }
    }
    println!("acceptance 09 (p4/p6 exact substitutions; p1/p2/p3/p5 finite ratios; p1 scale-invariant): PASS");
}

#[test]
fn criterion_10_infrastructure() {
    // expression round-trip on a deterministic source sample (the property
    // suite covers random trees)
    for src in [
        "x^2",
        "1/x",
        "x*ln(x)",
        "abs(x - 0.5)^2",
        "exp(-x^2/2)",
        "1 + 2*x - x/3",
        "-x^2 + sqrt(abs(x))",
    ] {
        let ast = parse(src).unwrap();
        assert_eq!(ast, parse(&ast.to_string()).unwrap(), "{src}");
    }

    // derivative vs central finite difference on the built-in family
    let mut rng = StdRng::seed_from_u64(1010);
    for (src, lo, hi) in [
        ("x^2", -3.0, 3.0),
        ("x^3", 0.1, 3.0),
        ("exp(x)", -2.0, 2.0),
        ("1/x", 0.2, 3.0),
        ("x*ln(x)", 0.2, 3.0),
        ("abs(x - 0.4)^2", -2.0, 2.0),
    ] {
        let f = parse(src).unwrap();
        let d = f.differentiate();
        for _ in 0..100 {
            let x = rng.gen_range(lo..hi);
            let h = 1e-6;
            let fd = (f.evaluate(x + h).unwrap() - f.evaluate(x - h).unwrap()) / (2.0 * h);
            let sym = d.evaluate(x).unwrap();
            let rel = (sym - fd).abs() / (1.0 + sym.abs());
            assert!(rel < 1e-6, "{src} at {x}: sym {sym} fd {fd}");
        }
    }

    // quadrature additivity / linearity / polynomial exactness spot checks
    let cfg = QuadConfig::default();
    let f = |x: f64| (2.0 * x).sin() + x * x;
    let whole = ineq_core::quad::integrate(f, -1.0, 2.0, &cfg).unwrap();
    let left = ineq_core::quad::integrate(f, -1.0, 0.7, &cfg).unwrap();
    let right = ineq_core::quad::integrate(f, 0.7, 2.0, &cfg).unwrap();
    assert!((whole.value - left.value - right.value).abs() < 1e-10);
    for k in [0, 5, 13, 22] {
        let r = ineq_core::quad::integrate(|x| x.powi(k), 0.0, 1.0, &cfg).unwrap();
        let expect = 1.0 / (k as f64 + 1.0);
        assert!((r.value - expect).abs() / expect < 1e-13, "degree {k}");
    }

    // report serialization: json <-> csv verdict tuples agree exactly
    let report = default_report();
    let json_rows = report::from_json(&report::to_json(report))
        .unwrap()
        .verdicts;
    let csv_rows = report::parse_csv(&report::to_csv(report)).unwrap();
    assert_eq!(json_rows, csv_rows);
    assert_eq!(json_rows, report.verdicts);

    // search determinism under a fixed seed
    let spec = SearchSpec {
        budget: 3000,
        rounds: 3,
        seed: 7,
        ..SearchSpec::new(ClaimId::Bound(BoundId::T2), Family::Monomials)
    };
    let first = audit::search(&spec).unwrap();
    let second = audit::search(&spec).unwrap();
    assert_eq!(first, second);

    println!("acceptance 10 (round-trip, derivative fd, quadrature laws, report consistency, search determinism): PASS");
}
