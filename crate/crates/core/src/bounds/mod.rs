//! The trapezoid gap, the audited bound family, and the foundation
//! inequality checks (identity residual, Hermite–Hadamard, Young, kernel,
//! Chebyshev).
//!
//! A [`Case`] packages a convex function with an interval and a conjugate
//! exponent pair. [`verdict`] evaluates one bound on one case and reports the
//! signed violation margin together with the numeric slack that quadrature
//! noise could account for, so a reported violation is never attributable to
//! integration error.

mod chain;

pub use chain::{first_failing, proof_chain_audit, ChainStep, StepRelation, TheoremId};

use crate::expr::{convexity_probe, DomainError, Expression, ParseDiagnostic};
use crate::quad::{self, QuadConfig, QuadError, QuadResult};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute slack floor added on top of quadrature error estimates whenever
/// a numeric comparison decides holds/violated.
pub const NUMERIC_SLACK: f64 = 1e-9;

/// Samples used by the convexity screen at case construction.
const CASE_PROBE_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CaseError {
    #[error("case requires a < b, got [{a}, {b}]")]
    IntervalOrder { a: f64, b: f64 },
    #[error("case requires p > 1, got {p}")]
    ExponentRange { p: f64 },
    #[error("function failed the convexity screen on [{a}, {b}]")]
    NotConvex { a: f64, b: f64 },
    #[error("function or derivative not evaluable on the interval: {0}")]
    Domain(#[from] DomainError),
    #[error("{0}")]
    Parse(#[from] ParseDiagnostic),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error(transparent)]
    Case(#[from] CaseError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("{bound:?} fixes p = {expected}, case has p = {got}")]
    CorollaryExponent {
        bound: BoundId,
        expected: f64,
        got: f64,
    },
}

/// A claim instance: convex `f` on `[a, b]` with conjugate exponents
/// `p, q = p/(p-1)`.
#[derive(Debug, Clone)]
pub struct Case {
    f: Expression,
    f_prime: Expression,
    source: String,
    a: f64,
    b: f64,
    p: f64,
    q: f64,
}

impl Case {
    /// Validate and build a case. Rejects `a >= b`, `p <= 1`, functions that
    /// fail the convexity screen, and functions (or derivatives) that are not
    /// evaluable on the interval.
    pub fn new(f: Expression, a: f64, b: f64, p: f64) -> Result<Case, CaseError> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(CaseError::IntervalOrder { a, b });
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(CaseError::ExponentRange { p });
        }
        if !convexity_probe(&f, a, b, CASE_PROBE_SAMPLES)? {
            return Err(CaseError::NotConvex { a, b });
        }
        let f_prime = f.differentiate();
        for x in [a, 0.5 * (a + b), b] {
            f.evaluate(x)?;
            f_prime.evaluate(x)?;
        }
        let source = f.to_string();
        let q = p / (p - 1.0);
        Ok(Case {
            f,
            f_prime,
            source,
            a,
            b,
            p,
            q,
        })
    }

    pub fn from_source(source: &str, a: f64, b: f64, p: f64) -> Result<Case, CaseError> {
        let f = crate::expr::parse(source)?;
        Case::new(f, a, b, p)
    }

    /// Same case with a different exponent (used by corollaries, which fix p).
    pub fn with_p(&self, p: f64) -> Result<Case, CaseError> {
        if !(p > 1.0) || !p.is_finite() {
            return Err(CaseError::ExponentRange { p });
        }
        let mut c = self.clone();
        c.p = p;
        c.q = p / (p - 1.0);
        Ok(c)
    }

    pub fn f(&self) -> &Expression {
        &self.f
    }
    pub fn f_prime(&self) -> &Expression {
        &self.f_prime
    }
    pub fn source(&self) -> &str {
        &self.source
    }
    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn q(&self) -> f64 {
        self.q
    }
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    /// The substitution `x = t a + (1 - t) b` used by the unit-interval
    /// integrals.
    pub fn x_of_t(&self, t: f64) -> f64 {
        t * self.a + (1.0 - t) * self.b
    }
}

/// Identifier of one audited bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundId {
    T1,
    T2,
    T3Stated,
    T3Derived,
    C1,
    C2Stated,
    C2Derived,
    C3Stated,
    C3Derived,
    Da1,
    Da2,
}

impl BoundId {
    pub const ALL: [BoundId; 11] = [
        BoundId::T1,
        BoundId::T2,
        BoundId::T3Stated,
        BoundId::T3Derived,
        BoundId::C1,
        BoundId::C2Stated,
        BoundId::C2Derived,
        BoundId::C3Stated,
        BoundId::C3Derived,
        BoundId::Da1,
        BoundId::Da2,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            BoundId::T1 => "t1",
            BoundId::T2 => "t2",
            BoundId::T3Stated => "t3-stated",
            BoundId::T3Derived => "t3-derived",
            BoundId::C1 => "c1",
            BoundId::C2Stated => "c2-stated",
            BoundId::C2Derived => "c2-derived",
            BoundId::C3Stated => "c3-stated",
            BoundId::C3Derived => "c3-derived",
            BoundId::Da1 => "da1",
            BoundId::Da2 => "da2",
        }
    }

    pub fn from_token(token: &str) -> Option<BoundId> {
        BoundId::ALL.iter().copied().find(|b| b.token() == token)
    }

    /// Corollaries fix their exponent and reject caller-supplied p.
    pub fn fixed_p(&self) -> Option<f64> {
        match self {
            BoundId::C1 | BoundId::C3Stated | BoundId::C3Derived => Some(2.0),
            BoundId::C2Stated | BoundId::C2Derived => Some(1.1),
            _ => None,
        }
    }

    /// Signed comparison (no absolute value on the gap), following each
    /// statement's typography: the t2 family is signed, everything else
    /// wraps the gap in absolute value.
    pub fn signed(&self) -> bool {
        matches!(self, BoundId::T2 | BoundId::C2Stated | BoundId::C2Derived)
    }

    /// Bounds whose derivations re-check cleanly; a violation of one of
    /// these indicates an implementation bug, not a finding.
    pub fn sound(&self) -> bool {
        matches!(
            self,
            BoundId::T1
                | BoundId::C1
                | BoundId::T3Derived
                | BoundId::C3Derived
                | BoundId::Da1
                | BoundId::Da2
        )
    }
}

/// A value with a propagated absolute-error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub abs_error: f64,
    pub converged: bool,
}

impl Estimate {
    pub fn exact(value: f64) -> Estimate {
        Estimate {
            value,
            abs_error: 0.0,
            converged: true,
        }
    }

    pub(crate) fn from_quad_result(r: &QuadResult) -> Estimate {
        Estimate {
            value: r.value,
            abs_error: r.abs_error_estimate,
            converged: r.converged,
        }
    }

    pub fn scale(self, c: f64) -> Estimate {
        Estimate {
            value: c * self.value,
            abs_error: c.abs() * self.abs_error,
            converged: self.converged,
        }
    }

    pub fn mul(self, other: Estimate) -> Estimate {
        Estimate {
            value: self.value * other.value,
            abs_error: self.value.abs() * other.abs_error
                + other.value.abs() * self.abs_error
                + self.abs_error * other.abs_error,
            converged: self.converged && other.converged,
        }
    }

    /// `x^(1/q)` for nonnegative x, with an interval-arithmetic error bound.
    pub fn root(self, q: f64) -> Estimate {
        let x = self.value.max(0.0);
        let value = x.powf(1.0 / q);
        let abs_error = (x + self.abs_error).powf(1.0 / q) - value;
        Estimate {
            value,
            abs_error,
            converged: self.converged,
        }
    }
}

fn integrate_expr_map<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<Estimate, QuadError> {
    Ok(Estimate::from_quad_result(&quad::integrate(f, a, b, cfg)?))
}

/// Signed trapezoid gap `(f(a) + f(b))/2 - (1/(b-a)) int_a^b f`.
///
/// Nonnegative (up to quadrature slack) for convex `f`.
pub fn lhs_gap(case: &Case, cfg: &QuadConfig) -> Result<Estimate, BoundError> {
    let fa = case.f.evaluate(case.a)?;
    let fb = case.f.evaluate(case.b)?;
    let integral = quad::integrate(case.f.as_fn(), case.a, case.b, cfg)?;
    let width = case.b - case.a;
    Ok(Estimate {
        value: 0.5 * (fa + fb) - integral.value / width,
        abs_error: integral.abs_error_estimate / width,
        converged: integral.converged,
    })
}

/// Residual of the trapezoid identity
/// `gap = (b-a)/2 int_0^1 (1-2t) f'(ta + (1-t)b) dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    pub residual: f64,
    /// Combined quadrature error both sides could account for.
    pub slack: f64,
    pub lhs: f64,
    pub rhs: f64,
}

pub fn lemma_identity_residual(
    case: &Case,
    cfg: &QuadConfig,
) -> Result<IdentityResidual, BoundError> {
    let gap = lhs_gap(case, cfg)?;
    let fp = &case.f_prime;
    let rhs_int = quad::integrate(
        |t| (1.0 - 2.0 * t) * fp.evaluate(case.x_of_t(t)).unwrap_or(f64::NAN),
        0.0,
        1.0,
        cfg,
    )?;
    let half_width = 0.5 * (case.b - case.a);
    let rhs = half_width * rhs_int.value;
    Ok(IdentityResidual {
        residual: (gap.value - rhs).abs(),
        slack: gap.abs_error + half_width * rhs_int.abs_error_estimate + NUMERIC_SLACK,
        lhs: gap.value,
        rhs,
    })
}

/// `a b <= a^p/p + b^q/q` with its equality condition `a^p = b^q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YoungCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub equality: bool,
}

pub fn young_check(a: f64, b: f64, p: f64) -> YoungCheck {
    assert!(a > 0.0 && b > 0.0, "young_check requires a, b > 0");
    assert!(p > 1.0, "young_check requires p > 1");
    let q = p / (p - 1.0);
    let lhs = a * b;
    let rhs = a.powf(p) / p + b.powf(q) / q;
    YoungCheck {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
        equality: (a.powf(p) - b.powf(q)).abs() < NUMERIC_SLACK,
    }
}

/// The Young-derived kernel `K_p(t) = (1/p) t^(1/p - 1) + (1 - 1/p) t^(1/p)`,
/// which satisfies `K_p(t) >= 1` on `(0, 1)`.
///
/// `t = 1` is accepted as the (continuous) endpoint limit `K_p(1) = 1`, since
/// quadrature nodes inside cells narrower than one ulp of 1 round onto it.
pub fn kernel_eval(p: f64, t: f64) -> f64 {
    debug_assert!(p > 1.0 && t > 0.0 && t <= 1.0);
    let ip = 1.0 / p;
    ip * t.powf(ip - 1.0) + (1.0 - ip) * t.powf(ip)
}

/// Weight applied to the kernel moment integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentWeight {
    /// `int_0^1 K_p`, closed form `2p/(p+1)`.
    Unit,
    /// `int_0^1 K_p(t) (1-2t) dt`, closed form `2p(p-1)/((p+1)(2p+1))`.
    OneMinusTwoT,
}

impl MomentWeight {
    pub fn closed_form(&self, p: f64) -> f64 {
        match self {
            MomentWeight::Unit => 2.0 * p / (p + 1.0),
            MomentWeight::OneMinusTwoT => 2.0 * p * (p - 1.0) / ((p + 1.0) * (2.0 * p + 1.0)),
        }
    }
}

/// Integrate the kernel (times the requested weight) over `(0, 1)`; the
/// kernel is integrably singular at `t = 0` for every `p > 1`.
pub fn kernel_moment(
    p: f64,
    weight: MomentWeight,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    assert!(p > 1.0, "kernel_moment requires p > 1");
    let f = move |t: f64| {
        let k = kernel_eval(p, t);
        match weight {
            MomentWeight::Unit => k,
            MomentWeight::OneMinusTwoT => k * (1.0 - 2.0 * t),
        }
    };
    quad::integrate_endpoint_singular(f, 0.0, 1.0, cfg)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    Comonotone,
    AntiMonotone,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChebyshevError {
    #[error("function '{which}' is not numerically monotone on the interval; inequality direction undefined")]
    MonotonicityScreen { which: String },
    #[error("weight is negative on the interval (w({x}) = {value})")]
    NegativeWeight { x: f64, value: f64 },
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Both sides of the weighted comparison
/// `int w * int w f g  vs  int w f * int w g`, with the direction expected
/// from the screened orientation of the pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChebyshevCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub orientation: Orientation,
    pub holds: bool,
    pub slack: f64,
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct Monotone {
    nondecreasing: bool,
    nonincreasing: bool,
}

fn monotonicity_screen(e: &Expression, a: f64, b: f64) -> Result<Monotone, ChebyshevError> {
    const SAMPLES: usize = 65;
    let mut values = Vec::with_capacity(SAMPLES);
    for i in 0..SAMPLES {
        let x = a + (b - a) * i as f64 / (SAMPLES - 1) as f64;
        values.push(e.evaluate(x)?);
    }
    let scale = values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let tol = 1e-9 * scale;
    let nondecreasing = values.windows(2).all(|w| w[1] >= w[0] - tol);
    let nonincreasing = values.windows(2).all(|w| w[1] <= w[0] + tol);
    Ok(Monotone {
        nondecreasing,
        nonincreasing,
    })
}

/// Evaluate the weighted Chebyshev comparison for a screened-monotone pair.
/// `w = None` means the unit weight.
pub fn chebyshev_check(
    f: &Expression,
    g: &Expression,
    w: Option<&Expression>,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<ChebyshevCheck, ChebyshevError> {
    assert!(a < b, "chebyshev_check requires a < b");
    let unit = Expression::Constant(1.0);
    let w = w.unwrap_or(&unit);

    let mf = monotonicity_screen(f, a, b)?;
    if !mf.nondecreasing && !mf.nonincreasing {
        return Err(ChebyshevError::MonotonicityScreen {
            which: f.to_string(),
        });
    }
    let mg = monotonicity_screen(g, a, b)?;
    if !mg.nondecreasing && !mg.nonincreasing {
        return Err(ChebyshevError::MonotonicityScreen {
            which: g.to_string(),
        });
    }
    // weight must be nonnegative; sample like the screen does
    for i in 0..65 {
        let x = a + (b - a) * i as f64 / 64.0;
        let v = w.evaluate(x)?;
        if v < -1e-12 {
            return Err(ChebyshevError::NegativeWeight { x, value: v });
        }
    }

    let orientation =
        if (mf.nondecreasing && mg.nondecreasing) || (mf.nonincreasing && mg.nonincreasing) {
            Orientation::Comonotone
        } else {
            Orientation::AntiMonotone
        };

    let wv = |x: f64| w.evaluate(x).unwrap_or(f64::NAN);
    let fv = |x: f64| f.evaluate(x).unwrap_or(f64::NAN);
    let gv = |x: f64| g.evaluate(x).unwrap_or(f64::NAN);

    let int_w = integrate_expr_map(wv, a, b, cfg)?;
    let int_wfg = integrate_expr_map(|x| wv(x) * fv(x) * gv(x), a, b, cfg)?;
    let int_wf = integrate_expr_map(|x| wv(x) * fv(x), a, b, cfg)?;
    let int_wg = integrate_expr_map(|x| wv(x) * gv(x), a, b, cfg)?;

    let lhs = int_w.mul(int_wfg);
    let rhs = int_wf.mul(int_wg);
    let slack = lhs.abs_error + rhs.abs_error + NUMERIC_SLACK;
    let holds = match orientation {
        Orientation::Comonotone => lhs.value >= rhs.value - slack,
        Orientation::AntiMonotone => lhs.value <= rhs.value + slack,
    };
    Ok(ChebyshevCheck {
        lhs: lhs.value,
        rhs: rhs.value,
        orientation,
        holds,
        slack,
    })
}

/// The midpoint / mean / trapezoid triple of the Hermite–Hadamard sandwich.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HhCheck {
    pub left: f64,
    pub mid: f64,
    pub right: f64,
    pub holds: bool,
    pub slack: f64,
}

pub fn hh_check(f: &Expression, a: f64, b: f64, cfg: &QuadConfig) -> Result<HhCheck, BoundError> {
    if !(a < b) {
        return Err(CaseError::IntervalOrder { a, b }.into());
    }
    if !convexity_probe(f, a, b, CASE_PROBE_SAMPLES)? {
        return Err(CaseError::NotConvex { a, b }.into());
    }
    let m = 0.5 * (a + b);
    let left = f.evaluate(m)?;
    let right = 0.5 * (f.evaluate(a)? + f.evaluate(b)?);
    let integral = quad::integrate(f.as_fn(), a, b, cfg)?;
    let mid = integral.value / (b - a);
    let slack = integral.abs_error_estimate / (b - a) + NUMERIC_SLACK;
    Ok(HhCheck {
        left,
        mid,
        right,
        holds: left <= mid + slack && mid <= right + slack,
        slack,
    })
}

/// `int_a^b |f'(x)|^q dx`.
fn derivative_power_integral(case: &Case, cfg: &QuadConfig) -> Result<Estimate, BoundError> {
    let fp = &case.f_prime;
    let q = case.q;
    let r = quad::integrate(
        |x| fp.evaluate(x).map(|v| v.abs().powf(q)).unwrap_or(f64::NAN),
        case.a,
        case.b,
        cfg,
    )?;
    Ok(Estimate::from_quad_result(&r))
}

/// `int_a^b |x - (a+b)/2| |f'(x)|^q dx`, split at the midpoint kink.
fn midpoint_weighted_integral(case: &Case, cfg: &QuadConfig) -> Result<Estimate, BoundError> {
    let fp = &case.f_prime;
    let q = case.q;
    let m = case.midpoint();
    let cfg = cfg.clone().with_splits(&[m]);
    let r = quad::integrate(
        |x| {
            fp.evaluate(x)
                .map(|v| (x - m).abs() * v.abs().powf(q))
                .unwrap_or(f64::NAN)
        },
        case.a,
        case.b,
        &cfg,
    )?;
    Ok(Estimate::from_quad_result(&r))
}

fn require_p(bound: BoundId, case: &Case) -> Result<(), BoundError> {
    if let Some(expected) = bound.fixed_p() {
        if (case.p - expected).abs() > 1e-12 {
            return Err(BoundError::CorollaryExponent {
                bound,
                expected,
                got: case.p,
            });
        }
    }
    Ok(())
}

/// Right-hand side of `bound` on `case`, exactly as each statement
/// prescribes it.
pub fn rhs(bound: BoundId, case: &Case, cfg: &QuadConfig) -> Result<Estimate, BoundError> {
    require_p(bound, case)?;
    let (a, b, p, q) = (case.a, case.b, case.p, case.q);
    let width = b - a;
    match bound {
        BoundId::T1 => {
            let i = derivative_power_integral(case, cfg)?;
            let coeff = width.powf(1.0 / p) * p / (p + 1.0).powf(1.0 + 1.0 / p);
            Ok(i.root(q).scale(coeff))
        }
        BoundId::C1 => {
            let i = derivative_power_integral(case, cfg)?;
            let coeff = 2.0 * width.sqrt() / 3.0_f64.powf(1.5);
            Ok(i.root(2.0).scale(coeff))
        }
        BoundId::T2 => {
            let delta = case.f.evaluate(b)? - case.f.evaluate(a)?;
            let coeff = p * (p - 1.0) / ((p + 1.0) * (2.0 * p + 1.0));
            Ok(Estimate::exact(coeff * delta))
        }
        BoundId::C2Stated => {
            let delta = case.f.evaluate(b)? - case.f.evaluate(a)?;
            Ok(Estimate::exact(11.0 / 483.0 * delta))
        }
        BoundId::C2Derived => {
            let delta = case.f.evaluate(b)? - case.f.evaluate(a)?;
            Ok(Estimate::exact(11.0 / 672.0 * delta))
        }
        BoundId::T3Stated => {
            let j = midpoint_weighted_integral(case, cfg)?;
            let coeff = 2.0_f64.powf(1.0 / q) * p / ((p + 1.0) * width);
            Ok(j.root(q).scale(coeff))
        }
        BoundId::T3Derived => {
            let j = midpoint_weighted_integral(case, cfg)?;
            let coeff = p / (p + 1.0) * 2.0_f64.powf(2.0 / q - 1.0) * width.powf(1.0 - 2.0 / q);
            Ok(j.root(q).scale(coeff))
        }
        BoundId::C3Stated => {
            // printed corollary integrates over [0, 1] while the integrand
            // still references [a, b]; implemented literally
            let fp = &case.f_prime;
            let m = case.midpoint();
            let mut c = cfg.clone();
            if m > 0.0 && m < 1.0 {
                c = c.with_splits(&[m]);
            }
            let j = quad::integrate(
                |x| {
                    fp.evaluate(x)
                        .map(|v| (x - m).abs() * v.abs().powf(2.0))
                        .unwrap_or(f64::NAN)
                },
                0.0,
                1.0,
                &c,
            )?;
            let coeff = 2.0_f64.powf(1.5) / 3.0;
            Ok(Estimate::from_quad_result(&j).root(2.0).scale(coeff))
        }
        BoundId::C3Derived => {
            let j = midpoint_weighted_integral(case, cfg)?;
            Ok(j.root(2.0).scale(2.0 / 3.0))
        }
        BoundId::Da1 => {
            let da = case.f_prime.evaluate(a)?.abs();
            let db = case.f_prime.evaluate(b)?.abs();
            Ok(Estimate::exact(width * (da + db) / 8.0))
        }
        BoundId::Da2 => {
            let da = case.f_prime.evaluate(a)?.abs();
            let db = case.f_prime.evaluate(b)?.abs();
            let coeff = width / (2.0 * (p + 1.0).powf(1.0 / p));
            let mean_q = 0.5 * (da.powf(q) + db.powf(q));
            Ok(Estimate::exact(coeff * mean_q.powf(1.0 / q)))
        }
    }
}

/// Outcome of evaluating one bound on one case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub bound: BoundId,
    pub f: String,
    pub a: f64,
    pub b: f64,
    pub p: f64,
    /// Compared left-hand side: `|gap|` for absolute bounds, signed gap for
    /// the t2 family.
    pub lhs: f64,
    pub rhs: f64,
    /// `lhs - rhs`; positive beyond `slack` constitutes a counterexample.
    pub margin: f64,
    pub holds: bool,
    /// Quadrature error both sides could account for, plus the 1e-9 floor.
    pub slack: f64,
    pub quad_error: f64,
    pub converged: bool,
}

/// Evaluate `bound` on `case`: compute the gap, the right-hand side, and the
/// margin with its slack.
pub fn verdict(bound: BoundId, case: &Case, cfg: &QuadConfig) -> Result<Verdict, BoundError> {
    require_p(bound, case)?;
    let gap = lhs_gap(case, cfg)?;
    let right = rhs(bound, case, cfg)?;
    let lhs = if bound.signed() {
        gap.value
    } else {
        gap.value.abs()
    };
    let margin = lhs - right.value;
    let quad_error = gap.abs_error + right.abs_error;
    let slack = quad_error + NUMERIC_SLACK;
    Ok(Verdict {
        bound,
        f: case.source.clone(),
        a: case.a,
        b: case.b,
        p: case.p,
        lhs,
        rhs: right.value,
        margin,
        holds: margin <= slack,
        slack,
        quad_error,
        converged: gap.converged && right.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;

    fn case(src: &str, a: f64, b: f64, p: f64) -> Case {
        Case::from_source(src, a, b, p).unwrap()
    }

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn gap_examples() {
        let g = lhs_gap(&case("x^2", 0.0, 1.0, 2.0), &cfg()).unwrap();
        assert!((g.value - 1.0 / 6.0).abs() < 1e-12);

        let g = lhs_gap(&case("3*x + 1", 0.0, 2.0, 2.0), &cfg()).unwrap();
        assert!(g.value.abs() < 1e-12);

        // (1/x on [1,2]) gap = 3/4 - ln 2
        let g = lhs_gap(&case("1/x", 1.0, 2.0, 2.0), &cfg()).unwrap();
        assert!((g.value - (0.75 - std::f64::consts::LN_2)).abs() < 1e-12);
    }

    #[test]
    fn lemma_identity_examples() {
        let r = lemma_identity_residual(&case("x^2", 0.0, 1.0, 2.0), &cfg()).unwrap();
        assert!(r.residual < 1e-9, "{}", r.residual);
        assert!((r.lhs - 1.0 / 6.0).abs() < 1e-10);

        let r = lemma_identity_residual(&case("exp(x)", 0.0, 1.0, 2.0), &cfg()).unwrap();
        assert!(r.residual < 1e-9);
        // by hand: (1+e)/2 - (e-1)
        let expected = (1.0 + std::f64::consts::E) / 2.0 - (std::f64::consts::E - 1.0);
        assert!((r.lhs - expected).abs() < 1e-10);

        let r = lemma_identity_residual(&case("3*x + 1", 0.0, 2.0, 2.0), &cfg()).unwrap();
        assert!(r.residual < 1e-12);
        assert!(r.lhs.abs() < 1e-12 && r.rhs.abs() < 1e-12);
    }

    #[test]
    fn young_examples() {
        let y = young_check(1.0, 1.0, 2.0);
        assert!(y.holds && y.equality && y.lhs == 1.0 && y.rhs == 1.0);

        let y = young_check(2.0, 3.0, 2.0);
        assert!(y.holds && !y.equality);
        assert_eq!(y.lhs, 6.0);
        assert_eq!(y.rhs, 6.5);

        // a = t^((1-p)/p^2), b = t^(1/(pq)) reproduces the kernel inequality
        let t: f64 = 0.25;
        let p = 2.0;
        let q = 2.0;
        let a = t.powf((1.0 - p) / (p * p));
        let b = t.powf(1.0 / (p * q));
        let y = young_check(a, b, p);
        assert!((y.lhs - 1.0).abs() < 1e-12);
        assert!((y.rhs - kernel_eval(p, t)).abs() < 1e-12);
        assert!((y.rhs - 1.25).abs() < 1e-12);
    }

    #[test]
    fn kernel_pointwise_values() {
        assert!((kernel_eval(2.0, 0.25) - 1.25).abs() < 1e-14);
        assert!((kernel_eval(2.0, 0.01) - 5.05).abs() < 1e-12);
        // K_p(t) -> 1 as t -> 1
        for p in [1.3, 2.0, 7.0] {
            assert!((kernel_eval(p, 1.0 - 1e-12) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn kernel_moment_closed_forms() {
        let r = kernel_moment(2.0, MomentWeight::Unit, &cfg()).unwrap();
        assert!((r.value - 4.0 / 3.0).abs() < 1e-9);
        let r = kernel_moment(2.0, MomentWeight::OneMinusTwoT, &cfg()).unwrap();
        assert!((r.value - 4.0 / 15.0).abs() < 1e-9);
        let r = kernel_moment(1.1, MomentWeight::OneMinusTwoT, &cfg()).unwrap();
        assert!((r.value - 11.0 / 336.0).abs() < 1e-9);
    }

    #[test]
    fn chebyshev_examples() {
        let x = parse("x").unwrap();
        let c = chebyshev_check(&x, &x, None, 0.0, 1.0, &cfg()).unwrap();
        assert_eq!(c.orientation, Orientation::Comonotone);
        assert!(c.holds);
        assert!((c.lhs - 1.0 / 3.0).abs() < 1e-10);
        assert!((c.rhs - 0.25).abs() < 1e-10);

        let g = parse("1 - 2*x").unwrap();
        let c = chebyshev_check(&x, &g, None, 0.0, 1.0, &cfg()).unwrap();
        assert_eq!(c.orientation, Orientation::AntiMonotone);
        assert!(c.holds);
        assert!((c.lhs - (-1.0 / 6.0)).abs() < 1e-10);
        assert!(c.rhs.abs() < 1e-10);

        let k = parse("3").unwrap();
        let c = chebyshev_check(&k, &x, None, 0.0, 1.0, &cfg()).unwrap();
        assert!(c.holds);
        assert!((c.lhs - c.rhs).abs() <= c.slack);

        // sin is not monotone on (0, 4): screen must refuse
        let s = parse("sin(x)").unwrap();
        assert!(matches!(
            chebyshev_check(&s, &x, None, 0.0, 4.0, &cfg()),
            Err(ChebyshevError::MonotonicityScreen { .. })
        ));
    }

    #[test]
    fn hh_examples() {
        let h = hh_check(&parse("x^2").unwrap(), 0.0, 1.0, &cfg()).unwrap();
        assert!(h.holds);
        assert!((h.left - 0.25).abs() < 1e-12);
        assert!((h.mid - 1.0 / 3.0).abs() < 1e-12);
        assert!((h.right - 0.5).abs() < 1e-12);

        let h = hh_check(&parse("3*x + 1").unwrap(), 0.0, 2.0, &cfg()).unwrap();
        assert!(h.holds);
        assert!((h.left - h.mid).abs() < 1e-10 && (h.mid - h.right).abs() < 1e-10);

        // closed forms: sqrt(e) <= e - 1 <= (1 + e)/2
        let e = std::f64::consts::E;
        let h = hh_check(&parse("exp(x)").unwrap(), 0.0, 1.0, &cfg()).unwrap();
        assert!(h.holds);
        assert!((h.left - e.sqrt()).abs() < 1e-10);
        assert!((h.mid - (e - 1.0)).abs() < 1e-10);
        assert!((h.right - (1.0 + e) / 2.0).abs() < 1e-10);
    }

    #[test]
    fn rhs_spot_values() {
        let c = case("x^2", 0.0, 1.0, 2.0);
        let t1 = rhs(BoundId::T1, &c, &cfg()).unwrap();
        assert!((t1.value - 4.0 / 9.0).abs() < 1e-9, "{}", t1.value);

        let t2 = rhs(BoundId::T2, &c, &cfg()).unwrap();
        assert!((t2.value - 2.0 / 15.0).abs() < 1e-12);

        let t3d = rhs(BoundId::T3Derived, &c, &cfg()).unwrap();
        // (2/3) sqrt(3/8) = 1/sqrt(6)
        assert!(
            (t3d.value - 1.0 / 6.0_f64.sqrt()).abs() < 1e-9,
            "{}",
            t3d.value
        );

        let da1 = rhs(BoundId::Da1, &c, &cfg()).unwrap();
        assert!((da1.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn corollaries_reject_wrong_p() {
        let c = case("x^2", 0.0, 1.0, 3.0);
        assert!(matches!(
            rhs(BoundId::C1, &c, &cfg()),
            Err(BoundError::CorollaryExponent { .. })
        ));
        let c2 = c.with_p(2.0).unwrap();
        assert!(rhs(BoundId::C1, &c2, &cfg()).is_ok());
    }

    #[test]
    fn verdict_t1_holds_t2_violated() {
        let c = case("x^2", 0.0, 1.0, 2.0);
        let v1 = verdict(BoundId::T1, &c, &cfg()).unwrap();
        assert!(v1.holds);
        assert!((v1.lhs - 1.0 / 6.0).abs() < 1e-10);
        assert!((v1.rhs - 4.0 / 9.0).abs() < 1e-9);

        let v2 = verdict(BoundId::T2, &c, &cfg()).unwrap();
        assert!(!v2.holds, "margin={} slack={}", v2.margin, v2.slack);
        assert!((v2.margin - 1.0 / 30.0).abs() < 1e-9);
    }

    #[test]
    fn verdict_affine_zero_gap_holds() {
        let c = case("3*x + 1", 0.0, 2.0, 2.0);
        for bound in [BoundId::T1, BoundId::T3Derived, BoundId::Da1, BoundId::Da2] {
            let v = verdict(bound, &c, &cfg()).unwrap();
            assert!(v.holds, "{bound:?}");
            assert!(v.lhs.abs() < 1e-10);
        }
    }

    #[test]
    fn case_validation() {
        assert!(matches!(
            Case::from_source("x^2", 1.0, 1.0, 2.0),
            Err(CaseError::IntervalOrder { .. })
        ));
        assert!(matches!(
            Case::from_source("x^2", 0.0, 1.0, 1.0),
            Err(CaseError::ExponentRange { .. })
        ));
        assert!(matches!(
            Case::from_source("sin(x)", 0.0, 3.0, 2.0),
            Err(CaseError::NotConvex { .. })
        ));
        // f undefined at an endpoint is a domain rejection
        assert!(matches!(
            Case::from_source("1/x", 0.0, 1.0, 2.0),
            Err(CaseError::Domain(_))
        ));
        let c = Case::from_source("x^2", 0.0, 1.0, 2.0).unwrap();
        assert!((c.q() - 2.0).abs() < 1e-15);
        assert!((1.0 / c.p() + 1.0 / c.q() - 1.0).abs() < 1e-15);
    }
}
