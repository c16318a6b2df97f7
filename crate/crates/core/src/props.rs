//! Means-language specializations of the audited bounds: the six printed
//! propositions for `f = x^n` (p1-p3) and `f = 1/x` (p4-p6), plus
//! cross-checks of each printed right-hand side against the generic bounds
//! pipeline applied to the same function.
//!
//! The left-hand sides are read with `L_n` meaning `L_n^n(a, b)`, because
//! `(1/(b-a)) int_a^b x^n dx = L_n^n` exactly; the literal reading stays
//! available behind [`LnReading::Literal`] so the discrepancy itself can be
//! audited.

use crate::bounds::{self, BoundError, BoundId, Case, CaseError, Estimate};
use crate::expr::Expression;
use crate::means::{self, MeanKind};
use crate::quad::{self, QuadConfig};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PropId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
}

impl PropId {
    pub const ALL: [PropId; 6] = [
        PropId::P1,
        PropId::P2,
        PropId::P3,
        PropId::P4,
        PropId::P5,
        PropId::P6,
    ];

    pub fn token(&self) -> &'static str {
        match self {
            PropId::P1 => "p1",
            PropId::P2 => "p2",
            PropId::P3 => "p3",
            PropId::P4 => "p4",
            PropId::P5 => "p5",
            PropId::P6 => "p6",
        }
    }

    pub fn from_token(token: &str) -> Option<PropId> {
        PropId::ALL.iter().copied().find(|p| p.token() == token)
    }

    /// p1-p3 specialize the bounds to monomials and need the degree n.
    pub fn needs_degree(&self) -> bool {
        matches!(self, PropId::P1 | PropId::P2 | PropId::P3)
    }

    /// Signed comparison for the t2-derived propositions, absolute otherwise.
    pub fn signed(&self) -> bool {
        matches!(self, PropId::P2 | PropId::P5)
    }

    /// Parent bound whose generic evaluation the printed form is checked
    /// against.
    pub fn parent(&self) -> BoundId {
        match self {
            PropId::P1 | PropId::P4 => BoundId::T1,
            PropId::P2 | PropId::P5 => BoundId::T2,
            PropId::P3 | PropId::P6 => BoundId::T3Stated,
        }
    }

    /// Propositions that are exact substitutions of a sound parent.
    pub fn sound(&self) -> bool {
        matches!(self, PropId::P4)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LnReading {
    /// `L_n` read as `L_n^n` (matches the integral mean of `x^n`); default.
    MeanPower,
    /// `L_n` read literally as the p-logarithmic mean itself.
    Literal,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PropError {
    #[error("proposition requires 0 < a < b, got ({a}, {b})")]
    IntervalOrder { a: f64, b: f64 },
    #[error("proposition requires p > 1, got {p}")]
    ExponentRange { p: f64 },
    #[error("{id:?} requires integer degree n >= 2")]
    DegreeRequired { id: PropId },
    #[error(transparent)]
    Means(#[from] means::MeanError),
    #[error(transparent)]
    Bound(#[from] BoundError),
    #[error(transparent)]
    Quad(#[from] quad::QuadError),
}

impl From<CaseError> for PropError {
    fn from(e: CaseError) -> Self {
        PropError::Bound(BoundError::Case(e))
    }
}

/// One proposition instance on `0 < a < b` with exponent `p > 1` and, for
/// p1-p3, the monomial degree `n >= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropCase {
    pub id: PropId,
    pub a: f64,
    pub b: f64,
    pub p: f64,
    pub n: Option<u32>,
}

impl PropCase {
    pub fn new(id: PropId, a: f64, b: f64, p: f64, n: Option<u32>) -> Result<PropCase, PropError> {
        if !(a > 0.0 && a < b) || !a.is_finite() || !b.is_finite() {
            return Err(PropError::IntervalOrder { a, b });
        }
        if !(p > 1.0) || !p.is_finite() {
            return Err(PropError::ExponentRange { p });
        }
        if id.needs_degree() && n.is_none_or(|n| n < 2) {
            return Err(PropError::DegreeRequired { id });
        }
        let n = if id.needs_degree() { n } else { None };
        Ok(PropCase { id, a, b, p, n })
    }

    pub fn q(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    /// The function the proposition specializes to: `x^n` or `1/x`.
    pub fn function(&self) -> Expression {
        match self.n {
            Some(n) => Expression::pow(Expression::variable(), Expression::constant(n as f64)),
            None => Expression::div(Expression::constant(1.0), Expression::variable()),
        }
    }

    fn degree(&self) -> f64 {
        self.n.expect("degree-bearing proposition") as f64
    }
}

/// `L_n^n(a, b) = (b^(n+1) - a^(n+1)) / ((n+1)(b-a))`, the integral mean of
/// `x^n`, in a cancellation-free form for nearly equal endpoints.
fn ln_power_mean(a: f64, b: f64, n: f64) -> f64 {
    let u = (b - a) / a;
    a.powf(n) * ((n + 1.0) * u.ln_1p()).exp_m1() / ((n + 1.0) * u)
}

/// Printed left-hand side of the proposition (p2 and p5 signed).
pub fn prop_lhs(case: &PropCase) -> Result<f64, PropError> {
    prop_lhs_with_reading(case, LnReading::MeanPower)
}

pub fn prop_lhs_with_reading(case: &PropCase, reading: LnReading) -> Result<f64, PropError> {
    let (a, b) = (case.a, case.b);
    let value = match case.id {
        PropId::P1 | PropId::P2 | PropId::P3 => {
            let n = case.degree();
            let arithmetic = 0.5 * (a.powf(n) + b.powf(n));
            let ln_term = match reading {
                LnReading::MeanPower => ln_power_mean(a, b, n),
                LnReading::Literal => means::mean(MeanKind::PLog(n), a, b)?,
            };
            arithmetic - ln_term
        }
        PropId::P4 | PropId::P5 | PropId::P6 => {
            let arithmetic = 0.5 * (1.0 / a + 1.0 / b);
            let log_mean = means::mean(MeanKind::Logarithmic, a, b)?;
            arithmetic - 1.0 / log_mean
        }
    };
    Ok(if case.id.signed() { value } else { value.abs() })
}

/// Printed right-hand side of the proposition.
pub fn prop_rhs(case: &PropCase, cfg: &QuadConfig) -> Result<Estimate, PropError> {
    let (a, b, p, q) = (case.a, case.b, case.p, case.q());
    let width = b - a;
    let m = 0.5 * (a + b);
    match case.id {
        PropId::P1 => {
            let n = case.degree();
            let arithmetic = means::mean(MeanKind::Arithmetic, a, b)?;
            let coeff = n * p * width / (p + 1.0).powf(1.0 + 1.0 / p);
            Ok(Estimate::exact(coeff * arithmetic.powf(n - 1.0)))
        }
        PropId::P2 => {
            let n = case.degree();
            let coeff = p * (p - 1.0) / ((p + 1.0) * (2.0 * p + 1.0));
            Ok(Estimate::exact(coeff * (b.powf(n) - a.powf(n))))
        }
        PropId::P3 => {
            let n = case.degree();
            let cfg = cfg.clone().with_splits(&[m]);
            let j = quad::integrate(
                |x: f64| (x - m).abs() * (n * x.powf(n - 1.0)).powf(q),
                a,
                b,
                &cfg,
            )?;
            let coeff = 2.0_f64.powf(1.0 / q) * p / ((p + 1.0) * width);
            Ok(Estimate::from_quad_result(&j).root(q).scale(coeff))
        }
        PropId::P4 => {
            let i = quad::integrate(|x: f64| x.powf(-2.0 * q), a, b, cfg)?;
            let coeff = p * width.powf(1.0 / p) / (p + 1.0).powf(1.0 + 1.0 / p);
            Ok(Estimate::from_quad_result(&i).root(q).scale(coeff))
        }
        PropId::P5 => {
            let harmonic = means::mean(MeanKind::Harmonic, a, b)?;
            let coeff = 2.0 * p * (p - 1.0) / ((p + 1.0) * (2.0 * p + 1.0));
            Ok(Estimate::exact(coeff / harmonic))
        }
        PropId::P6 => {
            let cfg = cfg.clone().with_splits(&[m]);
            let j = quad::integrate(|x: f64| (x - m).abs() * x.powf(-2.0 * q), a, b, &cfg)?;
            let coeff = 2.0_f64.powf(1.0 / q) * p / ((p + 1.0) * width);
            Ok(Estimate::from_quad_result(&j).root(q).scale(coeff))
        }
    }
}

/// Printed right-hand side compared against the parent bound's generic
/// right-hand side on the same function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossCheck {
    pub printed: f64,
    pub theorem: f64,
    /// printed / theorem; negative for p5, where the printed side flips sign.
    pub ratio: f64,
    pub agree: bool,
}

/// Relative agreement tolerance for exact-substitution propositions.
pub const CROSSCHECK_REL_TOL: f64 = 1e-8;

pub fn prop_crosscheck(case: &PropCase, cfg: &QuadConfig) -> Result<CrossCheck, PropError> {
    let printed = prop_rhs(case, cfg)?.value;
    let generic_case = Case::new(case.function(), case.a, case.b, case.p)?;
    let theorem = bounds::rhs(case.id.parent(), &generic_case, cfg)?.value;
    let ratio = printed / theorem;
    let agree = (printed - theorem).abs() <= CROSSCHECK_REL_TOL * theorem.abs().max(1e-300);
    Ok(CrossCheck {
        printed,
        theorem,
        ratio,
        agree,
    })
}

/// Verdict-shaped evaluation of one proposition: printed lhs vs printed rhs.
pub fn prop_verdict(case: &PropCase, cfg: &QuadConfig) -> Result<bounds::Verdict, PropError> {
    let lhs = prop_lhs(case)?;
    let rhs = prop_rhs(case, cfg)?;
    let margin = lhs - rhs.value;
    let quad_error = rhs.abs_error;
    let slack = quad_error + bounds::NUMERIC_SLACK;
    Ok(bounds::Verdict {
        bound: case.id.parent(),
        f: case.function().to_string(),
        a: case.a,
        b: case.b,
        p: case.p,
        lhs,
        rhs: rhs.value,
        margin,
        holds: margin <= slack,
        slack,
        quad_error,
        converged: rhs.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    fn pc(id: PropId, a: f64, b: f64, p: f64, n: Option<u32>) -> PropCase {
        PropCase::new(id, a, b, p, n).unwrap()
    }

    #[test]
    fn lhs_examples() {
        // |A(1,4) - L_2^2(1,2)| = |5/2 - 7/3| = 1/6
        let v = prop_lhs(&pc(PropId::P1, 1.0, 2.0, 2.0, Some(2))).unwrap();
        assert!((v - 1.0 / 6.0).abs() < 1e-14, "{v}");

        // |A(1, 1/2) - 1/L(1,2)| = 3/4 - ln 2
        let v = prop_lhs(&pc(PropId::P4, 1.0, 2.0, 2.0, None)).unwrap();
        assert!((v - (0.75 - std::f64::consts::LN_2)).abs() < 1e-14, "{v}");

        // degenerate interval limit
        let v = prop_lhs(&pc(PropId::P1, 1.0, 1.0 + 1e-9, 2.0, Some(2))).unwrap();
        assert!(v.abs() < 1e-9);
    }

    #[test]
    fn lhs_literal_reading_differs() {
        let case = pc(PropId::P1, 1.0, 2.0, 2.0, Some(2));
        let power = prop_lhs_with_reading(&case, LnReading::MeanPower).unwrap();
        let literal = prop_lhs_with_reading(&case, LnReading::Literal).unwrap();
        // |A - L_2| = |5/2 - sqrt(7/3)|
        assert!((literal - (2.5 - (7.0_f64 / 3.0).sqrt())).abs() < 1e-14);
        assert!((power - literal).abs() > 0.5);
    }

    #[test]
    fn rhs_examples() {
        let v = prop_rhs(&pc(PropId::P1, 1.0, 2.0, 2.0, Some(2)), &cfg()).unwrap();
        // 2*2*1/3^(3/2) * A(1,2) = 2/sqrt(3) ~ 1.1547
        assert!(
            (v.value - 2.0 / 3.0_f64.sqrt()).abs() < 1e-12,
            "{}",
            v.value
        );

        let v = prop_rhs(&pc(PropId::P2, 1.0, 2.0, 2.0, Some(2)), &cfg()).unwrap();
        assert!((v.value - 0.4).abs() < 1e-14);

        let v = prop_rhs(&pc(PropId::P5, 1.0, 2.0, 2.0, None), &cfg()).unwrap();
        assert!((v.value - 0.2).abs() < 1e-14);
    }

    #[test]
    fn crosscheck_p4_p6_exact_substitutions() {
        for (id, p) in [(PropId::P4, 2.0), (PropId::P6, 2.0), (PropId::P4, 1.5)] {
            let c = prop_crosscheck(&pc(id, 1.0, 2.0, p, None), &cfg()).unwrap();
            assert!(
                c.agree,
                "{id:?}: printed={} theorem={}",
                c.printed, c.theorem
            );
        }
    }

    #[test]
    fn crosscheck_p1_disagrees_with_recorded_ratio() {
        let c = prop_crosscheck(&pc(PropId::P1, 1.0, 2.0, 2.0, Some(2)), &cfg()).unwrap();
        assert!(!c.agree);
        assert!((c.printed - 2.0 / 3.0_f64.sqrt()).abs() < 1e-9);
        // t1 generic: (2/3^(3/2)) * sqrt(28/3), by hand antidifferentiation
        let theorem_closed = 2.0 / 27.0_f64.sqrt() * (28.0_f64 / 3.0).sqrt();
        assert!((c.theorem - theorem_closed).abs() < 1e-8, "{}", c.theorem);
        assert!(c.ratio.is_finite());
    }

    #[test]
    fn crosscheck_p5_flips_sign() {
        let c = prop_crosscheck(&pc(PropId::P5, 1.0, 2.0, 2.0, None), &cfg()).unwrap();
        assert!(!c.agree);
        // printed rhs positive, t2-generic rhs negative: ratio (a+b)/(a-b) = -3
        assert!((c.ratio + 3.0).abs() < 1e-9, "{}", c.ratio);
    }

    #[test]
    fn p1_ratio_is_scale_invariant() {
        let base = prop_crosscheck(&pc(PropId::P1, 1.0, 2.0, 2.0, Some(2)), &cfg()).unwrap();
        for lambda in [0.5, 3.0, 10.0] {
            let scaled =
                prop_crosscheck(&pc(PropId::P1, lambda, 2.0 * lambda, 2.0, Some(2)), &cfg())
                    .unwrap();
            let rel = (scaled.ratio - base.ratio).abs() / base.ratio.abs();
            assert!(
                rel < 1e-10,
                "lambda={lambda}: {} vs {}",
                scaled.ratio,
                base.ratio
            );
        }
    }

    #[test]
    fn degree_one_gap_vanishes_via_generic_pipeline() {
        // n = 1 is excluded from the propositions (A = L_1 identically), but
        // the generic gap confirms the boundary value 0
        let case = Case::new(
            Expression::pow(Expression::variable(), Expression::constant(1.0)),
            1.0,
            2.0,
            2.0,
        )
        .unwrap();
        let gap = bounds::lhs_gap(&case, &cfg()).unwrap();
        assert!(gap.value.abs() < 1e-12);
    }

    #[test]
    fn validation() {
        assert!(matches!(
            PropCase::new(PropId::P1, 1.0, 2.0, 2.0, None),
            Err(PropError::DegreeRequired { .. })
        ));
        assert!(matches!(
            PropCase::new(PropId::P1, 1.0, 2.0, 2.0, Some(1)),
            Err(PropError::DegreeRequired { .. })
        ));
        assert!(matches!(
            PropCase::new(PropId::P4, -1.0, 2.0, 2.0, None),
            Err(PropError::IntervalOrder { .. })
        ));
        assert!(matches!(
            PropCase::new(PropId::P4, 1.0, 2.0, 1.0, None),
            Err(PropError::ExponentRange { .. })
        ));
        // n ignored for the 1/x propositions
        let c = PropCase::new(PropId::P5, 1.0, 2.0, 2.0, Some(4)).unwrap();
        assert_eq!(c.n, None);
    }
}
