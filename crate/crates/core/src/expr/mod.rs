//! Univariate real-valued expressions: AST, evaluation, symbolic
//! differentiation, canonical printing, and a convexity screen.
//!
//! Expressions are immutable trees over a single variable `x`. Power nodes
//! with a non-constant exponent are normalized to `exp(exponent * ln(base))`
//! at construction, so differentiation only ever needs the constant-exponent
//! power rule.

mod parse;

pub use parse::{parse, ParseDiagnostic};

use std::fmt;
use thiserror::Error;

/// Evaluation failed because `x` left the domain of the expression.
///
/// Non-finite intermediate values are reported as domain errors rather than
/// silently propagated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("ln of non-positive value {arg} at x = {x}")]
    LogNonPositive { x: f64, arg: f64 },
    #[error("division by zero at x = {x}")]
    DivisionByZero { x: f64 },
    #[error("sqrt of negative value {arg} at x = {x}")]
    SqrtNegative { x: f64, arg: f64 },
    #[error("power {base}^{exponent} undefined at x = {x}")]
    PowerUndefined { x: f64, base: f64, exponent: f64 },
    #[error("non-finite intermediate value at x = {x}")]
    NonFinite { x: f64 },
}

/// Expression tree of a univariate real function of `x`.
///
/// `Signum` is not part of the surface grammar; it exists so that the
/// derivative of `abs(u)` (namely `sign(u) * u'`, with `sign(0) = 0`) is
/// itself an expression. The parser accepts `sign(...)` so printed
/// derivatives re-parse.
#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Constant(f64),
    Variable,
    Neg(Box<Expression>),
    Add(Box<Expression>, Box<Expression>),
    Sub(Box<Expression>, Box<Expression>),
    Mul(Box<Expression>, Box<Expression>),
    Div(Box<Expression>, Box<Expression>),
    Pow(Box<Expression>, Box<Expression>),
    Exp(Box<Expression>),
    Ln(Box<Expression>),
    Sin(Box<Expression>),
    Cos(Box<Expression>),
    Abs(Box<Expression>),
    Sqrt(Box<Expression>),
    Signum(Box<Expression>),
}

impl Expression {
    /// Finite constant node. Panics on NaN/infinity: constants must be finite.
    pub fn constant(value: f64) -> Self {
        assert!(
            value.is_finite(),
            "constant nodes must be finite, got {value}"
        );
        Expression::Constant(value)
    }

    pub fn variable() -> Self {
        Expression::Variable
    }

    pub fn neg(e: Expression) -> Self {
        match e {
            Expression::Constant(c) => Expression::Constant(-c),
            Expression::Neg(inner) => *inner,
            other => Expression::Neg(Box::new(other)),
        }
    }

    pub fn add(lhs: Expression, rhs: Expression) -> Self {
        match (lhs, rhs) {
            (Expression::Constant(a), Expression::Constant(b)) if (a + b).is_finite() => {
                Expression::Constant(a + b)
            }
            (Expression::Constant(z), r) if z == 0.0 => r,
            (l, Expression::Constant(z)) if z == 0.0 => l,
            (l, r) => Expression::Add(Box::new(l), Box::new(r)),
        }
    }

    pub fn sub(lhs: Expression, rhs: Expression) -> Self {
        match (lhs, rhs) {
            (Expression::Constant(a), Expression::Constant(b)) if (a - b).is_finite() => {
                Expression::Constant(a - b)
            }
            (l, Expression::Constant(z)) if z == 0.0 => l,
            (Expression::Constant(z), r) if z == 0.0 => Expression::neg(r),
            (l, r) => Expression::Sub(Box::new(l), Box::new(r)),
        }
    }

    pub fn mul(lhs: Expression, rhs: Expression) -> Self {
        match (lhs, rhs) {
            (Expression::Constant(a), Expression::Constant(b)) if (a * b).is_finite() => {
                Expression::Constant(a * b)
            }
            (Expression::Constant(z), _) | (_, Expression::Constant(z)) if z == 0.0 => {
                Expression::Constant(0.0)
            }
            (Expression::Constant(o), r) if o == 1.0 => r,
            (l, Expression::Constant(o)) if o == 1.0 => l,
            (l, r) => Expression::Mul(Box::new(l), Box::new(r)),
        }
    }

    pub fn div(lhs: Expression, rhs: Expression) -> Self {
        match (lhs, rhs) {
            (Expression::Constant(a), Expression::Constant(b))
                if b != 0.0 && (a / b).is_finite() =>
            {
                Expression::Constant(a / b)
            }
            (l, Expression::Constant(o)) if o == 1.0 => l,
            (l, r) => Expression::Div(Box::new(l), Box::new(r)),
        }
    }

    /// Power node. A non-constant exponent is normalized to
    /// `exp(exponent * ln(base))` so the power rule stays total.
    pub fn pow(base: Expression, exponent: Expression) -> Self {
        match (base, exponent) {
            (Expression::Constant(b), Expression::Constant(e)) if b.powf(e).is_finite() => {
                Expression::Constant(b.powf(e))
            }
            (b, Expression::Constant(e)) => {
                if e == 1.0 {
                    b
                } else if e == 0.0 {
                    Expression::Constant(1.0)
                } else {
                    Expression::Pow(Box::new(b), Box::new(Expression::Constant(e)))
                }
            }
            (b, e) => Expression::exp(Expression::mul(e, Expression::ln(b))),
        }
    }

    pub fn exp(e: Expression) -> Self {
        Expression::Exp(Box::new(e))
    }

    pub fn ln(e: Expression) -> Self {
        Expression::Ln(Box::new(e))
    }

    pub fn sin(e: Expression) -> Self {
        Expression::Sin(Box::new(e))
    }

    pub fn cos(e: Expression) -> Self {
        Expression::Cos(Box::new(e))
    }

    pub fn abs(e: Expression) -> Self {
        Expression::Abs(Box::new(e))
    }

    pub fn sqrt(e: Expression) -> Self {
        Expression::Sqrt(Box::new(e))
    }

    pub fn signum(e: Expression) -> Self {
        Expression::Signum(Box::new(e))
    }

    /// Evaluate at `x` with standard real semantics.
    ///
    /// Any non-finite intermediate (overflow, `0^negative`, `ln` of a
    /// non-positive value, division by zero, ...) yields a [`DomainError`].
    pub fn evaluate(&self, x: f64) -> Result<f64, DomainError> {
        let v = match self {
            Expression::Constant(c) => *c,
            Expression::Variable => x,
            Expression::Neg(u) => -u.evaluate(x)?,
            Expression::Add(l, r) => l.evaluate(x)? + r.evaluate(x)?,
            Expression::Sub(l, r) => l.evaluate(x)? - r.evaluate(x)?,
            Expression::Mul(l, r) => l.evaluate(x)? * r.evaluate(x)?,
            Expression::Div(l, r) => {
                let den = r.evaluate(x)?;
                if den == 0.0 {
                    return Err(DomainError::DivisionByZero { x });
                }
                l.evaluate(x)? / den
            }
            Expression::Pow(b, e) => {
                let base = b.evaluate(x)?;
                let exponent = e.evaluate(x)?;
                if base == 0.0 && exponent < 0.0 {
                    return Err(DomainError::PowerUndefined { x, base, exponent });
                }
                let r = base.powf(exponent);
                if r.is_nan() {
                    return Err(DomainError::PowerUndefined { x, base, exponent });
                }
                r
            }
            Expression::Exp(u) => u.evaluate(x)?.exp(),
            Expression::Ln(u) => {
                let arg = u.evaluate(x)?;
                if arg <= 0.0 {
                    return Err(DomainError::LogNonPositive { x, arg });
                }
                arg.ln()
            }
            Expression::Sin(u) => u.evaluate(x)?.sin(),
            Expression::Cos(u) => u.evaluate(x)?.cos(),
            Expression::Abs(u) => u.evaluate(x)?.abs(),
            Expression::Sqrt(u) => {
                let arg = u.evaluate(x)?;
                if arg < 0.0 {
                    return Err(DomainError::SqrtNegative { x, arg });
                }
                arg.sqrt()
            }
            Expression::Signum(u) => {
                let arg = u.evaluate(x)?;
                if arg == 0.0 {
                    0.0
                } else {
                    arg.signum()
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DomainError::NonFinite { x })
        }
    }

    /// Symbolic derivative with respect to `x`. Total on the supported AST;
    /// `d/dx abs(u) = sign(u) * u'` with `sign(0) = 0`, and `d/dx sign(u) = 0`
    /// (the kink set has measure zero).
    pub fn differentiate(&self) -> Expression {
        use Expression as E;
        match self {
            E::Constant(_) => E::Constant(0.0),
            E::Variable => E::Constant(1.0),
            E::Neg(u) => E::neg(u.differentiate()),
            E::Add(l, r) => E::add(l.differentiate(), r.differentiate()),
            E::Sub(l, r) => E::sub(l.differentiate(), r.differentiate()),
            E::Mul(l, r) => E::add(
                E::mul(l.differentiate(), (**r).clone()),
                E::mul((**l).clone(), r.differentiate()),
            ),
            E::Div(l, r) => E::div(
                E::sub(
                    E::mul(l.differentiate(), (**r).clone()),
                    E::mul((**l).clone(), r.differentiate()),
                ),
                E::mul((**r).clone(), (**r).clone()),
            ),
            E::Pow(b, e) => match **e {
                // constructors guarantee constant exponents, but stay total
                E::Constant(c) => E::mul(
                    E::mul(E::Constant(c), E::pow((**b).clone(), E::Constant(c - 1.0))),
                    b.differentiate(),
                ),
                _ => E::exp(E::mul((**e).clone(), E::ln((**b).clone()))).differentiate(),
            },
            E::Exp(u) => E::mul(E::exp((**u).clone()), u.differentiate()),
            E::Ln(u) => E::div(u.differentiate(), (**u).clone()),
            E::Sin(u) => E::mul(E::cos((**u).clone()), u.differentiate()),
            E::Cos(u) => E::neg(E::mul(E::sin((**u).clone()), u.differentiate())),
            E::Abs(u) => E::mul(E::signum((**u).clone()), u.differentiate()),
            E::Sqrt(u) => E::div(
                u.differentiate(),
                E::mul(E::Constant(2.0), E::sqrt((**u).clone())),
            ),
            E::Signum(_) => E::Constant(0.0),
        }
    }

    /// Closure view of the expression that maps domain errors to NaN,
    /// for handing to the quadrature engine (which reports non-finite
    /// samples as errors).
    pub fn as_fn(&self) -> impl Fn(f64) -> f64 + '_ {
        move |x| self.evaluate(x).unwrap_or(f64::NAN)
    }
}

/// Raw second-difference slack for the convexity screen, scaled by the local
/// function magnitude.
fn convexity_tolerance(fx: f64) -> f64 {
    1e-9 * (1.0 + fx.abs())
}

/// Necessary-condition convexity screen: second central differences at
/// `samples` equispaced interior points of `[a, b]` must all be
/// `>= -tolerance`. Not a proof of convexity.
pub fn convexity_probe(
    e: &Expression,
    a: f64,
    b: f64,
    samples: usize,
) -> Result<bool, DomainError> {
    assert!(a < b, "convexity_probe requires a < b");
    assert!(samples >= 3, "convexity_probe requires samples >= 3");
    let step = (b - a) / (samples as f64 + 1.0);
    let h = 0.5 * step;
    for i in 1..=samples {
        let x = a + step * i as f64;
        let fm = e.evaluate(x - h)?;
        let f0 = e.evaluate(x)?;
        let fp = e.evaluate(x + h)?;
        let second_diff = fm - 2.0 * f0 + fp;
        if second_diff < -convexity_tolerance(f0) {
            return Ok(false);
        }
    }
    Ok(true)
}

// Printing precedence levels; `atom` is the grammar's tightest production.
const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Expression {
    fn precedence(&self) -> u8 {
        match self {
            Expression::Add(..) | Expression::Sub(..) => PREC_ADD,
            Expression::Mul(..) | Expression::Div(..) => PREC_MUL,
            Expression::Neg(_) => PREC_NEG,
            Expression::Constant(c) if c.is_sign_negative() => PREC_NEG,
            Expression::Pow(..) => PREC_POW,
            _ => PREC_ATOM,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let needs_parens = self.precedence() < min_prec;
        if needs_parens {
            write!(f, "(")?;
        }
        match self {
            Expression::Constant(c) => {
                // is_sign_negative also catches -0.0, which must print with
                // negation precedence so it re-parses to the same constant
                let (sign, mag) = if c.is_sign_negative() {
                    ("-", -c)
                } else {
                    ("", *c)
                };
                // integral values print without the trailing ".0"; both forms
                // re-parse to the identical constant
                if mag.fract() == 0.0 && mag < 1e15 {
                    write!(f, "{sign}{mag:.0}")?;
                } else {
                    write!(f, "{sign}{mag:?}")?;
                }
            }
            Expression::Variable => write!(f, "x")?,
            Expression::Neg(u) => {
                write!(f, "-")?;
                u.fmt_prec(f, PREC_NEG)?;
            }
            Expression::Add(l, r) => {
                l.fmt_prec(f, PREC_ADD)?;
                write!(f, " + ")?;
                r.fmt_prec(f, PREC_ADD + 1)?;
            }
            Expression::Sub(l, r) => {
                l.fmt_prec(f, PREC_ADD)?;
                write!(f, " - ")?;
                r.fmt_prec(f, PREC_ADD + 1)?;
            }
            Expression::Mul(l, r) => {
                l.fmt_prec(f, PREC_MUL)?;
                write!(f, " * ")?;
                r.fmt_prec(f, PREC_MUL + 1)?;
            }
            Expression::Div(l, r) => {
                l.fmt_prec(f, PREC_MUL)?;
                write!(f, " / ")?;
                r.fmt_prec(f, PREC_MUL + 1)?;
            }
            Expression::Pow(b, e) => {
                b.fmt_prec(f, PREC_ATOM)?;
                write!(f, "^")?;
                e.fmt_prec(f, PREC_NEG)?;
            }
            Expression::Exp(u) => write_func(f, "exp", u)?,
            Expression::Ln(u) => write_func(f, "ln", u)?,
            Expression::Sin(u) => write_func(f, "sin", u)?,
            Expression::Cos(u) => write_func(f, "cos", u)?,
            Expression::Abs(u) => write_func(f, "abs", u)?,
            Expression::Sqrt(u) => write_func(f, "sqrt", u)?,
            Expression::Signum(u) => write_func(f, "sign", u)?,
        }
        if needs_parens {
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn write_func(f: &mut fmt::Formatter<'_>, name: &str, arg: &Expression) -> fmt::Result {
    write!(f, "{name}(")?;
    arg.fmt_prec(f, 0)?;
    write!(f, ")")
}

impl fmt::Display for Expression {
    /// Canonical printing: the output re-parses to a structurally identical
    /// tree.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
