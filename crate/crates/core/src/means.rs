//! The six special means of two positive numbers, the ordering chain
//! H <= G <= L <= I <= A, and p-logarithmic monotonicity checks.
//!
//! All means are computed in a scale-free form `a * g(b/a - 1)` built on
//! `ln_1p`/`exp_m1`, so homogeneity is exact and nearly-equal endpoints do
//! not suffer cancellation. Inputs are normalized to `a <= b`, which makes
//! symmetry exact as well.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeanError {
    #[error("means require positive inputs, got ({a}, {b})")]
    NonPositiveInput { a: f64, b: f64 },
    #[error("p-logarithmic exponent must avoid -1 and 0, got {r} (use L or I)")]
    ReservedExponent { r: f64 },
    #[error("mean of ({a:e}, {b:e}) overflows the working precision")]
    Overflow { a: f64, b: f64 },
}

/// Relative endpoint separation below which the `a = b` limiting branch is
/// taken.
const EQUAL_EPS: f64 = 1e-12;

/// Exponents within this distance of -1 or 0 are evaluated through the
/// logarithmic / identric limit formulas (removable singularities).
const EXPONENT_EPS: f64 = 1e-8;

/// One of the special means. `PLog(r)` carries the p-logarithmic exponent;
/// `r = -1` and `r = 0` are exposed as `Logarithmic` and `Identric`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MeanKind {
    Arithmetic,
    Geometric,
    Harmonic,
    Logarithmic,
    Identric,
    PLog(f64),
}

impl MeanKind {
    pub fn symbol(&self) -> String {
        match self {
            MeanKind::Arithmetic => "A".to_owned(),
            MeanKind::Geometric => "G".to_owned(),
            MeanKind::Harmonic => "H".to_owned(),
            MeanKind::Logarithmic => "L".to_owned(),
            MeanKind::Identric => "I".to_owned(),
            MeanKind::PLog(r) => format!("L_{r}"),
        }
    }
}

fn check_domain(a: f64, b: f64) -> Result<(), MeanError> {
    if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(MeanError::NonPositiveInput { a, b })
    }
}

/// Compute `mean(kind)(a, b)` for `a, b > 0`, with the `a = b` limit taken
/// when the endpoints agree to within `1e-12` relative.
pub fn mean(kind: MeanKind, a: f64, b: f64) -> Result<f64, MeanError> {
    check_domain(a, b)?;
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    if hi - lo <= EQUAL_EPS * hi {
        // all six means coincide at a = b; midpoint keeps symmetry exact
        return Ok(0.5 * (lo + hi));
    }
    // u = b/a - 1 > 0; every formula below is `lo * g(u)`
    let u = (hi - lo) / lo;
    if !u.is_finite() {
        return Err(MeanError::Overflow { a, b });
    }
    let value = match kind {
        MeanKind::Arithmetic => lo * (1.0 + 0.5 * u),
        MeanKind::Geometric => lo * (1.0 + u).sqrt(),
        MeanKind::Harmonic => lo * (2.0 * (1.0 + u) / (2.0 + u)),
        MeanKind::Logarithmic => lo * (u / u.ln_1p()),
        MeanKind::Identric => {
            // I = (1/e) (b^b / a^a)^(1/(b-a)) = a exp(((1+u)/u) ln(1+u) - 1)
            lo * (((1.0 + u) / u) * u.ln_1p() - 1.0).exp()
        }
        MeanKind::PLog(r) => {
            if (r + 1.0).abs() < EXPONENT_EPS {
                return mean(MeanKind::Logarithmic, lo, hi);
            }
            if r.abs() < EXPONENT_EPS {
                return mean(MeanKind::Identric, lo, hi);
            }
            // L_r = a [ ((1+u)^(r+1) - 1) / ((r+1) u) ]^(1/r)
            let num = ((r + 1.0) * u.ln_1p()).exp_m1();
            lo * (num / ((r + 1.0) * u)).powf(1.0 / r)
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(MeanError::Overflow { a, b })
    }
}

/// Construct a `PLog` kind, rejecting the reserved exponents -1 and 0.
pub fn plog(r: f64) -> Result<MeanKind, MeanError> {
    if r == -1.0 || r == 0.0 {
        Err(MeanError::ReservedExponent { r })
    } else {
        Ok(MeanKind::PLog(r))
    }
}

/// One link of the ordering chain: the mean, its value, and whether it sits
/// at least as high as its predecessor (within relative slack).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainEntry {
    pub kind: MeanKind,
    pub value: f64,
    /// false when this value drops below the previous one beyond the slack
    pub in_order: bool,
}

/// Relative slack used when asserting the chain and monotonicity orderings.
pub const ORDER_SLACK: f64 = 1e-12;

/// Evaluate H, G, L, I, A in chain order and flag any link that violates
/// `H <= G <= L <= I <= A` beyond `1e-12` relative slack.
pub fn chain_check(a: f64, b: f64) -> Result<Vec<ChainEntry>, MeanError> {
    let kinds = [
        MeanKind::Harmonic,
        MeanKind::Geometric,
        MeanKind::Logarithmic,
        MeanKind::Identric,
        MeanKind::Arithmetic,
    ];
    let mut out = Vec::with_capacity(kinds.len());
    let mut prev: Option<f64> = None;
    for kind in kinds {
        let value = mean(kind, a, b)?;
        let in_order = match prev {
            None => true,
            Some(p) => value >= p - ORDER_SLACK * p.abs().max(value.abs()),
        };
        out.push(ChainEntry {
            kind,
            value,
            in_order,
        });
        prev = Some(value);
    }
    Ok(out)
}

/// True when the chain holds in full.
pub fn chain_holds(entries: &[ChainEntry]) -> bool {
    entries.iter().all(|e| e.in_order)
}

/// Check that the p-logarithmic family is nondecreasing along `exponents`
/// (strictly increasing list; -1 and 0 map to L and I). Accepts `a = b`,
/// where every value coincides.
pub fn lp_monotonicity_check(a: f64, b: f64, exponents: &[f64]) -> Result<bool, MeanError> {
    check_domain(a, b)?;
    assert!(
        exponents.windows(2).all(|w| w[0] < w[1]),
        "exponents must be strictly increasing"
    );
    let mut prev: Option<f64> = None;
    for &r in exponents {
        let kind = if r == -1.0 {
            MeanKind::Logarithmic
        } else if r == 0.0 {
            MeanKind::Identric
        } else {
            MeanKind::PLog(r)
        };
        let value = mean(kind, a, b)?;
        if let Some(p) = prev {
            if value < p - ORDER_SLACK * p.abs().max(value.abs()) {
                return Ok(false);
            }
        }
        prev = Some(value);
    }
    Ok(true)
}
