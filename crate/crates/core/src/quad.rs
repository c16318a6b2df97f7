//! Adaptive numerical integration with error estimates.
//!
//! The base rule is the 7-point Gauss / 15-point Kronrod pair, which is exact
//! for polynomials up to degree 22 and yields a per-interval error estimate
//! from the difference of the two embedded rules. Adaptivity is
//! worst-interval-first bisection. Callers pass known interior kinks as split
//! points; the engine never detects kinks on its own.
//!
//! [`integrate_endpoint_singular`] additionally pre-grades the interval
//! geometrically (ratio 1/4) toward both endpoints so integrably singular
//! endpoints such as `t^a` with `a > -1` converge.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use thiserror::Error;

/// Gauss-Kronrod abscissae for the 15-point rule on [-1, 1] (positive half).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

/// Weights of the embedded 7-point Gauss rule.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Weights of the 15-point Kronrod rule.
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Function evaluations consumed by one application of the base rule.
pub const RULE_EVALS: usize = 15;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("integration requires a < b, got [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error("integrand is not finite at x = {x}")]
    NonFiniteSample { x: f64 },
}

/// Tolerances and budget for one integration.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_evals: usize,
    /// Known interior kinks; intervals are pre-split here before refinement.
    /// Must be strictly increasing and strictly inside the interval.
    pub split_points: Vec<f64>,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_evals: 100_000,
            split_points: Vec::new(),
        }
    }
}

impl QuadConfig {
    pub fn with_tol(tol: f64) -> Self {
        QuadConfig {
            abs_tol: tol,
            rel_tol: tol,
            ..QuadConfig::default()
        }
    }

    pub fn with_splits(mut self, splits: &[f64]) -> Self {
        self.split_points = splits.to_vec();
        self
    }

    fn validate(&self, a: f64, b: f64) -> Result<(), QuadError> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(QuadError::InvalidConfig(
                "tolerances must be positive".to_owned(),
            ));
        }
        if self.max_evals < RULE_EVALS {
            return Err(QuadError::InvalidConfig(format!(
                "max_evals must be at least {RULE_EVALS}"
            )));
        }
        let mut prev = a;
        for &s in &self.split_points {
            if !(s > prev) || !(s < b) {
                return Err(QuadError::InvalidConfig(format!(
                    "split point {s} not strictly increasing inside ({a}, {b})"
                )));
            }
            prev = s;
        }
        Ok(())
    }
}

/// Outcome of one integration. Non-convergence is a reported state, not an
/// error: the best value is still returned with `converged = false`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub function_evals: usize,
    pub converged: bool,
}

/// GSL-style error rescaling: sharpens the raw Gauss/Kronrod discrepancy on
/// smooth cells and inflates it where the integrand varies wildly.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 {
            res_asc * scale
        } else {
            res_asc
        };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One application of the G7/K15 pair on [a, b].
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64), QuadError> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let sample = |x: f64| -> Result<f64, QuadError> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QuadError::NonFiniteSample { x })
        }
    };

    let f_center = sample(center)?;
    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0_f64; 7];
    let mut fv2 = [0.0_f64; 7];

    for j in 0..7 {
        let abscissa = half * XGK[j];
        let v1 = sample(center - abscissa)?;
        let v2 = sample(center + abscissa)?;
        fv1[j] = v1;
        fv2[j] = v2;
        let sum = v1 + v2;
        if j % 2 != 0 {
            res_gauss += WG[j / 2] * sum;
        }
        res_kronrod += WGK[j] * sum;
        res_abs += WGK[j] * (v1.abs() + v2.abs());
    }

    let mean = res_kronrod * 0.5;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let raw_err = (res_kronrod - res_gauss) * half;
    let value = res_kronrod * half;
    let err = rescale_error(raw_err, res_abs * half.abs(), res_asc * half.abs());
    Ok((value, err))
}

#[derive(Debug)]
struct Cell {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    seq: usize,
}

impl PartialEq for Cell {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.seq == other.seq
    }
}
impl Eq for Cell {}
impl PartialOrd for Cell {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell {
    fn cmp(&self, other: &Self) -> Ordering {
        // max-heap on error; ties broken by insertion order for determinism
        self.err
            .partial_cmp(&other.err)
            .unwrap_or(Ordering::Equal)
            .then(other.seq.cmp(&self.seq))
    }
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    boundaries: &[f64],
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    let mut heap = BinaryHeap::new();
    let mut evals = 0usize;
    let mut seq = 0usize;

    for w in boundaries.windows(2) {
        let (value, err) = gk15(f, w[0], w[1])?;
        evals += RULE_EVALS;
        heap.push(Cell {
            a: w[0],
            b: w[1],
            value,
            err,
            seq,
        });
        seq += 1;
    }

    let totals = |heap: &BinaryHeap<Cell>| -> (f64, f64) {
        let mut cells: Vec<&Cell> = heap.iter().collect();
        cells.sort_by(|l, r| l.a.partial_cmp(&r.a).unwrap_or(Ordering::Equal));
        let value = cells.iter().map(|c| c.value).sum();
        let err = cells.iter().map(|c| c.err).sum();
        (value, err)
    };

    let tolerance =
        |value: f64, cfg: &QuadConfig| -> f64 { cfg.abs_tol.max(cfg.rel_tol * value.abs()) };

    let mut running_value: f64 = heap.iter().map(|c| c.value).sum();
    let mut running_err: f64 = heap.iter().map(|c| c.err).sum();

    while running_err > tolerance(running_value, cfg) && evals + 2 * RULE_EVALS <= cfg.max_evals {
        let worst = match heap.pop() {
            Some(c) => c,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval no longer bisectable in f64; keep as-is
            heap.push(worst);
            break;
        }
        let (lv, le) = gk15(f, worst.a, mid)?;
        let (rv, re) = gk15(f, mid, worst.b)?;
        evals += 2 * RULE_EVALS;
        running_value += lv + rv - worst.value;
        running_err += le + re - worst.err;
        heap.push(Cell {
            a: worst.a,
            b: mid,
            value: lv,
            err: le,
            seq,
        });
        seq += 1;
        heap.push(Cell {
            a: mid,
            b: worst.b,
            value: rv,
            err: re,
            seq,
        });
        seq += 1;
    }

    // final deterministic left-to-right summation
    let (value, abs_error_estimate) = totals(&heap);
    let converged = abs_error_estimate <= tolerance(value, cfg);
    Ok(QuadResult {
        value,
        abs_error_estimate,
        function_evals: evals,
        converged,
    })
}

fn boundaries(a: f64, b: f64, cfg: &QuadConfig) -> Vec<f64> {
    let mut bs = Vec::with_capacity(cfg.split_points.len() + 2);
    bs.push(a);
    bs.extend_from_slice(&cfg.split_points);
    bs.push(b);
    bs
}

/// Integrate `f` over `[a, b]` adaptively, pre-splitting at
/// `cfg.split_points`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    if !(a < b) {
        return Err(QuadError::InvalidInterval { a, b });
    }
    cfg.validate(a, b)?;
    adaptive(&f, &boundaries(a, b, cfg), cfg)
}

/// Levels of geometric grading applied toward each endpoint; 4^-40 shrinks
/// the innermost cell far enough that subsequent bisection converges on
/// `t^a` singularities with `a > -1` within the default budget.
const GRADE_DEPTH: u32 = 40;
const GRADE_RATIO: f64 = 0.25;

/// Integrate `f` over `[a, b]` where `f` may diverge (integrably) at either
/// endpoint. Endpoints themselves are never sampled: the base rule's nodes
/// are interior, and the interval is pre-graded geometrically toward both
/// ends before the usual adaptive refinement.
pub fn integrate_endpoint_singular<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult, QuadError> {
    if !(a < b) {
        return Err(QuadError::InvalidInterval { a, b });
    }
    cfg.validate(a, b)?;

    let width = b - a;
    let mut pts: Vec<f64> = Vec::new();
    let mut h = width;
    for _ in 0..GRADE_DEPTH {
        h *= GRADE_RATIO;
        let left = a + h;
        let right = b - h;
        if left > a && left < b {
            pts.push(left);
        }
        if right > a && right < b {
            pts.push(right);
        }
    }
    pts.extend_from_slice(&cfg.split_points);
    pts.sort_by(|l, r| l.partial_cmp(r).unwrap());
    pts.dedup();
    pts.retain(|&s| s > a && s < b);

    let mut bs = Vec::with_capacity(pts.len() + 2);
    bs.push(a);
    bs.extend_from_slice(&pts);
    bs.push(b);
    adaptive(&f, &bs, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn polynomial_square_on_unit_interval() {
        let r = integrate(|x| x * x, 0.0, 1.0, &default_cfg()).unwrap();
        assert!(r.converged);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn triangle_with_split_at_kink() {
        let cfg = default_cfg().with_splits(&[0.5]);
        let r = integrate(|t| (1.0 - 2.0 * t).abs(), 0.0, 1.0, &cfg).unwrap();
        assert!(r.converged);
        assert!((r.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn kernel_weighted_moment_p2() {
        // K_2(t) (1 - 2t) integrates to 2p(p-1)/((p+1)(2p+1)) = 4/15 at p = 2
        let k2 = |t: f64| 0.5 * t.powf(-0.5) + 0.5 * t.powf(0.5);
        let r = integrate_endpoint_singular(|t| k2(t) * (1.0 - 2.0 * t), 0.0, 1.0, &default_cfg())
            .unwrap();
        assert!(r.converged, "err={}", r.abs_error_estimate);
        assert!((r.value - 4.0 / 15.0).abs() < 1e-10, "value={}", r.value);
    }

    #[test]
    fn inverse_sqrt_singularity() {
        let r =
            integrate_endpoint_singular(|t| 0.5 * t.powf(-0.5), 0.0, 1.0, &default_cfg()).unwrap();
        assert!(r.converged, "err={}", r.abs_error_estimate);
        assert!((r.value - 1.0).abs() < 1e-9, "value={}", r.value);
    }

    #[test]
    fn kernel_normalizations() {
        // integral of K_p over (0,1) is 2p/(p+1)
        for p in [1.1, 1.5, 2.0, 3.0, 5.0, 10.0] {
            let f =
                move |t: f64| (1.0 / p) * t.powf(1.0 / p - 1.0) + (1.0 - 1.0 / p) * t.powf(1.0 / p);
            let r = integrate_endpoint_singular(f, 0.0, 1.0, &default_cfg()).unwrap();
            let expected = 2.0 * p / (p + 1.0);
            assert!(
                (r.value - expected).abs() < 1e-9,
                "p={p} value={} expected={expected} err={} evals={}",
                r.value,
                r.abs_error_estimate,
                r.function_evals
            );
            assert!(r.converged, "p={p}");
        }
    }

    #[test]
    fn kernel_p4_unit_moment() {
        let f = |t: f64| 0.25 * t.powf(-0.75) + 0.75 * t.powf(0.25);
        let r = integrate_endpoint_singular(f, 0.0, 1.0, &default_cfg()).unwrap();
        assert!((r.value - 1.6).abs() < 1e-9);
    }

    #[test]
    fn nonfinite_sample_is_an_error() {
        let err = integrate(
            |x| if x > 0.4 { f64::NAN } else { 1.0 },
            0.0,
            1.0,
            &default_cfg(),
        )
        .unwrap_err();
        assert!(matches!(err, QuadError::NonFiniteSample { .. }));
    }

    #[test]
    fn budget_exhaustion_reports_nonconvergence() {
        let cfg = QuadConfig {
            max_evals: 45,
            ..QuadConfig::default()
        };
        let r = integrate(|x| (50.0 * x).sin().abs(), 0.0, 3.0, &cfg).unwrap();
        assert!(!r.converged);
        assert!(r.function_evals <= 45);
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            integrate(|x| x, 1.0, 1.0, &default_cfg()),
            Err(QuadError::InvalidInterval { .. })
        ));
        let bad = default_cfg().with_splits(&[2.0]);
        assert!(matches!(
            integrate(|x| x, 0.0, 1.0, &bad),
            Err(QuadError::InvalidConfig(_))
        ));
        let unsorted = default_cfg().with_splits(&[0.7, 0.3]);
        assert!(matches!(
            integrate(|x| x, 0.0, 1.0, &unsorted),
            Err(QuadError::InvalidConfig(_))
        ));
    }

    #[test]
    fn polynomial_exactness_up_to_rule_degree() {
        // base rule is exact through degree 22
        for k in 0..=22u32 {
            let r = integrate(|x| x.powi(k as i32), 0.0, 1.0, &default_cfg()).unwrap();
            let expected = 1.0 / (k as f64 + 1.0);
            assert!(
                (r.value - expected).abs() / expected < 1e-13,
                "degree {k}: got {} want {expected}",
                r.value
            );
        }
    }
}
