//! Numerical certification and falsification toolkit for trapezoid-type
//! integral inequalities and special means.
//!
//! The crate evaluates both sides of a family of published trapezoid bounds
//! for convex functions (the `t1`/`t2`/`t3` bounds built on a Young-inequality
//! kernel, their corollaries, and two classical baselines), audits every
//! intermediate step of their derivations numerically, computes the classical
//! special means with their ordering chain, and searches claim/parameter grids
//! for counterexamples.
//!
//! Layout:
//! - [`expr`] holds the expression mini-language (parse, print, evaluate,
//!   differentiate)
//! - [`quad`] is adaptive Gauss–Kronrod quadrature with split points and
//!   endpoint-singularity grading
//! - [`means`] computes the arithmetic / geometric / harmonic / logarithmic /
//!   identric / p-logarithmic means, their ordering chain, and monotonicity
//!   checks
//! - [`bounds`] evaluates the trapezoid gap, the bound right-hand sides,
//!   verdicts, foundation inequality checks, and proof-chain audits
//! - [`props`] specializes the bounds to means language and cross-checks the
//!   printed forms against the generic pipeline
//! - [`audit`] runs claim × case suites and the counterexample search
//! - [`report`] emits JSON / CSV reports

// float-literal guards and the expression-builder method names are
// deliberate; NaN-aware `!(a < b)` validations must not become `a >= b`
#![allow(clippy::redundant_guards)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::should_implement_trait)]

pub mod audit;
pub mod bounds;
pub mod expr;
pub mod means;
pub mod props;
pub mod quad;
pub mod report;

pub use audit::{AuditReport, ClaimId, Family, SearchOutcome, SearchSpec, SuiteKind};
pub use bounds::{BoundId, Case, Verdict};
pub use expr::{DomainError, Expression, ParseDiagnostic};
pub use means::MeanKind;
pub use props::{PropCase, PropId};
pub use quad::{QuadConfig, QuadResult};
