//! Path planning and execution.
//!
//! [`plan_main`] bisects the path until every piece fits a round ellipse
//! inside a disk free of critical points. [`plan_reference`] keeps the path
//! whole and bounds `g` on one eccentric ellipse through a covering by disks.
//! Both produce a [`SegmentPlan`]; [`execute`] turns a plan into a value.

mod bisection;
mod covering;

use rug::{Complex, Float};

use crate::algebraic::{AlgebraicIntegrand, BranchTracker};
use crate::error::Result;
use crate::num::{down, up, Tolerance, BOUND_PREC};
use crate::quadrature::{integrate_with_tracker, legendre_scheme, working_precision};

pub use bisection::{needs_split, plan_main};
pub use covering::{cover_ellipse, plan_reference, Covering};

/// Ellipse parameter used when nothing limits it: `cosh(1.76) < 3`.
pub const R_MAX: f64 = 1.76;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StrategyKind {
    Main,
    Reference,
}

impl StrategyKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StrategyKind::Main => "main",
            StrategyKind::Reference => "reference",
        }
    }
}

/// How the tolerance is shared between segments.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToleranceMode {
    /// `1/m` each.
    Uniform,
    /// Proportional to segment length.
    LengthWeighted,
}

/// Where the bound `M` on a disk comes from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BoundMode {
    /// Certified Fujiwara-Taylor bound.
    Lemma,
    /// `scale (|c - alpha| - delta)^(-exponent)` with `alpha` the nearest
    /// critical point. Not rigorous; for trend studies.
    Proxy { scale: f64, exponent: f64 },
}

#[derive(Clone, Copy, Debug)]
pub struct PlanOptions {
    /// Disk radius as a fraction of the distance to the nearest critical point.
    pub beta: f64,
    /// Relative shrink of the reference ellipse parameter.
    pub epsilon: f64,
    pub tolerance_mode: ToleranceMode,
    pub bound_mode: BoundMode,
    /// Bisection depth limit.
    pub max_depth: u32,
}

impl Default for PlanOptions {
    fn default() -> Self {
        PlanOptions {
            beta: 0.9,
            epsilon: 0.05,
            tolerance_mode: ToleranceMode::Uniform,
            bound_mode: BoundMode::Lemma,
            max_depth: 60,
        }
    }
}

/// One piece of a plan. The ellipse `L(start, end, r)` lies in `D(center, delta)`.
#[derive(Clone, Debug)]
pub struct PlannedSegment {
    pub start: Complex,
    pub end: Complex,
    pub center: Complex,
    pub delta: Float,
    pub r: Float,
    /// Bound on `|g - const|` over the ellipse.
    pub bound: Float,
    /// Fraction of the tolerance allotted to this segment.
    pub share: Float,
    /// `share * E_tol`, rounded down.
    pub tolerance: Float,
    pub order: usize,
    /// Lower bound on the distance from the center to the nearest critical point.
    pub critical_distance: Option<Float>,
    pub depth: u32,
}

impl PlannedSegment {
    /// `|end - start|`, rounded up.
    pub fn length(&self) -> Float {
        crate::num::dist_up(&self.end, &self.start)
    }
}

/// A disk of a reference-strategy covering with its bound.
#[derive(Clone, Debug)]
pub struct CoveringDisk {
    pub center: Complex,
    pub radius: Float,
    pub g_at_center: Option<Complex>,
    /// Variation bound in lemma mode, model bound in proxy mode.
    pub bound: Float,
}

#[derive(Clone, Debug)]
pub struct SegmentPlan {
    pub segments: Vec<PlannedSegment>,
    pub total_nodes: usize,
    pub strategy: StrategyKind,
    pub options: PlanOptions,
    pub tolerance: Tolerance,
    /// Reference strategy only.
    pub covering: Vec<CoveringDisk>,
}

impl SegmentPlan {
    pub fn start(&self) -> &Complex {
        &self.segments[0].start
    }

    pub fn end(&self) -> &Complex {
        &self.segments[self.segments.len() - 1].end
    }

    /// `sum share_j`, rounded up.
    pub fn total_share(&self) -> Float {
        self.segments
            .iter()
            .fold(Float::new(BOUND_PREC), |acc, s| up(acc + &s.share))
    }

    /// Precision [`execute`] will run at.
    pub fn working_precision(&self) -> u32 {
        working_precision(&self.tolerance, self.total_nodes)
    }
}

/// Total node count `sum N_j`.
pub fn cost(plan: &SegmentPlan) -> usize {
    plan.segments.iter().map(|s| s.order).sum()
}

#[derive(Clone, Debug)]
pub struct IntegrationReport {
    pub value: Complex,
    pub plan: SegmentPlan,
    /// `sum` of per-segment tolerances; never above `E_tol`.
    pub error_budget: Float,
    pub precision_bits: u32,
    pub node_evaluations: usize,
    pub per_segment_values: Vec<Complex>,
}

/// Integrates every planned segment at its order and sums.
///
/// The precision is raised to the plan's working precision if the
/// integrand's is lower. The branch is carried from segment to segment by
/// one tracker.
pub fn execute(plan: &SegmentPlan, integrand: &AlgebraicIntegrand) -> Result<IntegrationReport> {
    let prec = plan.working_precision().max(integrand.precision());
    let integrand = integrand.with_precision(prec)?;
    let mut tracker = BranchTracker::new(&integrand)?;
    let mut total = Complex::new(prec);
    let mut per_segment = Vec::with_capacity(plan.segments.len());
    for seg in &plan.segments {
        let start = Complex::with_val(prec, &seg.start);
        let end = Complex::with_val(prec, &seg.end);
        tracker.advance_to(&start)?;
        let scheme = legendre_scheme(seg.order, prec)?;
        let value = integrate_with_tracker(&mut tracker, &start, &end, &scheme, prec)?;
        tracker.advance_to(&end)?;
        total += &value;
        per_segment.push(value);
    }
    let error_budget = plan
        .segments
        .iter()
        .fold(Float::new(BOUND_PREC), |acc, s| up(acc + &s.tolerance));
    Ok(IntegrationReport {
        value: total,
        plan: plan.clone(),
        error_budget,
        precision_bits: prec,
        node_evaluations: cost(plan),
        per_segment_values: per_segment,
    })
}

/// `acosh(x)` rounded down, for `x >= 1`.
pub(crate) fn acosh_down(x: &Float) -> Float {
    down(x.acosh_ref())
}

/// Fraction of `E_tol` and the allotted tolerance for segment `index` of `count`.
pub(crate) fn tolerance_share(
    mode: ToleranceMode,
    count: usize,
    depth: u32,
    tolerance: &Tolerance,
) -> (Float, Float) {
    let share = match mode {
        ToleranceMode::Uniform => down(Float::with_val(BOUND_PREC, 1) / count as u64),
        // bisection makes the length fraction exactly 2^-depth
        ToleranceMode::LengthWeighted => Float::with_val(BOUND_PREC, 1) >> depth,
    };
    let allotted = tolerance.scaled(&share);
    (share, allotted)
}
