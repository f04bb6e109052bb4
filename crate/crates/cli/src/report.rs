//! JSON documents written by `rig integrate` and `rig plan`.
//!
//! Numbers that carry more than double precision are decimal strings;
//! complex numbers are `{"re": .., "im": ..}` objects.

use rug::{Complex, Float};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use rig_core::quadrature::HeuristicResult;
use rig_core::strategies::{CoveringDisk, PlannedSegment};
use rig_core::{IntegrationReport, SegmentPlan, Tolerance, ToleranceMode};

use crate::error::Result;

pub const REPORT_SCHEMA: &str = "rig.report.v1";
pub const PLAN_SCHEMA: &str = "rig.plan.v1";

/// Significant digits used for bound-precision reals.
const BOUND_DIGITS: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub re: String,
    pub im: String,
}

impl ComplexRecord {
    pub fn new(z: &Complex, digits: usize) -> Self {
        ComplexRecord {
            re: decimal(z.real(), digits),
            im: decimal(z.imag(), digits),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueRecord {
    pub re: String,
    pub im: String,
    /// Significant decimal digits printed for each part.
    pub digits: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentRecord {
    pub start: ComplexRecord,
    pub end: ComplexRecord,
    pub center: ComplexRecord,
    pub order: usize,
    pub depth: u32,
    pub delta: Option<String>,
    pub r: Option<String>,
    pub bound: Option<String>,
    pub share: Option<String>,
    pub tolerance: Option<String>,
    pub critical_distance: Option<String>,
    pub value: Option<ComplexRecord>,
}

impl SegmentRecord {
    fn from_planned(s: &PlannedSegment, digits: usize, value: Option<&Complex>) -> Self {
        SegmentRecord {
            start: ComplexRecord::new(&s.start, digits),
            end: ComplexRecord::new(&s.end, digits),
            center: ComplexRecord::new(&s.center, digits),
            order: s.order,
            depth: s.depth,
            delta: Some(decimal(&s.delta, BOUND_DIGITS)),
            r: Some(decimal(&s.r, BOUND_DIGITS)),
            bound: Some(decimal(&s.bound, BOUND_DIGITS)),
            share: Some(decimal(&s.share, BOUND_DIGITS)),
            tolerance: Some(decimal(&s.tolerance, BOUND_DIGITS)),
            critical_distance: s.critical_distance.as_ref().map(|d| decimal(d, BOUND_DIGITS)),
            value: value.map(|v| ComplexRecord::new(v, digits)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: String,
    pub strategy: String,
    pub value: ValueRecord,
    pub total_nodes: usize,
    pub precision_bits: u32,
    pub e_tol: String,
    /// Sum of the per-segment tolerances; absent for the heuristic.
    pub error_budget: Option<String>,
    /// Last difference between successive quadratures; heuristic only.
    pub error_estimate: Option<String>,
    pub segments: Vec<SegmentRecord>,
    pub wall_time_ms: Option<f64>,
}

impl ReportDocument {
    pub fn from_report(report: &IntegrationReport, wall_time_ms: Option<f64>) -> Self {
        let digits = value_digits(&report.plan.tolerance, report.precision_bits);
        ReportDocument {
            schema: REPORT_SCHEMA.into(),
            strategy: report.plan.strategy.as_str().into(),
            value: value_record(&report.value, digits),
            total_nodes: report.plan.total_nodes,
            precision_bits: report.precision_bits,
            e_tol: report.plan.tolerance.to_string(),
            error_budget: Some(decimal(&report.error_budget, BOUND_DIGITS)),
            error_estimate: None,
            segments: report
                .plan
                .segments
                .iter()
                .zip(&report.per_segment_values)
                .map(|(s, v)| SegmentRecord::from_planned(s, digits, Some(v)))
                .collect(),
            wall_time_ms,
        }
    }

    pub fn from_heuristic(
        result: &HeuristicResult,
        start: &Complex,
        end: &Complex,
        tolerance: &Tolerance,
        wall_time_ms: Option<f64>,
    ) -> Self {
        let precision_bits = result.value.prec().0;
        let digits = value_digits(tolerance, precision_bits);
        let center = Complex::with_val(precision_bits, start + end) / 2u32;
        ReportDocument {
            schema: REPORT_SCHEMA.into(),
            strategy: "heuristic".into(),
            value: value_record(&result.value, digits),
            total_nodes: result.nodes_used,
            precision_bits,
            e_tol: tolerance.to_string(),
            error_budget: None,
            error_estimate: Some(decimal(&result.error_estimate, BOUND_DIGITS)),
            segments: vec![SegmentRecord {
                start: ComplexRecord::new(start, digits),
                end: ComplexRecord::new(end, digits),
                center: ComplexRecord::new(&center, digits),
                order: result.order,
                depth: 0,
                delta: None,
                r: None,
                bound: None,
                share: None,
                tolerance: None,
                critical_distance: None,
                value: Some(ComplexRecord::new(&result.value, digits)),
            }],
            wall_time_ms,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringRecord {
    pub center: ComplexRecord,
    pub radius: String,
    pub bound: String,
}

impl CoveringRecord {
    fn new(d: &CoveringDisk, digits: usize) -> Self {
        CoveringRecord {
            center: ComplexRecord::new(&d.center, digits),
            radius: decimal(&d.radius, BOUND_DIGITS),
            bound: decimal(&d.bound, BOUND_DIGITS),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanDocument {
    pub schema: String,
    pub strategy: String,
    pub e_tol: String,
    #[serde(rename = "total_N")]
    pub total_n: usize,
    pub segment_count: usize,
    /// Precision the plan would be executed at.
    pub precision_bits: u32,
    pub beta: f64,
    pub epsilon: f64,
    pub tolerance_mode: String,
    pub segments: Vec<SegmentRecord>,
    pub covering: Vec<CoveringRecord>,
}

impl PlanDocument {
    pub fn new(plan: &SegmentPlan) -> Self {
        let precision_bits = plan.working_precision();
        let digits = value_digits(&plan.tolerance, precision_bits);
        PlanDocument {
            schema: PLAN_SCHEMA.into(),
            strategy: plan.strategy.as_str().into(),
            e_tol: plan.tolerance.to_string(),
            total_n: plan.total_nodes,
            segment_count: plan.segments.len(),
            precision_bits,
            beta: plan.options.beta,
            epsilon: plan.options.epsilon,
            tolerance_mode: match plan.options.tolerance_mode {
                ToleranceMode::Uniform => "uniform",
                ToleranceMode::LengthWeighted => "length",
            }
            .into(),
            segments: plan
                .segments
                .iter()
                .map(|s| SegmentRecord::from_planned(s, digits, None))
                .collect(),
            covering: plan.covering.iter().map(|d| CoveringRecord::new(d, digits)).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// `x` in scientific notation with `digits` significant digits.
pub fn decimal(x: &Float, digits: usize) -> String {
    x.to_string_radix(10, Some(digits.max(1)))
}

/// Enough digits to resolve `E_tol`, but no more than the precision holds.
pub fn value_digits(tolerance: &Tolerance, precision_bits: u32) -> usize {
    let wanted = (f64::from(tolerance.bits()) * std::f64::consts::LOG10_2).ceil() as usize + 3;
    let held = (f64::from(precision_bits) * std::f64::consts::LOG10_2).floor() as usize;
    wanted.min(held).max(1)
}

fn value_record(z: &Complex, digits: usize) -> ValueRecord {
    ValueRecord {
        re: decimal(z.real(), digits),
        im: decimal(z.imag(), digits),
        digits,
    }
}

/// Sorted keys, `wall_time_ms` removed, pretty-printed.
pub fn canonicalize(json: &str) -> Result<String> {
    let mut value: Value = serde_json::from_str(json)?;
    if let Value::Object(map) = &mut value {
        map.remove("wall_time_ms");
    }
    // serde_json's default map is ordered by key
    Ok(serde_json::to_string_pretty(&value)?)
}
