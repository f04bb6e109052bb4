use rug::{Complex, Float};

use super::legendre::{legendre_scheme, QuadratureScheme};
use crate::algebraic::{AlgebraicIntegrand, BranchTracker};
use crate::error::{Error, Result};
use crate::num::{Tolerance, BOUND_PREC};

const HEURISTIC_START: usize = 8;
const HEURISTIC_DOUBLINGS: u32 = 14;

/// Working precision for a tolerance and an expected total node count:
/// `ceil(-log2 E_tol) + 30 + ceil(log2 nodes)`.
pub fn working_precision(tolerance: &Tolerance, total_nodes: usize) -> u32 {
    let log_nodes = usize::BITS - total_nodes.max(1).saturating_sub(1).leading_zeros();
    tolerance.bits() + 30 + log_nodes
}

/// `((z2 - z1) / 2) sum w_i g(mid + half x_i)`, continuing `tracker` through
/// the nodes in order. The tracker is left at the last node.
pub(crate) fn integrate_with_tracker(
    tracker: &mut BranchTracker<'_>,
    z1: &Complex,
    z2: &Complex,
    scheme: &QuadratureScheme,
    prec: u32,
) -> Result<Complex> {
    let half = Complex::with_val(prec, z2 - z1) / 2u32;
    let mid = Complex::with_val(prec, z1 + z2) / 2u32;
    let mut sum = Complex::new(prec);
    for (x, w) in scheme.nodes().iter().zip(scheme.weights()) {
        let z = Complex::with_val(prec, &mid + Complex::with_val(prec, &half * x));
        let g = tracker.advance_to(&z)?;
        sum += Complex::with_val(prec, &g * w);
    }
    Ok(sum * half)
}

/// Gauss-Legendre quadrature of the integrand's branch over `[z1, z2]`.
///
/// The branch is continued from the integrand's anchor to `z1` and then
/// through the mapped nodes, so the anchor need not be `z1` itself.
pub fn integrate_segment(
    integrand: &AlgebraicIntegrand,
    z1: &Complex,
    z2: &Complex,
    scheme: &QuadratureScheme,
) -> Result<Complex> {
    let prec = integrand.precision();
    let mut tracker = BranchTracker::new(integrand)?;
    tracker.advance_to(z1)?;
    integrate_with_tracker(&mut tracker, z1, z2, scheme, prec)
}

/// Result of [`heuristic_integrate`]. The error estimate is not a bound.
#[derive(Clone, Debug)]
pub struct HeuristicResult {
    pub value: Complex,
    /// Sum of the orders of every quadrature evaluated.
    pub nodes_used: usize,
    pub order: usize,
    pub error_estimate: Float,
}

/// Node doubling from `N = 8` until successive quadratures differ by less
/// than `E_tol / 10`, giving up after 14 doublings.
pub fn heuristic_integrate(
    integrand: &AlgebraicIntegrand,
    z1: &Complex,
    z2: &Complex,
    tolerance: &Tolerance,
) -> Result<HeuristicResult> {
    heuristic_with_cap(integrand, z1, z2, tolerance, HEURISTIC_DOUBLINGS)
}

fn heuristic_with_cap(
    integrand: &AlgebraicIntegrand,
    z1: &Complex,
    z2: &Complex,
    tolerance: &Tolerance,
    doublings: u32,
) -> Result<HeuristicResult> {
    let prec = integrand.precision();
    let mut start = BranchTracker::new(integrand)?;
    start.advance_to(z1)?;
    let threshold = Float::with_val(BOUND_PREC, tolerance.value() / 10u32);

    let mut order = HEURISTIC_START;
    let mut nodes_used = order;
    let scheme = legendre_scheme(order, prec)?;
    let mut previous = integrate_with_tracker(&mut start.clone(), z1, z2, &scheme, prec)?;
    let mut last_diff = None;
    for _ in 0..doublings {
        order *= 2;
        nodes_used += order;
        let scheme = legendre_scheme(order, prec)?;
        let current = integrate_with_tracker(&mut start.clone(), z1, z2, &scheme, prec)?;
        let diff = Float::with_val(BOUND_PREC, Complex::with_val(prec, &current - &previous).abs_ref());
        if diff < threshold {
            return Ok(HeuristicResult {
                value: current,
                nodes_used,
                order,
                error_estimate: diff,
            });
        }
        previous = current;
        last_diff = Some(diff);
    }
    Err(Error::HeuristicDidNotConverge(format!(
        "last difference {} at order {order}",
        last_diff.map(|d| d.to_string_radix(10, Some(6))).unwrap_or_default()
    )))
}
