use rug::{Complex, Float};

use super::{acosh_down, tolerance_share, BoundMode, PlanOptions, PlannedSegment, SegmentPlan, StrategyKind, R_MAX};
use crate::algebraic::{fmt_complex, AlgebraicIntegrand, BranchTracker};
use crate::bounds::{disk_bound, proxy_bound};
use crate::error::{Error, Result};
use crate::num::{dist_up, down, up, Tolerance, BOUND_PREC};
use crate::quadrature::required_order;

/// Whether a piece of half-length `half_length` whose midpoint is `rho`
/// away from the nearest critical point must be bisected: `beta rho <= h`.
pub fn needs_split(beta: f64, rho: Option<&Float>, half_length: &Float) -> bool {
    match rho {
        None => false,
        Some(rho) => down(rho * beta) <= *half_length,
    }
}

struct Piece {
    start: Complex,
    end: Complex,
    center: Complex,
    half: Float,
    rho: Option<Float>,
    depth: u32,
}

fn bisect(
    integrand: &AlgebraicIntegrand,
    start: Complex,
    end: Complex,
    depth: u32,
    options: &PlanOptions,
    out: &mut Vec<Piece>,
) -> Result<()> {
    let prec = integrand.precision();
    let center = Complex::with_val(prec, &start + &end) / 2u32;
    let half = up(dist_up(&start, &end) / 2u32);
    let rho = integrand.critical_distance(&center);
    if !needs_split(options.beta, rho.as_ref(), &half) {
        out.push(Piece { start, end, center, half, rho, depth });
        return Ok(());
    }
    if depth >= options.max_depth {
        return Err(Error::CriticalTooClose(options.max_depth));
    }
    bisect(integrand, start, center.clone(), depth + 1, options, out)?;
    bisect(integrand, center, end, depth + 1, options, out)
}

pub(crate) fn check_path(integrand: &AlgebraicIntegrand, z1: &Complex, z2: &Complex, beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidInput(format!("beta = {beta} must lie in (0, 1)")));
    }
    if z1 == z2 {
        return Err(Error::InvalidInput("path endpoints coincide".into()));
    }
    if integrand.segment_clearance(z1, z2) <= integrand.clearance() {
        return Err(Error::CriticalPoint(format!(
            "{} (on the path from {} to {})",
            fmt_complex(integrand.nearest_critical(z1).unwrap_or(z1)),
            fmt_complex(z1),
            fmt_complex(z2)
        )));
    }
    Ok(())
}

/// Adaptive bisection plan.
///
/// Pieces are halved until `beta rho > h` holds for each, with `rho` the
/// distance from the piece's midpoint to the nearest critical point and `h`
/// its half-length. Each piece then gets the disk of radius `delta = beta rho`
/// about its midpoint and the ellipse `r = acosh(delta / h)` inside it.
/// Without critical points the single piece uses `r = R_MAX`.
pub fn plan_main(
    integrand: &AlgebraicIntegrand,
    z1: &Complex,
    z2: &Complex,
    tolerance: &Tolerance,
    options: &PlanOptions,
) -> Result<SegmentPlan> {
    check_path(integrand, z1, z2, options.beta)?;
    let prec = integrand.precision();
    let mut pieces = Vec::new();
    bisect(
        integrand,
        Complex::with_val(prec, z1),
        Complex::with_val(prec, z2),
        0,
        options,
        &mut pieces,
    )?;

    let centers_g = match options.bound_mode {
        BoundMode::Lemma => {
            let mut tracker = BranchTracker::new(integrand)?;
            tracker.advance_to(z1)?;
            let mut values = Vec::with_capacity(pieces.len());
            for p in &pieces {
                values.push(Some(tracker.advance_to(&p.center)?));
            }
            values
        }
        BoundMode::Proxy { .. } => vec![None; pieces.len()],
    };

    let count = pieces.len();
    let mut segments = Vec::with_capacity(count);
    for (piece, g_center) in pieces.into_iter().zip(centers_g) {
        let delta = match &piece.rho {
            Some(rho) => down(rho * options.beta),
            None => down(&piece.half * down(Float::with_val(BOUND_PREC, R_MAX).cosh())),
        };
        let r = acosh_down(&down(&delta / &piece.half));
        if r <= 0 {
            return Err(Error::CriticalTooClose(piece.depth));
        }
        let bound = segment_bound(integrand, &piece, &delta, g_center.as_ref(), options)?;
        let (share, allotted) = tolerance_share(options.tolerance_mode, count, piece.depth, tolerance);
        let length = up(&piece.half * 2u32);
        let order = required_order(&bound, &r, &length, &allotted)?;
        segments.push(PlannedSegment {
            start: piece.start,
            end: piece.end,
            center: piece.center,
            delta,
            r,
            bound,
            share,
            tolerance: allotted,
            order,
            critical_distance: piece.rho,
            depth: piece.depth,
        });
    }
    let total_nodes = segments.iter().map(|s| s.order).sum();
    Ok(SegmentPlan {
        segments,
        total_nodes,
        strategy: StrategyKind::Main,
        options: *options,
        tolerance: tolerance.clone(),
        covering: Vec::new(),
    })
}

fn segment_bound(
    integrand: &AlgebraicIntegrand,
    piece: &Piece,
    delta: &Float,
    g_center: Option<&Complex>,
    options: &PlanOptions,
) -> Result<Float> {
    match (options.bound_mode, g_center) {
        (BoundMode::Proxy { scale, exponent }, _) => match integrand.nearest_critical(&piece.center) {
            Some(alpha) => proxy_bound(
                &Float::with_val(BOUND_PREC, scale),
                &Float::with_val(BOUND_PREC, exponent),
                alpha,
                &piece.center,
                delta,
            ),
            None => Ok(Float::with_val(BOUND_PREC, scale)),
        },
        (BoundMode::Lemma, Some(g)) => Ok(disk_bound(integrand, &piece.center, delta, g)?.variation_bound),
        (BoundMode::Lemma, None) => unreachable!("lemma mode evaluates g at every center"),
    }
}
