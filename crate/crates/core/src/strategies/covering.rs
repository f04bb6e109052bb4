use num_complex::Complex64;
use rug::{Complex, Float};

use super::bisection::check_path;
use super::{BoundMode, CoveringDisk, PlanOptions, PlannedSegment, SegmentPlan, StrategyKind, R_MAX};
use crate::algebraic::{AlgebraicIntegrand, BranchTracker};
use crate::bounds::{disk_bound, proxy_bound};
use crate::error::{Error, Result};
use crate::num::{abs_up, dist_up, down, to_c64, up, Tolerance, BOUND_PREC};
use crate::quadrature::required_order;

const MAX_DISKS: usize = 20_000;
const MAX_SHRINKS: usize = 200;
/// Relative slack on the covering geometry, which is computed in doubles.
const SLACK: f64 = 1e-9;

/// Disks with real centers covering `L(-1, 1, r)` in mapped coordinates.
#[derive(Clone, Debug)]
pub struct Covering {
    /// Possibly smaller than requested if the sweep had to shrink it.
    pub r: f64,
    /// `(center, radius)` pairs, centers increasing.
    pub disks: Vec<(f64, f64)>,
}

fn nearest_distance(critical: &[Complex64], x: f64) -> f64 {
    critical
        .iter()
        .map(|a| (a - Complex64::new(x, 0.0)).norm())
        .fold(f64::INFINITY, f64::min)
        * (1.0 - SLACK)
}

/// Greedy left-to-right sweep. A disk of radius `delta` at real center `c`
/// covers the part of the ellipse with `|x - c| <= sqrt(delta^2 - b^2)`,
/// `b = sinh r`, because the ellipse has `|y| <= b`. Each new center is the
/// rightmost one whose slab still reaches back to the frontier. If some
/// frontier point has `delta <= b`, `r` shrinks by a factor 0.9.
pub fn cover_ellipse(critical: &[Complex64], r: f64, beta: f64) -> Result<Covering> {
    let mut r = r;
    'retry: for _ in 0..MAX_SHRINKS {
        let b = r.sinh() * (1.0 + SLACK);
        let right = r.cosh() * (1.0 + SLACK);
        let radius = |c: f64| beta * nearest_distance(critical, c);
        let half_width = |c: f64| {
            let d = radius(c);
            if d > b {
                Some((d * d - b * b).sqrt() * (1.0 - SLACK))
            } else {
                None
            }
        };
        let reaches = |c: f64, front: f64| half_width(c).is_some_and(|s| c - s <= front);

        let mut front = -right;
        let mut disks = Vec::new();
        while front < right {
            if !reaches(front, front) {
                r *= 0.9;
                continue 'retry;
            }
            let (mut lo, mut hi) = (front, front + 2.0);
            if reaches(hi, front) {
                lo = hi;
            } else {
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if reaches(mid, front) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            }
            let next = lo + half_width(lo).unwrap();
            if next <= front {
                r *= 0.9;
                continue 'retry;
            }
            disks.push((lo, radius(lo)));
            if disks.len() > MAX_DISKS {
                return Err(Error::CoveringFailed(format!("more than {MAX_DISKS} disks needed at r = {r}")));
            }
            front = next;
        }
        return Ok(Covering { r, disks });
    }
    Err(Error::CoveringFailed(format!("no covering after {MAX_SHRINKS} shrinks of r")))
}

/// Single-ellipse plan.
///
/// In coordinates where the path is `[-1, 1]`, takes
/// `r = (1 - eps) min acosh((|a - 1| + |a + 1|) / 2)` over the critical
/// points `a` (`R_MAX` if there are none), covers `L(-1, 1, r)` by disks and
/// bounds `g - g_ref` on their union. Lemma mode uses
/// `M = max_j (var_j + |g(c_j) - g_ref|)` with `g_ref` the center value
/// minimising it; proxy mode the largest model bound.
pub fn plan_reference(
    integrand: &AlgebraicIntegrand,
    z1: &Complex,
    z2: &Complex,
    tolerance: &Tolerance,
    options: &PlanOptions,
) -> Result<SegmentPlan> {
    check_path(integrand, z1, z2, options.beta)?;
    if !(options.epsilon > 0.0 && options.epsilon < 1.0) {
        return Err(Error::InvalidInput(format!("epsilon = {} must lie in (0, 1)", options.epsilon)));
    }
    let prec = integrand.precision();
    let (a, b) = (to_c64(z1), to_c64(z2));
    let (mid64, half64) = ((a + b) * 0.5, (b - a) * 0.5);
    let mapped: Vec<Complex64> = integrand
        .critical_points()
        .map(|p| (to_c64(p) - mid64) / half64)
        .collect();

    let r0 = if mapped.is_empty() {
        R_MAX
    } else {
        let reach = mapped
            .iter()
            .map(|w| (0.5 * ((w - 1.0).norm() + (w + 1.0).norm())).acosh())
            .fold(f64::INFINITY, f64::min);
        (1.0 - options.epsilon) * reach
    };

    let mid = Complex::with_val(prec, z1 + z2) / 2u32;
    let half = Complex::with_val(prec, z2 - z1) / 2u32;
    let half_abs = abs_up(&half);
    let to_z = |x: f64| Complex::with_val(prec, &mid + Complex::with_val(prec, &half * x));

    let covering = if mapped.is_empty() {
        let r = R_MAX;
        Covering { r, disks: vec![(0.0, r.cosh() * (1.0 + SLACK))] }
    } else {
        cover_ellipse(&mapped, r0, options.beta)?
    };

    let mut disks = Vec::with_capacity(covering.disks.len());
    match options.bound_mode {
        BoundMode::Lemma => {
            let mut tracker = BranchTracker::new(integrand)?;
            tracker.advance_to(z1)?;
            for &(c, rad) in &covering.disks {
                let center = to_z(c);
                let g = tracker.advance_to(&center)?;
                let radius = up(Float::with_val(BOUND_PREC, rad) * &half_abs);
                let cert = disk_bound(integrand, &center, &radius, &g)?;
                disks.push(CoveringDisk { center, radius, g_at_center: Some(g), bound: cert.variation_bound });
            }
        }
        BoundMode::Proxy { scale, exponent } => {
            let (scale, exponent) = (Float::with_val(BOUND_PREC, scale), Float::with_val(BOUND_PREC, exponent));
            for &(c, rad) in &covering.disks {
                let center = to_z(c);
                let radius = up(Float::with_val(BOUND_PREC, rad) * &half_abs);
                let bound = match integrand.nearest_critical(&center) {
                    Some(alpha) => proxy_bound(&scale, &exponent, alpha, &center, &radius)?,
                    None => scale.clone(),
                };
                disks.push(CoveringDisk { center, radius, g_at_center: None, bound });
            }
        }
    }
    let bound = combined_bound(&disks);

    let r = down(Float::with_val(BOUND_PREC, covering.r));
    let length = dist_up(z1, z2);
    let one = Float::with_val(BOUND_PREC, 1);
    let allotted = tolerance.scaled(&one);
    let order = required_order(&bound, &r, &length, &allotted)?;
    let semi_major = up(up(r.cosh_ref()) * &half_abs);
    let segment = PlannedSegment {
        start: Complex::with_val(prec, z1),
        end: Complex::with_val(prec, z2),
        center: mid.clone(),
        delta: semi_major,
        r,
        bound,
        share: one,
        tolerance: allotted,
        order,
        critical_distance: integrand.critical_distance(&mid),
        depth: 0,
    };
    Ok(SegmentPlan {
        segments: vec![segment],
        total_nodes: order,
        strategy: StrategyKind::Reference,
        options: *options,
        tolerance: tolerance.clone(),
        covering: disks,
    })
}

/// `min over ref of max_j (bound_j + |g(c_j) - g(c_ref)|)` in lemma mode,
/// `max_j bound_j` otherwise.
fn combined_bound(disks: &[CoveringDisk]) -> Float {
    let values: Option<Vec<Complex64>> = disks.iter().map(|d| d.g_at_center.as_ref().map(to_c64)).collect();
    let Some(values) = values.filter(|v| v.len() > 1) else {
        return disks
            .iter()
            .fold(Float::new(BOUND_PREC), |m, d| m.max(&d.bound));
    };
    let bounds: Vec<f64> = disks.iter().map(|d| d.bound.to_f64()).collect();
    let best = (0..values.len())
        .min_by(|&i, &j| {
            let cost = |k: usize| {
                values
                    .iter()
                    .zip(&bounds)
                    .map(|(v, b)| b + (v - values[k]).norm())
                    .fold(0.0, f64::max)
            };
            cost(i).total_cmp(&cost(j))
        })
        .unwrap();
    let reference = disks[best].g_at_center.as_ref().unwrap();
    disks.iter().fold(Float::new(BOUND_PREC), |m, d| {
        let offset = dist_up(d.g_at_center.as_ref().unwrap(), reference);
        m.max(&up(&d.bound + offset))
    })
}
