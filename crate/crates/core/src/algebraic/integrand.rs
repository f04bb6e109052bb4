use std::sync::Arc;

use rug::{Complex, Float};

use super::bivariate::{fmt_complex, BivariateDefiningPolynomial};
use super::poly::{poly_roots, residual_ok};
use crate::error::{Error, Result};
use crate::num::{abs_up, dist_down, down, mag, up, BOUND_PREC, MIN_PREC};

/// Zeros of `a_0` and of `Res_g(f, f_g)`, computed once per defining polynomial.
#[derive(Debug)]
struct CriticalSet {
    a0_roots: Vec<Complex>,
    disc_roots: Vec<Complex>,
    /// Position uncertainty subtracted from every distance to a critical point.
    margins: Vec<Float>,
}

impl CriticalSet {
    fn compute(f: &BivariateDefiningPolynomial, prec: u32) -> Result<Self> {
        let elevated = 2 * prec + 64;
        let a0_roots = if f.leading().degree().unwrap_or(0) >= 1 {
            poly_roots(&f.leading().with_precision(elevated), elevated)?
        } else {
            Vec::new()
        };
        let res = f.resultant_with_derivative(elevated)?;
        let disc_roots = if res.degree().unwrap_or(0) >= 1 {
            poly_roots(&res, elevated)?
        } else {
            Vec::new()
        };
        let round = |v: Vec<Complex>| -> Vec<Complex> {
            v.into_iter().map(|z| Complex::with_val(prec, z)).collect()
        };
        let (a0_roots, disc_roots) = (round(a0_roots), round(disc_roots));
        let margins = a0_roots
            .iter()
            .chain(&disc_roots)
            .map(|a| up(abs_up(a).max(&Float::with_val(BOUND_PREC, 1)) >> (prec / 2)))
            .collect();
        Ok(CriticalSet {
            a0_roots,
            disc_roots,
            margins,
        })
    }

    fn all(&self) -> impl Iterator<Item = &Complex> {
        self.a0_roots.iter().chain(&self.disc_roots)
    }
}

/// An algebraic function `g` with `f(z, g(z)) = 0`, pinned to one branch by
/// its value at the anchor point.
#[derive(Clone, Debug)]
pub struct AlgebraicIntegrand {
    f: Arc<BivariateDefiningPolynomial>,
    critical: Arc<CriticalSet>,
    anchor: Complex,
    branch_value: Complex,
    precision: u32,
}

impl AlgebraicIntegrand {
    /// Builds the integrand and snaps `approx_branch` onto the root of
    /// `f(anchor, .)` nearest to it, which must be strictly nearer than
    /// every other root.
    pub fn new(
        f: BivariateDefiningPolynomial,
        anchor: Complex,
        approx_branch: Complex,
        precision: u32,
    ) -> Result<Self> {
        if precision < MIN_PREC {
            return Err(Error::InvalidInput(format!(
                "precision must be at least {MIN_PREC} bits, got {precision}"
            )));
        }
        let critical = CriticalSet::compute(&f, precision)?;
        let mut integrand = AlgebraicIntegrand {
            f: Arc::new(f),
            critical: Arc::new(critical),
            anchor: Complex::with_val(precision, &anchor),
            branch_value: Complex::new(precision),
            precision,
        };
        integrand.check_clear_of_critical(&integrand.anchor.clone())?;
        integrand.branch_value = integrand.select_branch(&approx_branch)?;
        Ok(integrand)
    }

    fn select_branch(&self, approx: &Complex) -> Result<Complex> {
        let poly = self.f.coefficients_at(&self.anchor);
        if poly.degree() != Some(self.f.degree_g()) {
            return Err(Error::CriticalPoint(fmt_complex(&self.anchor)));
        }
        let roots = poly_roots(&poly, self.precision)?;
        let mut by_distance: Vec<(Float, Complex)> = roots
            .into_iter()
            .map(|r| (crate::num::dist_up(&r, approx), r))
            .collect();
        by_distance.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        if by_distance.len() > 1 && by_distance[0].0 >= by_distance[1].0 {
            return Err(Error::AmbiguousBranch(format!(
                "{} is equidistant from two roots",
                fmt_complex(approx)
            )));
        }
        Ok(Complex::with_val(self.precision, &by_distance[0].1))
    }

    /// Same function and branch, re-anchored at a point reached by continuation.
    pub fn with_anchor(&self, anchor: Complex, branch_value: Complex) -> Result<Self> {
        let poly = self.f.coefficients_at(&anchor);
        if !residual_ok(&poly, &branch_value, self.precision) {
            return Err(Error::BranchTracking(fmt_complex(&anchor)));
        }
        Ok(AlgebraicIntegrand {
            f: Arc::clone(&self.f),
            critical: Arc::clone(&self.critical),
            anchor: Complex::with_val(self.precision, anchor),
            branch_value: Complex::with_val(self.precision, branch_value),
            precision: self.precision,
        })
    }

    /// The same branch at a higher working precision. The anchor value is
    /// polished by Newton; critical points are kept as computed.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        if precision <= self.precision {
            return Ok(self.clone());
        }
        let anchor = Complex::with_val(precision, &self.anchor);
        let poly = self.f.coefficients_at(&anchor).with_precision(precision);
        let start = Complex::with_val(precision, &self.branch_value);
        let value = super::newton(&poly, &start, precision)
            .filter(|v| residual_ok(&poly, v, precision))
            .ok_or_else(|| Error::BranchTracking(fmt_complex(&anchor)))?;
        Ok(AlgebraicIntegrand {
            f: Arc::new(self.f.with_precision(precision)),
            critical: Arc::clone(&self.critical),
            anchor,
            branch_value: value,
            precision,
        })
    }

    pub fn f(&self) -> &BivariateDefiningPolynomial {
        &self.f
    }

    pub fn anchor(&self) -> &Complex {
        &self.anchor
    }

    pub fn branch_value(&self) -> &Complex {
        &self.branch_value
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Zeros of `a_0` (poles of `g`).
    pub fn a0_roots(&self) -> &[Complex] {
        &self.critical.a0_roots
    }

    /// Zeros of `Res_g(f, f_g)` (these include the zeros of `a_0`).
    pub fn disc_roots(&self) -> &[Complex] {
        &self.critical.disc_roots
    }

    pub fn critical_points(&self) -> impl Iterator<Item = &Complex> {
        self.critical.all()
    }

    pub fn has_critical_points(&self) -> bool {
        self.critical.all().next().is_some()
    }

    /// Lower bound on the distance from `z` to the nearest critical point,
    /// `None` when there are none.
    pub fn critical_distance(&self, z: &Complex) -> Option<Float> {
        self.critical
            .all()
            .zip(&self.critical.margins)
            .map(|(a, m)| down(dist_down(z, a) - m))
            .reduce(|a, b| a.min(&b))
    }

    /// The critical point nearest to `z`.
    pub fn nearest_critical(&self, z: &Complex) -> Option<&Complex> {
        self.critical.all().min_by(|a, b| {
            let da = crate::num::dist_up(z, a);
            let db = crate::num::dist_up(z, b);
            da.partial_cmp(&db).unwrap()
        })
    }

    /// Approximate distance to the nearest critical point, infinite if none.
    pub fn critical_distance_f64(&self, z: &Complex) -> f64 {
        self.critical
            .all()
            .map(|a| mag(&Complex::with_val(BOUND_PREC, z - a)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Minimum distance continuation keeps from critical points, `2^-(prec/2)`.
    pub fn clearance(&self) -> f64 {
        2f64.powi(-((self.precision / 2) as i32))
    }

    pub(crate) fn check_clear_of_critical(&self, z: &Complex) -> Result<()> {
        if self.critical_distance_f64(z) <= self.clearance() {
            return Err(Error::CriticalPoint(fmt_complex(z)));
        }
        Ok(())
    }

    /// Distance from the straight segment `[a, b]` to the nearest critical point.
    pub fn segment_clearance(&self, a: &Complex, b: &Complex) -> f64 {
        let a = crate::num::to_c64(a);
        let b = crate::num::to_c64(b);
        self.critical
            .all()
            .map(|p| point_segment_distance(crate::num::to_c64(p), a, b))
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn point_segment_distance(
    p: num_complex::Complex64,
    a: num_complex::Complex64,
    b: num_complex::Complex64,
) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a) * ab.conj()).re / len2;
    (p - (a + ab * t.clamp(0.0, 1.0))).norm()
}
