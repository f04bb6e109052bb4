//! Numerical continuation of one branch of `g` along straight legs.
//!
//! Predictor: tangent step `g + g'(z) h`. Corrector: Newton on `f(t, .)`.
//! A step is accepted only if the Newton corrections contract by at least a
//! factor two per iteration until convergence, and the total correction
//! stays below a quarter of the distance from the predicted value to the
//! other roots of `f(t, .)`. The other roots are followed in double
//! precision, which is all the isolation test needs. Rejected steps are
//! halved.

use num_complex::Complex64;
use rug::{Complex, Float};

use super::bivariate::fmt_complex;
use super::integrand::AlgebraicIntegrand;
use super::poly::{residual_ok, UnivariatePolynomial};
use crate::error::{Error, Result};
use crate::num::{abs_up, mag, to_c64, BOUND_PREC};

const MAX_NEWTON: usize = 60;

/// Walks one branch of an integrand from its anchor through a sequence of points.
#[derive(Clone)]
pub struct BranchTracker<'a> {
    integrand: &'a AlgebraicIntegrand,
    z: Complex,
    value: Complex,
    derivative: Option<Complex>,
    roots: Vec<Complex64>,
    index: usize,
    step_hint: f64,
}

impl<'a> BranchTracker<'a> {
    pub fn new(integrand: &'a AlgebraicIntegrand) -> Result<Self> {
        let z = integrand.anchor().clone();
        let value = integrand.branch_value().clone();
        let poly = integrand.f().coefficients_at(&z);
        let roots = if integrand.f().degree_g() > 1 {
            let init = initial_f64_roots(&poly);
            aberth_f64(&coeffs_f64(&poly), init)
                .ok_or_else(|| Error::BranchTracking(fmt_complex(&z)))?
        } else {
            vec![to_c64(&value)]
        };
        let v = to_c64(&value);
        let index = nearest(&roots, v);
        let mut tracker = BranchTracker {
            integrand,
            z,
            value,
            derivative: None,
            roots,
            index,
            step_hint: f64::INFINITY,
        };
        tracker.roots[index] = v;
        Ok(tracker)
    }

    pub fn position(&self) -> &Complex {
        &self.z
    }

    pub fn value(&self) -> &Complex {
        &self.value
    }

    /// Continue along the straight leg to `target` and return `g(target)`.
    pub fn advance_to(&mut self, target: &Complex) -> Result<Complex> {
        let prec = self.integrand.precision();
        let clearance = self.integrand.clearance();
        if self.integrand.segment_clearance(&self.z, target) <= clearance {
            return Err(Error::CriticalPoint(format!(
                "{} (on the leg towards {})",
                fmt_complex(&self.z),
                fmt_complex(target)
            )));
        }
        loop {
            let remaining = Complex::with_val(prec, target - &self.z);
            let dist = mag(&remaining);
            if dist == 0.0 {
                return Ok(self.value.clone());
            }
            let crit = self.integrand.critical_distance_f64(&self.z);
            let min_step = clearance * mag(&self.z).max(1.0);
            let mut step = dist.min(self.step_hint).min(0.5 * crit);
            loop {
                let t = if step >= dist {
                    target.clone()
                } else {
                    let ratio = Float::with_val(prec, step / dist);
                    Complex::with_val(prec, &self.z + Complex::with_val(prec, &remaining * &ratio))
                };
                if self.try_step(&t)? {
                    self.step_hint = self.step_hint.max(2.0 * step);
                    if self.step_hint.is_infinite() {
                        self.step_hint = 2.0 * step;
                    }
                    break;
                }
                step *= 0.5;
                self.step_hint = step;
                if step < min_step {
                    return Err(Error::BranchTracking(fmt_complex(&self.z)));
                }
            }
        }
    }

    /// Attempt one step to `t`. `Ok(false)` means the step was rejected.
    fn try_step(&mut self, t: &Complex) -> Result<bool> {
        let integrand = self.integrand;
        let f = integrand.f();
        let prec = integrand.precision();
        let h = Complex::with_val(prec, t - &self.z);

        if self.derivative.is_none() {
            self.derivative = Some(f.branch_derivative(&self.z, &self.value)?);
        }
        let predicted = Complex::with_val(
            prec,
            &self.value + Complex::with_val(prec, self.derivative.as_ref().unwrap() * &h),
        );

        let poly = f.coefficients_at(t);
        if poly.degree() != Some(f.degree_g()) {
            return Ok(false);
        }
        let Some(x) = newton(&poly, &predicted, prec) else {
            return Ok(false);
        };
        if !residual_ok(&poly, &x, prec) {
            return Ok(false);
        }

        let x64 = to_c64(&x);
        let pred64 = to_c64(&predicted);
        let mut roots = self.roots.clone();
        let mut index = 0;
        if roots.len() > 1 {
            roots[self.index] = pred64;
            let Some(moved) = aberth_f64(&coeffs_f64(&poly), roots) else {
                return Ok(false);
            };
            roots = moved;
            index = nearest(&roots, x64);
            let isolation = roots
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != index)
                .map(|(_, r)| (r - pred64).norm())
                .fold(f64::INFINITY, f64::min);
            let correction = mag(&Complex::with_val(BOUND_PREC, &x - &predicted));
            if !(correction < 0.25 * isolation) || (roots[index] - x64).norm() >= 0.25 * isolation {
                return Ok(false);
            }
        }
        roots[index] = x64;
        self.roots = roots;
        self.index = index;
        self.z = t.clone();
        self.value = x;
        self.derivative = None;
        Ok(true)
    }
}

/// Newton from `start`, requiring each correction to at most halve the
/// previous one until the relative correction drops below `2^-(prec-4)`.
/// One extra polishing step is taken after convergence.
pub(crate) fn newton(poly: &UnivariatePolynomial, start: &Complex, prec: u32) -> Option<Complex> {
    let mut x = start.clone();
    let mut previous: Option<Float> = None;
    for _ in 0..MAX_NEWTON {
        let (p, dp) = poly.eval_with_derivative(&x);
        if dp.is_zero() {
            return None;
        }
        let d = Complex::with_val(prec, p / dp);
        x -= &d;
        let size = abs_up(&d);
        let tol = abs_up(&x).max(&Float::with_val(BOUND_PREC, 1)) >> prec.saturating_sub(4);
        if size <= tol {
            let (p, dp) = poly.eval_with_derivative(&x);
            if !dp.is_zero() {
                x -= Complex::with_val(prec, p / dp);
            }
            return Some(x);
        }
        if let Some(prev) = &previous {
            if Float::with_val(BOUND_PREC, &size * 2u32) > *prev {
                return None;
            }
        }
        previous = Some(size);
    }
    None
}

fn coeffs_f64(poly: &UnivariatePolynomial) -> Vec<Complex64> {
    poly.coefficients().iter().map(to_c64).collect()
}

fn nearest(roots: &[Complex64], v: Complex64) -> usize {
    roots
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - v).norm().total_cmp(&(b.1 - v).norm()))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

fn initial_f64_roots(poly: &UnivariatePolynomial) -> Vec<Complex64> {
    let n = poly.degree().unwrap_or(0);
    let radius = crate::bounds::fujiwara_root_bound(poly)
        .map(|b| b.to_f64() * 0.5)
        .unwrap_or(1.0)
        .max(1e-3);
    (0..n)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64 + 0.4))
        .collect()
}

/// Double-precision Aberth iteration from `roots`; `None` if it fails to settle.
fn aberth_f64(coeffs: &[Complex64], mut roots: Vec<Complex64>) -> Option<Vec<Complex64>> {
    let n = roots.len();
    for _ in 0..200 {
        let mut biggest = 0.0f64;
        for k in 0..n {
            let z = roots[k];
            let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for c in coeffs.iter().rev() {
                dp = dp * z + p;
                p = p * z + c;
            }
            if p.norm() == 0.0 {
                continue;
            }
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k && roots[j] != z)
                .map(|j| (z - roots[j]).inv())
                .sum();
            let newton = p / dp;
            let step = newton / (1.0 - newton * repulsion);
            if !step.is_finite() {
                return None;
            }
            roots[k] -= step;
            biggest = biggest.max(step.norm() / z.norm().max(1.0));
        }
        if biggest < 1e-14 {
            return Some(roots);
        }
    }
    None
}

/// `g` at each of `targets`, continuing along straight legs from the anchor
/// through the targets in order.
pub fn continue_branch(integrand: &AlgebraicIntegrand, targets: &[Complex]) -> Result<Vec<Complex>> {
    let mut tracker = BranchTracker::new(integrand)?;
    targets.iter().map(|t| tracker.advance_to(t)).collect()
}
