use std::fmt;

use rug::float::Constant;
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::num::{BOUND_PREC, MIN_PREC};

/// Polynomial with complex coefficients, stored in ascending order of degree.
///
/// Trailing (highest-degree) coefficients that are exactly zero are stripped
/// on construction, so a nonempty coefficient list always has a nonzero
/// leading coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivariatePolynomial {
    coeffs: Vec<Complex>,
}

impl UnivariatePolynomial {
    pub fn new(mut coeffs: Vec<Complex>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UnivariatePolynomial { coeffs }
    }

    /// Real coefficients, ascending.
    pub fn from_real(prec: u32, coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex::with_val(prec, c)).collect())
    }

    pub fn zero() -> Self {
        UnivariatePolynomial { coeffs: Vec::new() }
    }

    pub fn coefficients(&self) -> &[Complex] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Complex> {
        self.coeffs.last()
    }

    /// Largest coefficient precision, at least [`MIN_PREC`].
    pub fn precision(&self) -> u32 {
        self.coeffs
            .iter()
            .map(|c| c.prec().0.max(c.prec().1))
            .max()
            .unwrap_or(MIN_PREC)
            .max(MIN_PREC)
    }

    /// Horner evaluation at the larger of the coefficient and argument precisions.
    pub fn eval(&self, z: &Complex) -> Complex {
        let prec = self.precision().max(z.prec().0);
        let mut acc = Complex::new(prec);
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }

    /// `(p(z), p'(z))` in one Horner pass.
    pub fn eval_with_derivative(&self, z: &Complex) -> (Complex, Complex) {
        let prec = self.precision().max(z.prec().0);
        let mut p = Complex::new(prec);
        let mut dp = Complex::new(prec);
        for c in self.coeffs.iter().rev() {
            dp *= z;
            dp += &p;
            p *= z;
            p += c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Complex::with_val(c.prec(), c * k as u32))
                .collect(),
        )
    }

    /// `max_k |c_k|`, rounded up.
    pub fn max_coefficient(&self) -> Float {
        self.coeffs
            .iter()
            .map(crate::num::abs_up)
            .fold(Float::new(BOUND_PREC), |a, b| a.max(&b))
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        UnivariatePolynomial {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| Complex::with_val(prec, c))
                .collect(),
        }
    }
}

impl fmt::Display for UnivariatePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let (re, im) = (c.real().to_f64(), c.imag().to_f64());
            write!(f, "({re}{im:+}i)z^{k}")?;
        }
        Ok(())
    }
}

const MAX_ITERATIONS: usize = 1000;

/// `|p(a)| <= 2^-(prec-20) * max_k |c_k| * max(1, |a|)^deg`.
pub(crate) fn residual_ok(p: &UnivariatePolynomial, root: &Complex, prec: u32) -> bool {
    let deg = p.degree().unwrap_or(0) as i32;
    let value = Float::with_val(BOUND_PREC, p.eval(root).abs_ref());
    let scale = Float::with_val(BOUND_PREC, root.abs_ref()).max(&Float::with_val(BOUND_PREC, 1));
    let allowed = (p.max_coefficient() * rug::ops::Pow::pow(scale, deg)) >> prec.saturating_sub(20);
    value <= allowed
}

/// All `deg(p)` roots of `p`, counted with multiplicity.
///
/// Simultaneous Aberth-Ehrlich iteration started from a perturbed circle
/// whose radius comes from the Fujiwara bound. A cheap pass at
/// [`BOUND_PREC`] bits runs first; the result is then polished at `prec`.
/// Every returned root satisfies the residual test of [`residual_ok`].
/// Clustered roots are returned as they come out; no multiplicity is
/// certified.
pub fn poly_roots(p: &UnivariatePolynomial, prec: u32) -> Result<Vec<Complex>> {
    let prec = prec.max(MIN_PREC);
    let deg = match p.degree() {
        Some(d) if d >= 1 => d,
        _ => {
            return Err(Error::InvalidInput(format!(
                "root finding needs degree >= 1, got {p}"
            )))
        }
    };
    let radius = crate::bounds::fujiwara_root_bound(p)?;
    if radius.is_zero() {
        return Ok(vec![Complex::new(prec); deg]);
    }
    if deg == 1 {
        let c = p.coefficients();
        let root = -Complex::with_val(prec, &c[0] / &c[1]);
        return Ok(vec![root]);
    }

    let radius = radius.to_f64() * 0.5;
    let mut roots: Vec<Complex> = (0..deg)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / deg as f64 + 0.4;
            Complex::with_val(BOUND_PREC, (radius * angle.cos(), radius * angle.sin()))
        })
        .collect();

    if prec > BOUND_PREC {
        let coarse = p.with_precision(BOUND_PREC);
        aberth(&coarse, &mut roots, BOUND_PREC, 300);
        for r in roots.iter_mut() {
            r.set_prec(prec);
        }
    }
    let fine = p.with_precision(prec);
    if aberth(&fine, &mut roots, prec, MAX_ITERATIONS) {
        Ok(roots)
    } else {
        Err(Error::RootsNotConverged {
            iterations: MAX_ITERATIONS,
            precision: prec,
        })
    }
}

/// Gauss-Seidel Aberth sweeps until every root passes the residual test.
fn aberth(p: &UnivariatePolynomial, roots: &mut [Complex], prec: u32, max_iter: usize) -> bool {
    let n = roots.len();
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        for k in 0..n {
            done[k] = residual_ok(p, &roots[k], prec);
        }
        if done.iter().all(|&d| d) {
            return true;
        }
        for k in 0..n {
            if done[k] {
                continue;
            }
            let (value, deriv) = p.eval_with_derivative(&roots[k]);
            if value.is_zero() {
                continue;
            }
            let mut repulsion = Complex::new(prec);
            for j in 0..n {
                if j != k {
                    let d = Complex::with_val(prec, &roots[k] - &roots[j]);
                    if !d.is_zero() {
                        repulsion += d.recip();
                    }
                }
            }
            let step = if deriv.is_zero() {
                // nudge off a stationary point
                let eps = Float::with_val(prec, Constant::Pi) >> (prec / 2);
                Complex::with_val(prec, (eps.clone(), eps))
            } else {
                let newton = Complex::with_val(prec, &value / &deriv);
                let denom = Complex::with_val(prec, 1 - Complex::with_val(prec, &newton * &repulsion));
                if denom.is_zero() {
                    newton
                } else {
                    newton / denom
                }
            };
            if !step.real().is_finite() || !step.imag().is_finite() {
                continue;
            }
            roots[k] -= step;
        }
    }
    roots.iter().all(|r| residual_ok(p, r, prec))
}
