#![allow(dead_code)]

use rig_core::algebraic::{AlgebraicIntegrand, BivariateDefiningPolynomial, UnivariatePolynomial};
use rug::{Complex, Float};

/// `f = (z - z0) g^2 - 1`, branch principal at `anchor`.
pub fn inv_sqrt(z0: &Complex, anchor: &Complex, prec: u32) -> AlgebraicIntegrand {
    let f = BivariateDefiningPolynomial::new(vec![
        UnivariatePolynomial::new(vec![Complex::with_val(prec, -z0), Complex::with_val(prec, 1)]),
        UnivariatePolynomial::zero(),
        UnivariatePolynomial::new(vec![Complex::with_val(prec, -1)]),
    ])
    .unwrap();
    let principal = Complex::with_val(prec, anchor - z0).sqrt().recip();
    AlgebraicIntegrand::new(f, anchor.clone(), principal, prec).unwrap()
}

/// `f = (z - z0) g - 1`.
pub fn inv_linear(z0: &Complex, anchor: &Complex, prec: u32) -> AlgebraicIntegrand {
    let f = BivariateDefiningPolynomial::new(vec![
        UnivariatePolynomial::new(vec![Complex::with_val(prec, -z0), Complex::with_val(prec, 1)]),
        UnivariatePolynomial::new(vec![Complex::with_val(prec, -1)]),
    ])
    .unwrap();
    let value = Complex::with_val(prec, anchor - z0).recip();
    AlgebraicIntegrand::new(f, anchor.clone(), value, prec).unwrap()
}

/// `int_a^b (z - z0)^(-1/2) dz` along the straight path from `start` through
/// `a` to `b`, on the branch that is principal at `start`.
///
/// With `u = (z - z0) / (start - z0)` the path is a line through `u = 1`
/// that avoids `0`, so it never crosses the negative reals and the
/// principal `sqrt(u)` is continuous along it.
pub fn inv_sqrt_integral(z0: &Complex, start: &Complex, a: &Complex, b: &Complex, prec: u32) -> Complex {
    let s = Complex::with_val(prec, start - z0);
    let ua = Complex::with_val(prec, Complex::with_val(prec, a - z0) / &s).sqrt();
    let ub = Complex::with_val(prec, Complex::with_val(prec, b - z0) / &s).sqrt();
    Complex::with_val(prec, s.sqrt() * Complex::with_val(prec, ub - ua)) * 2u32
}

/// `int_a^b dz / (z - z0)` along a straight segment not through `z0`:
/// the swept angle is below pi, so the principal logarithm is right.
pub fn inv_linear_integral(z0: &Complex, a: &Complex, b: &Complex, prec: u32) -> Complex {
    let ratio = Complex::with_val(prec, b - z0) / Complex::with_val(prec, a - z0);
    ratio.ln()
}

pub fn cplx(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn err(a: &Complex, b: &Complex) -> Float {
    let prec = a.prec().0.max(b.prec().0);
    Complex::with_val(prec, a - b).abs().real().clone()
}

/// `p/q` (real and imaginary parts) rounded to `prec`.
pub fn rational(prec: u32, re: (i64, u64), im: (i64, u64)) -> Complex {
    let r = Float::with_val(prec, re.0) / re.1;
    let i = Float::with_val(prec, im.0) / im.1;
    Complex::with_val(prec, (r, i))
}
