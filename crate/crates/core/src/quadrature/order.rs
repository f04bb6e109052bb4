use rug::float::{Constant, Round};
use rug::{Complex, Float};

use crate::error::{Error, Result};
use crate::num::{abs_up, down, up, BOUND_PREC};

/// Bernstein ellipse `L(z1, z2, r)`: `|z - z1| + |z - z2| <= cosh(r) |z2 - z1|`.
#[derive(Clone, Debug)]
pub struct Ellipse {
    pub focus1: Complex,
    pub focus2: Complex,
    pub r: Float,
}

impl Ellipse {
    pub fn new(focus1: Complex, focus2: Complex, r: Float) -> Result<Self> {
        if focus1 == focus2 {
            return Err(Error::InvalidInput("ellipse foci coincide".into()));
        }
        if r <= 0 {
            return Err(Error::InvalidInput(format!("ellipse parameter r = {r} must be positive")));
        }
        Ok(Ellipse { focus1, focus2, r })
    }

    pub fn contains(&self, z: &Complex) -> bool {
        let prec = z.prec().0.max(BOUND_PREC);
        let d1 = Complex::with_val(prec, z - &self.focus1).abs();
        let d2 = Complex::with_val(prec, z - &self.focus2).abs();
        let chord = Complex::with_val(prec, &self.focus2 - &self.focus1).abs();
        Float::with_val(prec, d1.real() + d2.real()) <= Float::with_val(prec, self.r.cosh_ref()) * chord.real()
    }

    /// Semi-major axis `cosh(r) |z2 - z1| / 2`.
    pub fn semi_major(&self) -> Float {
        let chord = abs_up(&Complex::with_val(BOUND_PREC, &self.focus2 - &self.focus1));
        up(up(self.r.cosh_ref()) * chord) / 2u32
    }
}

/// `pi + 64 / (15 (e^{2r} - 1))`, rounded up.
fn ellipse_constant(r: &Float) -> Float {
    let two_r = down(r * 2u32);
    let em1 = down(two_r.exp_m1_ref());
    let frac = up(Float::with_val(BOUND_PREC, 64) / down(em1 * 15u32));
    let pi = Float::with_val_round(BOUND_PREC, Constant::Pi, Round::Up).0;
    up(pi + frac)
}

/// Smallest `N >= 1` with
/// `N >= [log(pi + 64/(15(e^{2r}-1))) + log M + log(chord/2) - log E_tol] / (2r)`.
///
/// `tolerance` is the (already scaled) absolute tolerance for this segment.
/// A zero bound needs a single node.
pub fn required_order(bound: &Float, r: &Float, chord: &Float, tolerance: &Float) -> Result<usize> {
    if *r <= 0 || *chord <= 0 || *tolerance <= 0 || *bound < 0 {
        return Err(Error::InvalidInput(format!(
            "required_order domain: M = {bound}, r = {r}, chord = {chord}, E = {tolerance}"
        )));
    }
    if bound.is_zero() {
        return Ok(1);
    }
    let bracket = up(up(ellipse_constant(r).ln_ref())
        + up(up(bound.ln_ref()) + up(up(chord / 2u32).ln_ref())));
    let bracket = up(bracket - down(tolerance.ln_ref()));
    if bracket <= 0 {
        return Ok(1);
    }
    let n = up(bracket / down(r * 2u32)).ceil();
    let n = n
        .to_integer()
        .and_then(|i| i.to_usize())
        .ok_or_else(|| Error::InvalidInput(format!("required order {n} is out of range")))?;
    Ok(n.max(1))
}

/// `(pi + 64/(15(e^{2r}-1))) M / e^{2Nr}`, rounded up.
pub fn gl_error_bound(bound: &Float, r: &Float, order: usize) -> Float {
    let decay = down(Float::with_val(BOUND_PREC, r * 2u32) * order as u64);
    let factor = up((-decay).exp());
    up(up(ellipse_constant(r) * bound) * factor)
}
