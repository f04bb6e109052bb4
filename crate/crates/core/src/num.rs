//! Multiprecision helpers shared by all modules.
//!
//! Complex quantities (`z`, branch values, critical points) are
//! [`rug::Complex`] values at the working precision. Real quantities that
//! enter a rigorous bound are [`rug::Float`] values at [`BOUND_PREC`] bits,
//! always produced through [`up`] or [`down`] so the rounding direction is
//! explicit at every step.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rug::float::Round;
use rug::ops::AssignRound;
use rug::{Complex, Float};

use crate::error::{Error, Result};

pub type BigComplex = Complex;

/// Smallest working precision accepted anywhere in the crate.
pub const MIN_PREC: u32 = 53;

/// Precision of real-valued bound arithmetic.
pub const BOUND_PREC: u32 = 64;

/// Round `val` toward +inf at [`BOUND_PREC`].
pub fn up<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(BOUND_PREC, val, Round::Up).0
}

/// Round `val` toward -inf at [`BOUND_PREC`].
pub fn down<T>(val: T) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(BOUND_PREC, val, Round::Down).0
}

/// Bound-precision float holding `x` exactly.
pub fn real(x: f64) -> Float {
    Float::with_val(BOUND_PREC, x)
}

pub fn cplx(prec: u32, re: f64, im: f64) -> Complex {
    Complex::with_val(prec, (re, im))
}

pub fn abs_up(z: &Complex) -> Float {
    up(z.abs_ref())
}

pub fn abs_down(z: &Complex) -> Float {
    down(z.abs_ref())
}

fn diff(a: &Complex, b: &Complex) -> (Complex, u32) {
    let prec = a.prec().0.max(b.prec().0).max(MIN_PREC);
    (Complex::with_val(prec, a - b), prec)
}

/// Lower bound for `|a - b|` that absorbs the rounding of the subtraction.
pub fn dist_down(a: &Complex, b: &Complex) -> Float {
    let (d, prec) = diff(a, b);
    let shrink = down(1 - (Float::with_val(BOUND_PREC, 1) >> (prec - 1)));
    down(abs_down(&d) * shrink)
}

/// Upper bound for `|a - b|`.
pub fn dist_up(a: &Complex, b: &Complex) -> Float {
    let (d, prec) = diff(a, b);
    let grow = up(1 + (Float::with_val(BOUND_PREC, 1) >> (prec - 1)));
    up(abs_up(&d) * grow)
}

pub fn to_c64(z: &Complex) -> Complex64 {
    Complex64::new(z.real().to_f64(), z.imag().to_f64())
}

/// `|z|` as a double, for heuristics only (step control, geometry sweeps).
pub fn mag(z: &Complex) -> f64 {
    Float::with_val(BOUND_PREC, z.abs_ref()).to_f64()
}

/// Absolute error tolerance `E_tol > 0`.
///
/// Powers of two are held exactly; decimal input is rounded down so the
/// stored value never exceeds what the user asked for.
#[derive(Clone, Debug, PartialEq)]
pub struct Tolerance {
    value: Float,
    pow2: Option<u32>,
}

impl Tolerance {
    pub fn pow2(k: u32) -> Self {
        Tolerance {
            value: Float::with_val(BOUND_PREC, 1) >> k,
            pow2: Some(k),
        }
    }

    pub fn from_float(value: Float) -> Result<Self> {
        if !value.is_finite() || value <= 0 {
            return Err(Error::InvalidInput(format!(
                "tolerance must be positive and finite, got {value}"
            )));
        }
        let value = down(&value);
        let pow2 = value
            .get_exp()
            .filter(|&e| e <= 0 && value == Float::with_val(BOUND_PREC, 0.5) >> (-e) as u32)
            .map(|e| (1 - e) as u32);
        Ok(Tolerance { value, pow2 })
    }

    pub fn value(&self) -> &Float {
        &self.value
    }

    /// `ceil(-log2 E_tol)`, clamped at zero.
    pub fn bits(&self) -> u32 {
        let e = self.value.get_exp().unwrap_or(0);
        (1 - e).max(0) as u32
    }

    /// `share * E_tol` rounded down.
    pub fn scaled(&self, share: &Float) -> Float {
        down(&self.value * share)
    }
}

impl FromStr for Tolerance {
    type Err = Error;

    /// Accepts `2^-<int>` or a decimal such as `1e-30`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(exp) = s.strip_prefix("2^") {
            let k: i64 = exp
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad tolerance exponent in {s:?}")))?;
            if k >= 0 || k < -(1 << 24) {
                return Err(Error::InvalidInput(format!(
                    "tolerance exponent must be negative, got {s:?}"
                )));
            }
            return Ok(Tolerance::pow2((-k) as u32));
        }
        let parsed = Float::parse(s)
            .map_err(|e| Error::InvalidInput(format!("bad tolerance {s:?}: {e}")))?;
        Tolerance::from_float(down(parsed))
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pow2 {
            Some(k) => write!(f, "2^-{k}"),
            None => write!(f, "{}", self.value.to_string_radix(10, Some(20))),
        }
    }
}
