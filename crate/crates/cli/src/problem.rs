//! Problem files.
//!
//! ```json
//! {
//!   "f": [["1"], ["-1", "0", "-1"]],
//!   "path": ["-1", "1"],
//!   "branch_value": "2",
//!   "e_tol": "2^-100",
//!   "strategy": "main"
//! }
//! ```
//!
//! `f` lists the rows `a_0 .. a_n` of `f(z, g) = a_0(z) g^n + ... + a_n(z)`,
//! each by its coefficients in ascending powers of `z`. Complex numbers are
//! strings such as `"0.3-0.4i"`, `"1/3"`, `"-2i"`, or `{"re": .., "im": ..}`.

use std::str::FromStr;

use rug::{Complex, Float, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use rig_core::num::MIN_PREC;
use rig_core::{
    AlgebraicIntegrand, BivariateDefiningPolynomial, PlanOptions, Tolerance, ToleranceMode,
    UnivariatePolynomial,
};

/// Extra bits above `-log2 E_tol` used when parsing and locating critical points.
pub const PARSE_GUARD_BITS: u32 = 50;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    #[default]
    Main,
    Reference,
    Heuristic,
}

impl Strategy {
    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Main => "main",
            Strategy::Reference => "reference",
            Strategy::Heuristic => "heuristic",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum TolMode {
    Uniform,
    Length,
}

impl From<TolMode> for ToleranceMode {
    fn from(m: TolMode) -> Self {
        match m {
            TolMode::Uniform => ToleranceMode::Uniform,
            TolMode::Length => ToleranceMode::LengthWeighted,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexInput {
    Text(String),
    Parts {
        re: String,
        #[serde(default)]
        im: Option<String>,
    },
}

impl ComplexInput {
    pub fn parse(&self, prec: u32) -> Result<Complex> {
        match self {
            ComplexInput::Text(s) => parse_complex(s, prec),
            ComplexInput::Parts { re, im } => {
                let re = parse_real(re, prec)?;
                let im = match im {
                    Some(im) => parse_real(im, prec)?,
                    None => Float::new(prec),
                };
                Ok(Complex::with_val(prec, (re, im)))
            }
        }
    }
}

impl From<&str> for ComplexInput {
    fn from(s: &str) -> Self {
        ComplexInput::Text(s.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    pub f: Vec<Vec<ComplexInput>>,
    pub path: [ComplexInput; 2],
    pub branch_value: ComplexInput,
    pub e_tol: String,
    #[serde(default)]
    pub strategy: Strategy,
    #[serde(default)]
    pub beta: Option<f64>,
    #[serde(default)]
    pub epsilon: Option<f64>,
    #[serde(default)]
    pub tolerance_mode: Option<TolMode>,
    #[serde(default)]
    pub precision_override: Option<u32>,
}

/// Command-line settings that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub strategy: Option<Strategy>,
    pub beta: Option<f64>,
    pub epsilon: Option<f64>,
    pub tolerance_mode: Option<TolMode>,
    pub precision: Option<u32>,
}

/// A parsed problem ready for planning.
#[derive(Clone, Debug)]
pub struct Problem {
    pub integrand: AlgebraicIntegrand,
    pub start: Complex,
    pub end: Complex,
    pub tolerance: Tolerance,
    pub strategy: Strategy,
    pub options: PlanOptions,
    pub precision: u32,
}

impl ProblemSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn resolve(&self, overrides: &Overrides) -> Result<Problem> {
        let tolerance = Tolerance::from_str(&self.e_tol)?;
        let precision = overrides
            .precision
            .or(self.precision_override)
            .unwrap_or(tolerance.bits() + PARSE_GUARD_BITS);
        if precision < MIN_PREC {
            return Err(CliError::Parse(format!(
                "precision must be at least {MIN_PREC} bits, got {precision}"
            )));
        }
        let rows = self
            .f
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| c.parse(precision))
                    .collect::<Result<Vec<_>>>()
                    .map(UnivariatePolynomial::new)
            })
            .collect::<Result<Vec<_>>>()?;
        let f = BivariateDefiningPolynomial::new(rows)?;
        let start = self.path[0].parse(precision)?;
        let end = self.path[1].parse(precision)?;
        let branch = self.branch_value.parse(precision)?;
        let integrand = AlgebraicIntegrand::new(f, start.clone(), branch, precision)?;

        let defaults = PlanOptions::default();
        let options = PlanOptions {
            beta: overrides.beta.or(self.beta).unwrap_or(defaults.beta),
            epsilon: overrides.epsilon.or(self.epsilon).unwrap_or(defaults.epsilon),
            tolerance_mode: overrides
                .tolerance_mode
                .or(self.tolerance_mode)
                .map(Into::into)
                .unwrap_or(defaults.tolerance_mode),
            ..defaults
        };
        Ok(Problem {
            integrand,
            start,
            end,
            tolerance,
            strategy: overrides.strategy.unwrap_or(self.strategy),
            options,
            precision,
        })
    }
}

/// Decimal (`1.5e-3`) or rational (`-7/3`) real number.
pub fn parse_real(s: &str, prec: u32) -> Result<Float> {
    let s = s.trim();
    if s.contains('/') {
        let q = Rational::from_str(s).map_err(|e| CliError::Parse(format!("bad rational {s:?}: {e}")))?;
        return Ok(Float::with_val(prec, q));
    }
    let parsed = Float::parse(s).map_err(|e| CliError::Parse(format!("bad number {s:?}: {e}")))?;
    Ok(Float::with_val(prec, parsed))
}

/// `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`, with `a`, `b` as in [`parse_real`].
pub fn parse_complex(s: &str, prec: u32) -> Result<Complex> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(CliError::Parse("empty complex number".into()));
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(Complex::with_val(prec, (parse_real(&t, prec)?, 0)));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k], prec)?, imaginary_coefficient(&body[k..], prec)?),
        None => (Float::new(prec), imaginary_coefficient(body, prec)?),
    };
    Ok(Complex::with_val(prec, (re, im)))
}

fn imaginary_coefficient(s: &str, prec: u32) -> Result<Float> {
    match s {
        "" | "+" => Ok(Float::with_val(prec, 1)),
        "-" => Ok(Float::with_val(prec, -1)),
        _ => parse_real(s.strip_prefix('+').unwrap_or(s), prec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: u32 = 128;

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(P, (re, im))
    }

    #[test]
    fn complex_grammar() {
        assert_eq!(parse_complex("0.5+0.25i", P).unwrap(), c(0.5, 0.25));
        assert_eq!(parse_complex("0.5-0.25i", P).unwrap(), c(0.5, -0.25));
        assert_eq!(parse_complex("-2i", P).unwrap(), c(0.0, -2.0));
        assert_eq!(parse_complex("i", P).unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i", P).unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("3-i", P).unwrap(), c(3.0, -1.0));
        assert_eq!(parse_complex(" -1.5e-1 + 2e+1i ", P).unwrap(), parse_complex("-3/20+20i", P).unwrap());
        assert_eq!(parse_complex("4", P).unwrap(), c(4.0, 0.0));
        assert!(parse_complex("", P).is_err());
        assert!(parse_complex("1+2j", P).is_err());
        assert!(parse_complex("abc", P).is_err());
    }

    #[test]
    fn rationals_round_once() {
        let third = parse_complex("1/3-2/3i", P).unwrap();
        let q = Rational::from((1, 3));
        assert_eq!(*third.real(), Float::with_val(P, &q));
        assert_eq!(*third.imag(), Float::with_val(P, -2 * q));
    }

    #[test]
    fn spec_resolves_with_overrides() {
        let spec = ProblemSpec::from_json(
            r#"{"f": [["1"], ["-1", "0", "-1"]], "path": ["-1", "1"],
                "branch_value": "2", "e_tol": "2^-100", "beta": 0.8}"#,
        )
        .unwrap();
        let p = spec.resolve(&Overrides::default()).unwrap();
        assert_eq!(p.precision, 150);
        assert_eq!(p.strategy, Strategy::Main);
        assert_eq!(p.options.beta, 0.8);
        let p = spec
            .resolve(&Overrides { beta: Some(0.5), strategy: Some(Strategy::Reference), precision: Some(200), ..Default::default() })
            .unwrap();
        assert_eq!((p.options.beta, p.strategy, p.precision), (0.5, Strategy::Reference, 200));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let e = ProblemSpec::from_json(
            r#"{"f": [["1"]], "path": ["0", "1"], "branch_value": "0", "e_tol": "1e-10", "colour": 3}"#,
        );
        assert!(e.is_err());
    }

    #[test]
    fn object_form_of_complex_numbers() {
        let v: ComplexInput = serde_json::from_str(r#"{"re": "1/4", "im": "-3"}"#).unwrap();
        assert_eq!(v.parse(P).unwrap(), c(0.25, -3.0));
    }
}
