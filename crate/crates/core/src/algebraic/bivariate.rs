use rug::float::Constant;
use rug::{Complex, Float};

use super::poly::UnivariatePolynomial;
use crate::error::{Error, Result};
use crate::num::{abs_up, BOUND_PREC, MIN_PREC};

/// `f(z, g) = a_0(z) g^n + a_1(z) g^(n-1) + ... + a_n(z)`.
///
/// Row `i` holds `a_i(z)`; `n >= 1` and `a_0` is not the zero polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateDefiningPolynomial {
    rows: Vec<UnivariatePolynomial>,
}

impl BivariateDefiningPolynomial {
    pub fn new(rows: Vec<UnivariatePolynomial>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidInput(
                "defining polynomial needs degree >= 1 in g".into(),
            ));
        }
        if rows[0].is_zero() {
            return Err(Error::InvalidInput("a_0 must not be the zero polynomial".into()));
        }
        Ok(BivariateDefiningPolynomial { rows })
    }

    /// Rows of real coefficients, each ascending in `z`.
    pub fn from_real(prec: u32, rows: &[&[f64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| UnivariatePolynomial::from_real(prec, r))
                .collect(),
        )
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        BivariateDefiningPolynomial {
            rows: self.rows.iter().map(|r| r.with_precision(prec)).collect(),
        }
    }

    pub fn rows(&self) -> &[UnivariatePolynomial] {
        &self.rows
    }

    pub fn leading(&self) -> &UnivariatePolynomial {
        &self.rows[0]
    }

    /// `n`, the degree in `g`.
    pub fn degree_g(&self) -> usize {
        self.rows.len() - 1
    }

    /// Largest `deg a_i`.
    pub fn degree_z(&self) -> usize {
        self.rows.iter().filter_map(|r| r.degree()).max().unwrap_or(0)
    }

    pub fn precision(&self) -> u32 {
        self.rows.iter().map(|r| r.precision()).max().unwrap_or(MIN_PREC)
    }

    /// `f(z, .)` as a polynomial in `g`, ascending.
    pub fn coefficients_at(&self, z: &Complex) -> UnivariatePolynomial {
        UnivariatePolynomial::new(self.rows.iter().rev().map(|a| a.eval(z)).collect())
    }

    /// Values and `z`-derivatives of all `a_i` at `z`, in ascending `g` order.
    pub(crate) fn coefficients_with_derivative_at(
        &self,
        z: &Complex,
    ) -> (Vec<Complex>, Vec<Complex>) {
        self.rows
            .iter()
            .rev()
            .map(|a| a.eval_with_derivative(z))
            .unzip()
    }

    pub fn eval_f(&self, z: &Complex, g: &Complex) -> Complex {
        self.coefficients_at(z).eval(g)
    }

    /// `(f, df/dz, df/dg)` at `(z, g)`.
    pub fn partials(&self, z: &Complex, g: &Complex) -> (Complex, Complex, Complex) {
        let (values, dvalues) = self.coefficients_with_derivative_at(z);
        let (f, fg) = UnivariatePolynomial::new(values).eval_with_derivative(g);
        let fz = UnivariatePolynomial::new(dvalues).eval(g);
        (f, fz, fg)
    }

    /// `g'(z) = -f_z / f_g` by implicit differentiation.
    pub fn branch_derivative(&self, z: &Complex, g: &Complex) -> Result<Complex> {
        let (_, fz, fg) = self.partials(z, g);
        let prec = fg.prec().0;
        let scale = self
            .coefficients_at(z)
            .max_coefficient()
            .max(&Float::with_val(BOUND_PREC, 1e-300));
        let g_scale = abs_up(g).max(&Float::with_val(BOUND_PREC, 1));
        let floor = Float::with_val(BOUND_PREC, &scale * &g_scale) >> prec.saturating_sub(30);
        if abs_up(&fg) <= floor {
            return Err(Error::CriticalPoint(fmt_complex(z)));
        }
        Ok(Complex::with_val(prec, -fz / fg))
    }

    /// `Res_g(f, df/dg)` as a polynomial in `z`.
    ///
    /// Its zero set is the union of the zeros of `a_0` and of `disc_g(f)`.
    /// Sylvester determinants are sampled on the unit circle at `prec` bits
    /// and interpolated by an inverse DFT; leading coefficients below the
    /// sampling noise are dropped.
    pub fn resultant_with_derivative(&self, prec: u32) -> Result<UnivariatePolynomial> {
        let n = self.degree_g();
        let degree_bound = (2 * n - 1) * self.degree_z();
        let samples = degree_bound + 1;
        let rows: Vec<_> = self.rows.iter().map(|r| r.with_precision(prec)).collect();
        let two_pi = Float::with_val(prec, Constant::Pi) * 2u32;

        let mut values = Vec::with_capacity(samples);
        let mut hadamard_max = Float::new(BOUND_PREC);
        let mut nodes = Vec::with_capacity(samples);
        for j in 0..samples {
            let angle = Float::with_val(prec, &two_pi * j as u32) / samples as u32;
            let w = Complex::with_val(prec, (Float::new(prec), angle)).exp();
            let coeffs: Vec<Complex> = rows.iter().rev().map(|a| a.eval(&w)).collect();
            let (det, hadamard) = sylvester_determinant(&coeffs, prec);
            hadamard_max.max_mut(&hadamard);
            values.push(det);
            nodes.push(w);
        }

        let mut coeffs = Vec::with_capacity(samples);
        for k in 0..samples {
            let mut acc = Complex::new(prec);
            for (j, v) in values.iter().enumerate() {
                // w_j^(-k) = conj(w_j)^k = conj(w_{jk mod m})
                let w = nodes[(j * k) % samples].clone().conj();
                acc += v * w;
            }
            coeffs.push(acc / samples as u32);
        }

        let noise = Float::with_val(BOUND_PREC, &hadamard_max) >> (prec / 2);
        let max_coeff = coeffs
            .iter()
            .map(abs_up)
            .fold(Float::new(BOUND_PREC), |a, b| a.max(&b));
        if max_coeff <= noise {
            return Err(Error::InvalidInput(
                "f has a repeated factor in g: its discriminant vanishes identically".into(),
            ));
        }
        let cutoff = Float::with_val(BOUND_PREC, &max_coeff) >> (prec / 2);
        while coeffs.last().is_some_and(|c| abs_up(c) <= cutoff) {
            coeffs.pop();
        }
        Ok(UnivariatePolynomial::new(coeffs))
    }
}

/// Determinant of the Sylvester matrix of `p` and `p'`, both taken with
/// their formal degrees `n` and `n - 1`; also returns the Hadamard bound
/// used to judge cancellation.
fn sylvester_determinant(p: &[Complex], prec: u32) -> (Complex, Float) {
    let n = p.len() - 1;
    let size = 2 * n - 1;
    let dp: Vec<Complex> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| Complex::with_val(prec, c * k as u32))
        .collect();
    let mut m = vec![vec![Complex::new(prec); size]; size];
    // rows 0..n-1: p shifted; rows n-1..2n-1: p' shifted; descending powers
    for r in 0..n - 1 {
        for (k, c) in p.iter().rev().enumerate() {
            m[r][r + k] = c.clone();
        }
    }
    for r in 0..n {
        for (k, c) in dp.iter().rev().enumerate() {
            m[n - 1 + r][r + k] = c.clone();
        }
    }
    let mut hadamard = Float::with_val(BOUND_PREC, 1);
    for row in &m {
        let norm = row
            .iter()
            .map(|c| Float::with_val(BOUND_PREC, c.norm_ref()))
            .fold(Float::new(BOUND_PREC), |a, b| a + b)
            .sqrt();
        hadamard *= norm;
    }

    let mut det = Complex::with_val(prec, 1);
    for col in 0..size {
        let pivot = (col..size)
            .max_by(|&a, &b| {
                let na = Float::with_val(BOUND_PREC, m[a][col].norm_ref());
                let nb = Float::with_val(BOUND_PREC, m[b][col].norm_ref());
                na.partial_cmp(&nb).unwrap()
            })
            .unwrap();
        if m[pivot][col].is_zero() {
            return (Complex::new(prec), hadamard);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= &m[col][col];
        let inv = Complex::with_val(prec, m[col][col].recip_ref());
        for r in col + 1..size {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = Complex::with_val(prec, &m[r][col] * &inv);
            for c in col..size {
                let t = Complex::with_val(prec, &factor * &m[col][c]);
                m[r][c] -= t;
            }
        }
    }
    (det, hadamard)
}

pub(crate) fn fmt_complex(z: &Complex) -> String {
    let re = z.real().to_f64();
    let im = z.imag().to_f64();
    format!("{re}{im:+}i")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::poly_roots;

    fn c(re: f64, im: f64) -> Complex {
        Complex::with_val(128, (re, im))
    }

    fn close(a: &Complex, b: &Complex, tol: f64) -> bool {
        Float::with_val(BOUND_PREC, Complex::with_val(128, a - b).abs_ref()) < tol
    }

    #[test]
    fn eval_f_examples() {
        // g^2 - z
        let f = BivariateDefiningPolynomial::from_real(128, &[&[1.0], &[0.0], &[0.0, -1.0]]).unwrap();
        assert!(f.eval_f(&c(4.0, 0.0), &c(2.0, 0.0)).is_zero());
        assert!(close(&f.eval_f(&c(4.0, 0.0), &c(3.0, 0.0)), &c(5.0, 0.0), 0.0 + 1e-30));
        // (z - z0) g^2 - 1 at z = 1, g = 0
        let z0 = c(0.3, 0.4);
        let a0 = UnivariatePolynomial::new(vec![-z0, c(1.0, 0.0)]);
        let f = BivariateDefiningPolynomial::new(vec![
            a0,
            UnivariatePolynomial::zero(),
            UnivariatePolynomial::from_real(128, &[-1.0]),
        ])
        .unwrap();
        assert!(close(&f.eval_f(&c(1.0, 0.0), &c(0.0, 0.0)), &c(-1.0, 0.0), 1e-30));
    }

    #[test]
    fn branch_derivative_examples() {
        let sqrt = BivariateDefiningPolynomial::from_real(128, &[&[1.0], &[0.0], &[0.0, -1.0]]).unwrap();
        let d = sqrt.branch_derivative(&c(4.0, 0.0), &c(2.0, 0.0)).unwrap();
        assert!(close(&d, &c(0.25, 0.0), 1e-30));

        let quad = BivariateDefiningPolynomial::from_real(128, &[&[1.0], &[-1.0, 0.0, -1.0]]).unwrap();
        let d = quad.branch_derivative(&c(2.0, 0.0), &c(5.0, 0.0)).unwrap();
        assert!(close(&d, &c(4.0, 0.0), 1e-30));

        let inv_sqrt = BivariateDefiningPolynomial::from_real(128, &[&[0.0, 1.0], &[0.0], &[-1.0]]).unwrap();
        let d = inv_sqrt.branch_derivative(&c(1.0, 0.0), &c(1.0, 0.0)).unwrap();
        assert!(close(&d, &c(-0.5, 0.0), 1e-30));
    }

    #[test]
    fn branch_derivative_fails_at_branch_point() {
        let sqrt = BivariateDefiningPolynomial::from_real(128, &[&[1.0], &[0.0], &[0.0, -1.0]]).unwrap();
        let err = sqrt.branch_derivative(&c(0.0, 0.0), &c(0.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::CriticalPoint(_)));
    }

    #[test]
    fn resultant_of_inverse_square_root() {
        // Res_g((z - z0) g^2 - 1, 2 (z - z0) g) = -4 (z - z0)^2
        let z0 = c(0.3, 0.4);
        let f = BivariateDefiningPolynomial::new(vec![
            UnivariatePolynomial::new(vec![-z0.clone(), c(1.0, 0.0)]),
            UnivariatePolynomial::zero(),
            UnivariatePolynomial::from_real(128, &[-1.0]),
        ])
        .unwrap();
        let res = f.resultant_with_derivative(320).unwrap();
        assert_eq!(res.degree(), Some(2));
        let lead = res.leading().unwrap();
        assert!(close(lead, &c(-4.0, 0.0), 1e-60));
        for r in poly_roots(&res, 320).unwrap() {
            assert!(close(&r, &z0, 1e-40));
        }
    }

    #[test]
    fn resultant_of_cubic_curve_locates_branch_points() {
        // g^2 - (z^3 - z): branch points at 0, 1, -1
        let f = BivariateDefiningPolynomial::from_real(128, &[&[1.0], &[0.0], &[0.0, 1.0, 0.0, -1.0]]).unwrap();
        let res = f.resultant_with_derivative(320).unwrap();
        assert_eq!(res.degree(), Some(3));
        let roots = poly_roots(&res, 320).unwrap();
        for target in [0.0, 1.0, -1.0] {
            assert!(roots.iter().any(|r| close(r, &c(target, 0.0), 1e-40)));
        }
    }

    #[test]
    fn linear_in_g_has_only_poles() {
        // g - z: resultant is a_0 = 1
        let f = BivariateDefiningPolynomial::from_real(128, &[&[1.0], &[0.0, -1.0]]).unwrap();
        let res = f.resultant_with_derivative(256).unwrap();
        assert_eq!(res.degree(), Some(0));
    }

    #[test]
    fn repeated_factor_is_rejected() {
        // (g - z)^2 = g^2 - 2 z g + z^2
        let f = BivariateDefiningPolynomial::from_real(128, &[&[1.0], &[0.0, -2.0], &[0.0, 0.0, 1.0]]).unwrap();
        assert!(f.resultant_with_derivative(256).is_err());
    }

    #[test]
    fn constructor_checks() {
        assert!(BivariateDefiningPolynomial::from_real(64, &[&[1.0]]).is_err());
        assert!(BivariateDefiningPolynomial::from_real(64, &[&[0.0], &[1.0]]).is_err());
    }
}
