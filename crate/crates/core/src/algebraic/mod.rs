//! Defining polynomials `f(z, g)`, univariate root finding and branch
//! continuation.

mod bivariate;
mod continuation;
mod integrand;
mod poly;

pub use bivariate::BivariateDefiningPolynomial;
pub use continuation::{continue_branch, BranchTracker};
pub use integrand::AlgebraicIntegrand;
pub use poly::{poly_roots, UnivariatePolynomial};

pub(crate) use bivariate::fmt_complex;
pub(crate) use continuation::newton;
