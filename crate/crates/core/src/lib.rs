//! Rigorous Gauss-Legendre integration of algebraic functions along line
//! segments in the complex plane.
//!
//! An integrand `g(z)` is given implicitly by a polynomial equation
//! `f(z, g) = a_0(z) g^n + ... + a_n(z) = 0` together with a branch value at
//! the start of the path. The crate bounds `g` on disks via Fujiwara's root
//! bound and a Cauchy-Taylor remainder estimate, turns those bounds into a
//! provably sufficient quadrature order, and splits the path adaptively so
//! that nearby critical points do not force eccentric ellipses.
//!
//! Module map:
//! - [`algebraic`]: polynomials, root finding, branch continuation.
//! - [`bounds`]: certified bounds for `|g|` and its variation on disks.
//! - [`quadrature`]: Gauss-Legendre schemes, order selection, the heuristic baseline.
//! - [`strategies`]: path splitting (main) and single-ellipse (reference) planners.

pub mod algebraic;
pub mod bounds;
pub mod error;
pub mod num;
pub mod quadrature;
pub mod strategies;

pub use algebraic::{
    continue_branch, poly_roots, AlgebraicIntegrand, BivariateDefiningPolynomial,
    UnivariatePolynomial,
};
pub use bounds::{Disk, DiskBoundCertificate};
pub use error::{Error, ErrorKind, Result};
pub use num::{BigComplex, Tolerance};
pub use quadrature::{legendre_scheme, required_order, QuadratureScheme};
pub use strategies::{
    execute, plan_main, plan_reference, BoundMode, IntegrationReport, PlanOptions, SegmentPlan,
    StrategyKind, ToleranceMode,
};
