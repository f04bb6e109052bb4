//! Gauss-Legendre schemes, the order needed for a tolerance, segment
//! quadrature, and the node-doubling baseline.

mod integrate;
mod legendre;
mod order;

pub use integrate::{heuristic_integrate, integrate_segment, working_precision, HeuristicResult};
pub use legendre::{legendre_scheme, QuadratureScheme};
pub use order::{gl_error_bound, required_order, Ellipse};

pub(crate) use integrate::integrate_with_tracker;
