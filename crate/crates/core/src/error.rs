use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or out-of-domain input.
    Input,
    /// A critical point lies on or too close to where it must not be.
    Geometry,
    /// An iteration did not converge.
    Convergence,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("root finding did not converge after {iterations} iterations at {precision} bits; raise the precision")]
    RootsNotConverged { iterations: usize, precision: u32 },

    #[error("critical point encountered at z={0}")]
    CriticalPoint(String),

    #[error("branch tracking failed near z={0}")]
    BranchTracking(String),

    #[error("branch value does not identify a unique root of f(z_a, .): {0}")]
    AmbiguousBranch(String),

    #[error("disk touches zero of a_0 (radius {radius}, distance {distance})")]
    DiskTouchesZero { radius: String, distance: String },

    #[error("disk contains critical point (radius {radius}, distance {distance})")]
    DiskContainsCritical { radius: String, distance: String },

    #[error("critical point too close to path: bisection depth {0} exceeded")]
    CriticalTooClose(u32),

    #[error("could not cover the ellipse by admissible disks: {0}")]
    CoveringFailed(String),

    #[error("Newton iteration for Legendre nodes stagnated (order {order}, {precision} bits)")]
    NodeStagnation { order: usize, precision: u32 },

    #[error("heuristic did not converge (last difference {0})")]
    HeuristicDidNotConverge(String),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::InvalidInput(_) | Error::AmbiguousBranch(_) => ErrorKind::Input,
            Error::CriticalPoint(_)
            | Error::DiskTouchesZero { .. }
            | Error::DiskContainsCritical { .. }
            | Error::CriticalTooClose(_)
            | Error::CoveringFailed(_) => ErrorKind::Geometry,
            Error::RootsNotConverged { .. }
            | Error::BranchTracking(_)
            | Error::NodeStagnation { .. }
            | Error::HeuristicDidNotConverge(_) => ErrorKind::Convergence,
        }
    }
}
