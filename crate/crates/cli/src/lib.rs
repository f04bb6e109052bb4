//! Front end for `rig-core`: problem files, JSON reports and the
//! node-count experiments behind the `rig` binary.

pub mod commands;
pub mod error;
pub mod experiments;
pub mod problem;
pub mod report;

pub use error::{CliError, Result};
pub use problem::{Overrides, Problem, ProblemSpec, Strategy, TolMode};
pub use report::{canonicalize, PlanDocument, ReportDocument};
