use std::io::Write;
use std::time::Instant;

use rig_core::quadrature::heuristic_integrate;
use rig_core::strategies::{execute, plan_main, plan_reference};
use rig_core::{legendre_scheme, SegmentPlan};

use crate::error::{CliError, Result};
use crate::problem::{Overrides, Problem, ProblemSpec, Strategy};
use crate::report::{decimal, PlanDocument, ReportDocument};

pub fn load_problem(path: &std::path::Path, overrides: &Overrides) -> Result<Problem> {
    let text = std::fs::read_to_string(path)?;
    ProblemSpec::from_json(&text)?.resolve(overrides)
}

pub fn plan(problem: &Problem) -> Result<SegmentPlan> {
    let p = problem;
    let plan = match p.strategy {
        Strategy::Main => plan_main(&p.integrand, &p.start, &p.end, &p.tolerance, &p.options)?,
        Strategy::Reference => plan_reference(&p.integrand, &p.start, &p.end, &p.tolerance, &p.options)?,
        Strategy::Heuristic => {
            return Err(CliError::Parse("the heuristic strategy has no plan".into()));
        }
    };
    Ok(plan)
}

pub fn integrate(problem: &Problem) -> Result<ReportDocument> {
    let clock = Instant::now();
    let elapsed = |c: Instant| Some(c.elapsed().as_secs_f64() * 1e3);
    if problem.strategy == Strategy::Heuristic {
        let p = problem;
        if p.integrand.segment_clearance(&p.start, &p.end) <= p.integrand.clearance() {
            return Err(rig_core::Error::CriticalPoint(format!(
                "within {:e} of the path",
                p.integrand.clearance()
            ))
            .into());
        }
        let integrand = p
            .integrand
            .with_precision(rig_core::quadrature::working_precision(&p.tolerance, 1 << 17))?;
        let result = heuristic_integrate(&integrand, &p.start, &p.end, &p.tolerance)?;
        return Ok(ReportDocument::from_heuristic(&result, &p.start, &p.end, &p.tolerance, elapsed(clock)));
    }
    let plan = plan(problem)?;
    let report = execute(&plan, &problem.integrand)?;
    Ok(ReportDocument::from_report(&report, elapsed(clock)))
}

pub fn plan_document(problem: &Problem) -> Result<PlanDocument> {
    Ok(PlanDocument::new(&plan(problem)?))
}

/// Nodes and weights of the `n`-point rule as CSV.
pub fn write_nodes<W: Write>(n: usize, precision: u32, out: W) -> Result<()> {
    let scheme = legendre_scheme(n, precision)?;
    let digits = ((f64::from(precision) * std::f64::consts::LOG10_2).floor() as usize).max(1);
    let mut w = csv_writer(out);
    w.write_record(["node", "weight"])?;
    for (x, wt) in scheme.nodes().iter().zip(scheme.weights()) {
        w.write_record([decimal(x, digits), decimal(wt, digits)])?;
    }
    w.flush()?;
    Ok(())
}

pub(crate) fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}
