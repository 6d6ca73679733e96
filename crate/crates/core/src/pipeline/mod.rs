//! End-to-end searches: symmetric proofs of invariant targets, symmetric
//! refutations of invariant systems over finite domains, and the
//! pseudoexpectations dual to the latter.
//!
//! Each search assembles the orbit-reduced coefficient-matching system,
//! solves it numerically, rounds along a ladder of denominator bounds and
//! returns a certificate only once [`crate::certificates::verify`] accepts it.

mod assemble;
mod counts;
mod instance;
mod outcome;
mod prove;
mod pseudo;
mod refute;

pub use counts::{variable_count_report, VariableCounts};
pub use instance::{default_epsilon, Domain, Goal, PipelineOptions, ProblemInstance};
pub use outcome::{SearchFailure, SearchOutcome, SearchReport};
pub use prove::prove_invariant;
pub use pseudo::{
    find_pseudoexpectation, MomentValues, PseudoCheck, PseudoSource, Pseudoexpectation, POINT_SEARCH_CAP,
};
pub use refute::refute_invariant_system;

use crate::error::Result;

/// Runs the search matching the instance goal at `d = 1, …, max_degree`,
/// stopping at the first certificate. Returns every report produced.
pub fn search_degrees(inst: &ProblemInstance, max_degree: u32, opts: &PipelineOptions) -> Result<Vec<SearchReport>> {
    let mut reports = Vec::new();
    for d in 1..=max_degree {
        let mut at = inst.clone();
        at.degree = d;
        let report = match at.goal {
            Goal::Refute => refute_invariant_system(&at, opts)?,
            Goal::Prove(_) => prove_invariant(&at, opts)?,
        };
        let done = report.outcome.is_certified();
        reports.push(report);
        if done {
            break;
        }
    }
    Ok(reports)
}
