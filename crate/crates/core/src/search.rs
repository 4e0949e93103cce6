//! Bookkeeping shared by every optimizer: metered evaluation, convergence
//! traces and the returned outcome.

use crate::error::{Error, Result};
use crate::fitness::Evaluator;
use crate::geometry::Layout;

/// Best-so-far fitness after a given number of metered evaluations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TracePoint {
    /// 1-based evaluation index within the run.
    pub evaluation: usize,
    pub best_fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    pub layout: Layout,
    pub trace: Vec<TracePoint>,
    /// False when the budget ran out before every buoy was placed.
    pub complete: bool,
    pub evaluations_used: usize,
}

/// Wraps an [`Evaluator`] and records the trace of one run.
pub(crate) struct Session<'e, 'a> {
    evaluator: &'e Evaluator<'a>,
    trace: Vec<TracePoint>,
    best: f64,
    used: usize,
}

impl<'e, 'a> Session<'e, 'a> {
    pub fn new(evaluator: &'e Evaluator<'a>) -> Self {
        Self { evaluator, trace: Vec::new(), best: f64::NEG_INFINITY, used: 0 }
    }

    pub fn evaluator(&self) -> &'e Evaluator<'a> {
        self.evaluator
    }

    /// Penalized fitness of `layout`, or `None` once the budget is gone.
    ///
    /// Ill-conditioned or degenerate layouts score zero; they still cost
    /// an evaluation.
    pub fn evaluate(&mut self, layout: &Layout) -> Result<Option<f64>> {
        let fitness = match self.evaluator.evaluate(layout) {
            Ok(report) => report.penalized_fitness,
            Err(Error::BudgetExhausted { .. }) => return Ok(None),
            Err(e) => score_failure(e)?,
        };
        self.record(fitness);
        Ok(Some(fitness))
    }

    /// Log an evaluation performed elsewhere (e.g. a parallel batch).
    pub fn record(&mut self, fitness: f64) {
        self.used += 1;
        if fitness > self.best {
            self.best = fitness;
        }
        self.trace.push(TracePoint { evaluation: self.used, best_fitness: self.best });
    }

    pub fn finish(self, layout: Layout, complete: bool) -> SearchOutcome {
        SearchOutcome { layout, trace: self.trace, complete, evaluations_used: self.used }
    }
}

/// Maps recoverable evaluation failures to a zero score.
pub(crate) fn score_failure(e: Error) -> Result<f64> {
    match e {
        Error::Numerical { .. } | Error::DegenerateGeometry { .. } => {
            log::warn!("layout scored zero: {e}");
            Ok(0.0)
        }
        other => Err(other),
    }
}
