//! Farm geometry, separation penalties and the metered layout objective.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::climate::{annual_average_power_with, WaveScenario};
use crate::error::{Error, Result};
use crate::geometry::{Layout, Position};
use crate::model::{HydroKernel, PointAbsorberKernel, WecParameters};

/// Farm area allotted per buoy, m^2.
pub const AREA_PER_BUOY: f64 = 20_000.0;
/// Default minimum separation between buoys, m.
pub const DEFAULT_MIN_SEPARATION: f64 = 50.0;
/// Exponent of the separation penalty `(violation + 1)^20`.
pub const PENALTY_EXPONENT: i32 = 20;

/// Side of the square farm for `n` buoys: `sqrt(n * 20000)`.
pub fn farm_side(n: usize) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain("farm needs at least one buoy".into()));
    }
    Ok((n as f64 * AREA_PER_BUOY).sqrt())
}

/// Square lease `[0, side]^2` and the minimum buoy separation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarmArea {
    pub side: f64,
    pub min_separation: f64,
}

impl FarmArea {
    pub fn for_buoys(n: usize) -> Result<Self> {
        Ok(Self { side: farm_side(n)?, min_separation: DEFAULT_MIN_SEPARATION })
    }

    pub fn with_min_separation(self, r: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::Domain("minimum separation must be positive".into()));
        }
        Ok(Self { min_separation: r, ..self })
    }

    pub fn contains(&self, p: Position) -> bool {
        const TOL: f64 = 1e-9;
        (-TOL..=self.side + TOL).contains(&p.x) && (-TOL..=self.side + TOL).contains(&p.y)
    }

    pub fn clamp(&self, p: Position) -> Position {
        Position::new(p.x.clamp(0.0, self.side), p.y.clamp(0.0, self.side))
    }
}

/// Sum of `(r_prime - dist)` over buoy pairs closer than `r_prime`.
pub fn violation_sum(layout: &Layout, r_prime: f64) -> f64 {
    let pos = layout.positions();
    let mut total = 0.0;
    for (i, a) in pos.iter().enumerate() {
        for b in &pos[i + 1..] {
            let d = a.distance(*b);
            if d < r_prime {
                total += r_prime - d;
            }
        }
    }
    total
}

/// `raw / (violation + 1)^20`.
pub fn penalized_fitness(raw: f64, violation: f64) -> f64 {
    raw / penalty_factor(violation)
}

pub fn penalty_factor(violation: f64) -> f64 {
    (violation + 1.0).powi(PENALTY_EXPONENT)
}

/// Outcome of one layout evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct FitnessReport {
    pub raw_power: f64,
    pub violation_sum: f64,
    pub penalty_factor: f64,
    pub penalized_fitness: f64,
    pub per_buoy_power: Vec<f64>,
    /// Budget units consumed when this report was produced.
    pub evaluations_used: usize,
}

/// Thread-safe count of full-layout evaluations against a fixed limit.
#[derive(Debug)]
pub struct EvaluationBudget {
    limit: usize,
    used: AtomicUsize,
}

impl EvaluationBudget {
    pub fn new(limit: usize) -> Self {
        Self { limit, used: AtomicUsize::new(0) }
    }

    pub fn unlimited() -> Self {
        Self::new(usize::MAX)
    }

    pub fn limit(&self) -> usize {
        self.limit
    }

    pub fn used(&self) -> usize {
        self.used.load(Ordering::SeqCst)
    }

    pub fn remaining(&self) -> usize {
        self.limit - self.used()
    }

    pub fn is_exhausted(&self) -> bool {
        self.used() >= self.limit
    }

    /// Takes one unit; returns the new `used` count.
    pub fn consume(&self) -> Result<usize> {
        self.used
            .fetch_update(Ordering::SeqCst, Ordering::SeqCst, |u| (u < self.limit).then_some(u + 1))
            .map(|prev| prev + 1)
            .map_err(|_| Error::BudgetExhausted { limit: self.limit })
    }
}

/// Penalized annual-average-power objective for one farm and scenario.
pub struct Evaluator<'a> {
    params: &'a WecParameters,
    scenario: &'a WaveScenario,
    farm: FarmArea,
    budget: EvaluationBudget,
    kernel: &'a dyn HydroKernel,
    parallel_frequencies: bool,
    unmetered: AtomicUsize,
}

impl<'a> Evaluator<'a> {
    pub fn new(params: &'a WecParameters, scenario: &'a WaveScenario, farm: FarmArea, budget: usize) -> Self {
        Self {
            params,
            scenario,
            farm,
            budget: EvaluationBudget::new(budget),
            kernel: &PointAbsorberKernel,
            parallel_frequencies: false,
            unmetered: AtomicUsize::new(0),
        }
    }

    pub fn with_kernel(mut self, kernel: &'a dyn HydroKernel) -> Self {
        self.kernel = kernel;
        self
    }

    /// Solve the frequency grid concurrently inside each evaluation.
    pub fn with_parallel_frequencies(mut self, on: bool) -> Self {
        self.parallel_frequencies = on;
        self
    }

    pub fn farm(&self) -> &FarmArea {
        &self.farm
    }

    pub fn params(&self) -> &WecParameters {
        self.params
    }

    pub fn scenario(&self) -> &WaveScenario {
        self.scenario
    }

    pub fn kernel(&self) -> &dyn HydroKernel {
        self.kernel
    }

    pub fn budget(&self) -> &EvaluationBudget {
        &self.budget
    }

    /// Evaluations performed outside the budget (diagnostics, final reporting).
    pub fn unmetered_evaluations(&self) -> usize {
        self.unmetered.load(Ordering::SeqCst)
    }

    /// Metered evaluation: consumes one budget unit, then checks bounds and
    /// computes the penalized annual average power.
    pub fn evaluate(&self, layout: &Layout) -> Result<FitnessReport> {
        let used = self.budget.consume()?;
        self.compute(layout, used)
    }

    /// Same objective without touching the budget.
    pub fn evaluate_unmetered(&self, layout: &Layout) -> Result<FitnessReport> {
        self.unmetered.fetch_add(1, Ordering::SeqCst);
        self.compute(layout, self.budget.used())
    }

    fn compute(&self, layout: &Layout, used: usize) -> Result<FitnessReport> {
        for (index, p) in layout.positions().iter().enumerate() {
            if !self.farm.contains(*p) {
                return Err(Error::OutOfBounds { index, x: p.x, y: p.y, side: self.farm.side });
            }
        }
        let power =
            annual_average_power_with(self.kernel, layout, self.params, self.scenario, self.parallel_frequencies)?;
        let violation = violation_sum(layout, self.farm.min_separation);
        let factor = penalty_factor(violation);
        Ok(FitnessReport {
            raw_power: power.total,
            violation_sum: violation,
            penalty_factor: factor,
            penalized_fitness: power.total / factor,
            per_buoy_power: power.per_buoy,
            evaluations_used: used,
        })
    }
}

/// One metered evaluation of `layout` against `budget`.
pub fn evaluate_layout(
    layout: &Layout,
    params: &WecParameters,
    scenario: &WaveScenario,
    farm: &FarmArea,
    budget: &EvaluationBudget,
) -> Result<FitnessReport> {
    let used = budget.consume()?;
    let ev = Evaluator::new(params, scenario, *farm, usize::MAX);
    ev.compute(layout, used)
}
