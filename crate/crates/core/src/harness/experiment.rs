use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::methods::{run_method, GuideKind, Method, MethodParams};
use crate::climate::{isolated_annual_power, q_factor, WaveScenario};
use crate::error::{Error, Result};
use crate::fitness::DEFAULT_MIN_SEPARATION;
use crate::fitness::{Evaluator, FarmArea, FitnessReport};
use crate::geometry::Layout;
use crate::landscape::{
    build_two_buoy_landscape, extract_search_sectors, SectorExtraction, SectorMode, COARSE_ANGULAR_RES,
    FINE_ANGULAR_RES, MAX_SECTOR_RADIUS, RADIAL_RES,
};
use crate::model::WecParameters;
use crate::search::TracePoint;

/// Everything needed to reproduce a batch of optimization runs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Built-in scenario name or path to a scenario file.
    pub scenario: String,
    pub method: Method,
    pub method_params: MethodParams,
    pub n_buoys: usize,
    pub budget: usize,
    pub n_runs: usize,
    /// Run `i` uses seed `root_seed + i`.
    pub root_seed: u64,
    pub workers: usize,
    pub wec: WecParameters,
}

impl ExperimentConfig {
    pub fn new(scenario: impl Into<String>, method: Method, n_buoys: usize, budget: usize) -> Self {
        Self {
            scenario: scenario.into(),
            method,
            method_params: MethodParams::default(),
            n_buoys,
            budget,
            n_runs: 1,
            root_seed: 0,
            workers: 1,
            wec: WecParameters::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_buoys == 0 {
            return Err(Error::Config("number of buoys must be at least 1".into()));
        }
        if self.budget == 0 {
            return Err(Error::Config("evaluation budget must be at least 1".into()));
        }
        if self.n_runs == 0 {
            return Err(Error::Config("number of runs must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        Ok(())
    }

    pub fn seed_of(&self, run_id: usize) -> u64 {
        self.root_seed.wrapping_add(run_id as u64)
    }
}

/// One finished optimization run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_id: usize,
    pub seed: u64,
    pub layout: Layout,
    /// Unmetered re-evaluation of the final layout.
    pub report: FitnessReport,
    pub q_factor: f64,
    pub trace: Vec<TracePoint>,
    pub evaluations_used: usize,
    /// Two-buoy evaluations spent on the shared landscape.
    pub surrogate_evaluations: usize,
    pub complete: bool,
    pub wall_time: Duration,
}

/// Search sectors a method needs, built once and shared by all runs.
#[derive(Debug, Clone, PartialEq)]
pub struct SharedGuide {
    pub extraction: SectorExtraction,
    pub surrogate_evaluations: usize,
}

pub fn build_guide(kind: GuideKind, params: &WecParameters, scenario: &WaveScenario) -> Result<Option<SharedGuide>> {
    let (res, mode) = match kind {
        GuideKind::None => return Ok(None),
        GuideKind::Sls => (COARSE_ANGULAR_RES, SectorMode::Sls),
        GuideKind::Auto => (FINE_ANGULAR_RES, SectorMode::Auto),
    };
    let land =
        build_two_buoy_landscape(params, scenario, res, RADIAL_RES, (DEFAULT_MIN_SEPARATION, MAX_SECTOR_RADIUS))?;
    let extraction = extract_search_sectors(&land, mode)?;
    Ok(Some(SharedGuide { extraction, surrogate_evaluations: land.evaluations }))
}

/// Runs `config.n_runs` seeded runs on `config.workers` threads.
///
/// Records come back ordered by run id and, apart from wall time, do not
/// depend on the worker count.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let scenario = WaveScenario::resolve(&config.scenario)?;
    run_experiment_on(config, &scenario)
}

/// As [`run_experiment`] with an already loaded scenario.
pub fn run_experiment_on(config: &ExperimentConfig, scenario: &WaveScenario) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let farm = FarmArea::for_buoys(config.n_buoys)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        let guide = build_guide(config.method.guide_kind(), &config.wec, scenario)?;
        let isolated = isolated_annual_power(&config.wec, scenario)?;
        let spare_workers = config.workers > config.n_runs;
        (0..config.n_runs)
            .into_par_iter()
            .map(|run_id| {
                let started = Instant::now();
                let seed = config.seed_of(run_id);
                let evaluator =
                    Evaluator::new(&config.wec, scenario, farm, config.budget).with_parallel_frequencies(spare_workers);
                let outcome = run_method(
                    config.method,
                    &config.method_params,
                    config.n_buoys,
                    &evaluator,
                    guide.as_ref().map(|g| &g.extraction),
                    seed,
                )?;
                let report = final_report(&evaluator, &outcome.layout)?;
                let q = q_factor(report.raw_power, outcome.layout.len().max(1), isolated)?.q;
                Ok(RunRecord {
                    run_id,
                    seed,
                    layout: outcome.layout,
                    report,
                    q_factor: q,
                    trace: outcome.trace,
                    evaluations_used: outcome.evaluations_used,
                    surrogate_evaluations: guide.as_ref().map_or(0, |g| g.surrogate_evaluations),
                    complete: outcome.complete,
                    wall_time: started.elapsed(),
                })
            })
            .collect::<Result<Vec<_>>>()
    })
}

/// Final layouts the solver cannot handle score zero, as they did during search.
fn final_report(evaluator: &Evaluator<'_>, layout: &Layout) -> Result<FitnessReport> {
    match evaluator.evaluate_unmetered(layout) {
        Err(Error::Numerical { .. } | Error::DegenerateGeometry { .. }) => {
            let violation = crate::fitness::violation_sum(layout, evaluator.farm().min_separation);
            Ok(FitnessReport {
                raw_power: 0.0,
                violation_sum: violation,
                penalty_factor: crate::fitness::penalty_factor(violation),
                penalized_fitness: 0.0,
                per_buoy_power: vec![0.0; layout.len()],
                evaluations_used: evaluator.budget().used(),
            })
        }
        other => other,
    }
}
