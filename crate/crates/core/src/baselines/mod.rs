//! Whole-layout optimizers over the flat `2N` coordinate vector.

mod de;
mod evolution;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fitness::{violation_sum, Evaluator, FarmArea};
use crate::geometry::Layout;
use crate::rng;
use crate::search::{SearchOutcome, Session};

pub use de::{de_trial, run_de, DeConfig};
pub use evolution::{run_one_plus_one_ea, MutationSchedule};

/// Attempts made to find a violation-free starting layout.
pub const INIT_RESAMPLES: usize = 100;

pub(crate) fn uniform_layout<R: Rng + ?Sized>(n: usize, farm: &FarmArea, rng: &mut R) -> Vec<f64> {
    (0..2 * n).map(|_| rng.random_range(0.0..=farm.side)).collect()
}

/// Uniform layout with the smallest separation violation out of up to
/// [`INIT_RESAMPLES`] draws; stops early at the first feasible one.
pub(crate) fn spread_layout<R: Rng + ?Sized>(n: usize, farm: &FarmArea, rng: &mut R) -> Vec<f64> {
    let mut best = uniform_layout(n, farm, rng);
    let mut best_v = violation_of(&best, farm);
    for _ in 1..INIT_RESAMPLES {
        if best_v == 0.0 {
            break;
        }
        let cand = uniform_layout(n, farm, rng);
        let v = violation_of(&cand, farm);
        if v < best_v {
            best = cand;
            best_v = v;
        }
    }
    best
}

fn violation_of(flat: &[f64], farm: &FarmArea) -> f64 {
    violation_sum(&Layout::from_flat(flat).expect("finite coordinates"), farm.min_separation)
}

pub(crate) fn clamp_flat(flat: &mut [f64], farm: &FarmArea) {
    for v in flat {
        *v = v.clamp(0.0, farm.side);
    }
}

pub(crate) fn finite_budget(evaluator: &Evaluator<'_>) -> Result<usize> {
    match evaluator.budget().limit() {
        usize::MAX => Err(Error::Config("whole-layout optimizers need a finite budget".into())),
        0 => Err(Error::Config("budget must be at least 1".into())),
        b => Ok(b),
    }
}

/// Uniform sampling of whole layouts until the budget is spent.
pub fn run_random_search(n: usize, evaluator: &Evaluator<'_>, seed: u64) -> Result<SearchOutcome> {
    if n < 1 {
        return Err(Error::Config("n_buoys must be at least 1".into()));
    }
    finite_budget(evaluator)?;
    let farm = *evaluator.farm();
    let mut rng = rng::root(seed);
    let mut session = Session::new(evaluator);
    let mut best: Option<(Vec<f64>, f64)> = None;
    loop {
        let flat = uniform_layout(n, &farm, &mut rng);
        let Some(f) = session.evaluate(&Layout::from_flat(&flat)?)? else { break };
        if best.as_ref().is_none_or(|(_, bf)| f > *bf) {
            best = Some((flat, f));
        }
    }
    let (flat, _) = best.ok_or(Error::BudgetExhausted { limit: evaluator.budget().limit() })?;
    Ok(session.finish(Layout::from_flat(&flat)?, true))
}
