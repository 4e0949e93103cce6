use rand::Rng;
use rayon::prelude::*;

use super::{clamp_flat, finite_budget, spread_layout};
use crate::error::{Error, Result};
use crate::fitness::{Evaluator, FarmArea};
use crate::geometry::Layout;
use crate::rng;
use crate::search::{score_failure, SearchOutcome, Session};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeConfig {
    pub population: usize,
    /// Differential weight.
    pub weight: f64,
    pub crossover_rate: f64,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self { population: 50, weight: 0.5, crossover_rate: 0.5 }
    }
}

impl DeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.population < 4 {
            return Err(Error::Config("DE needs a population of at least 4".into()));
        }
        if !(self.weight >= 0.0) || !(0.0..=1.0).contains(&self.crossover_rate) {
            return Err(Error::Config("DE weight must be >= 0 and crossover rate in [0, 1]".into()));
        }
        Ok(())
    }
}

/// rand/1/bin trial vector: `a + weight * (b - c)` crossed with `target`,
/// with coordinate `forced` always taken from the donor.
pub fn de_trial<R: Rng + ?Sized>(
    target: &[f64],
    a: &[f64],
    b: &[f64],
    c: &[f64],
    weight: f64,
    crossover_rate: f64,
    forced: usize,
    rng: &mut R,
) -> Vec<f64> {
    (0..target.len())
        .map(|j| {
            let take = j == forced || rng.random::<f64>() < crossover_rate;
            if take {
                a[j] + weight * (b[j] - c[j])
            } else {
                target[j]
            }
        })
        .collect()
}

/// Three distinct indices, all different from `exclude`.
fn pick_three<R: Rng + ?Sized>(mu: usize, exclude: usize, rng: &mut R) -> [usize; 3] {
    let mut out = [usize::MAX; 3];
    let mut k = 0;
    while k < 3 {
        let r = rng.random_range(0..mu);
        if r != exclude && !out[..k].contains(&r) {
            out[k] = r;
            k += 1;
        }
    }
    out
}

pub(crate) struct Population {
    pub members: Vec<Vec<f64>>,
    pub fitness: Vec<f64>,
}

/// Evaluates `layouts` concurrently and logs them in index order. The
/// caller guarantees the budget covers all of them.
fn evaluate_batch(session: &mut Session<'_, '_>, layouts: &[Vec<f64>]) -> Result<Vec<f64>> {
    let evaluator = session.evaluator();
    let results: Vec<Result<f64>> = layouts
        .par_iter()
        .map(|flat| {
            let layout = Layout::from_flat(flat)?;
            match evaluator.evaluate(&layout) {
                Ok(r) => Ok(r.penalized_fitness),
                Err(e) => score_failure(e),
            }
        })
        .collect();
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        let f = r?;
        session.record(f);
        out.push(f);
    }
    Ok(out)
}

/// One generation: trials for the first `count` targets, then greedy selection.
pub(crate) fn generation<R: Rng + ?Sized>(
    pop: &mut Population,
    config: &DeConfig,
    farm: &FarmArea,
    rng: &mut R,
    count: usize,
    mut evaluate: impl FnMut(&[Vec<f64>]) -> Result<Vec<f64>>,
) -> Result<()> {
    let mu = pop.members.len();
    let dims = pop.members[0].len();
    let trials: Vec<Vec<f64>> = (0..count)
        .map(|i| {
            let [a, b, c] = pick_three(mu, i, rng);
            let forced = rng.random_range(0..dims);
            let mut t = de_trial(
                &pop.members[i],
                &pop.members[a],
                &pop.members[b],
                &pop.members[c],
                config.weight,
                config.crossover_rate,
                forced,
                rng,
            );
            clamp_flat(&mut t, farm);
            t
        })
        .collect();
    let scores = evaluate(&trials)?;
    for (i, (t, f)) in trials.into_iter().zip(scores).enumerate() {
        if f >= pop.fitness[i] {
            pop.members[i] = t;
            pop.fitness[i] = f;
        }
    }
    Ok(())
}

/// Differential evolution, rand/1/bin, until the budget is spent. The last
/// generation is truncated to the remaining budget.
pub fn run_de(n: usize, config: &DeConfig, evaluator: &Evaluator<'_>, seed: u64) -> Result<SearchOutcome> {
    if n < 1 {
        return Err(Error::Config("n_buoys must be at least 1".into()));
    }
    config.validate()?;
    let budget = finite_budget(evaluator)?;
    if budget < config.population {
        return Err(Error::Config(format!("budget {budget} is smaller than the population {}", config.population)));
    }
    let farm = *evaluator.farm();
    let mut rng = rng::root(seed);
    let mut session = Session::new(evaluator);

    let members: Vec<Vec<f64>> = (0..config.population).map(|_| spread_layout(n, &farm, &mut rng)).collect();
    let fitness = evaluate_batch(&mut session, &members)?;
    let mut pop = Population { members, fitness };
    loop {
        let count = evaluator.budget().remaining().min(config.population);
        if count == 0 {
            break;
        }
        generation(&mut pop, config, &farm, &mut rng, count, |trials| evaluate_batch(&mut session, trials))?;
    }
    let best = (0..pop.members.len()).fold(0, |b, i| if pop.fitness[i] > pop.fitness[b] { i } else { b });
    Ok(session.finish(Layout::from_flat(&pop.members[best])?, true))
}
