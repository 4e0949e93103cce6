use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{clamp_flat, finite_budget, spread_layout};
use crate::error::{Error, Result};
use crate::fitness::Evaluator;
use crate::geometry::Layout;
use crate::rng;
use crate::search::{SearchOutcome, Session};

/// Step-size control for the (1+1) evolutionary algorithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MutationSchedule {
    /// Gaussian steps with constant standard deviation, m.
    FixedSigma { sigma: f64 },
    /// Signed uniform steps of size `[0, s]`, m.
    UniformStep { s: f64 },
    /// Gaussian steps whose deviation falls linearly from `start` to `end`
    /// over the run.
    LinearDecay { start: f64, end: f64 },
    /// Rechenberg's rule: scale by `factor` after every `window` steps,
    /// up when more than a fifth succeeded, down otherwise.
    OneFifth { sigma: f64, window: usize, factor: f64 },
}

impl MutationSchedule {
    pub fn one_fifth(sigma: f64) -> Self {
        MutationSchedule::OneFifth { sigma, window: 20, factor: 1.5 }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            MutationSchedule::FixedSigma { sigma } => sigma >= 0.0,
            MutationSchedule::UniformStep { s } => s > 0.0,
            MutationSchedule::LinearDecay { start, end } => end > 0.0 && start >= end,
            MutationSchedule::OneFifth { sigma, window, factor } => sigma > 0.0 && window > 0 && factor > 1.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid mutation schedule {self:?}")))
        }
    }

    /// Step scale for mutation `step` (0-based) out of `total` mutations.
    /// `OneFifth` returns its initial value; the run adapts it.
    pub fn scale_at(&self, step: usize, total: usize) -> f64 {
        match *self {
            MutationSchedule::FixedSigma { sigma } => sigma,
            MutationSchedule::UniformStep { s } => s,
            MutationSchedule::LinearDecay { start, end } => {
                if total <= 1 {
                    end
                } else {
                    start + (end - start) * step as f64 / (total - 1) as f64
                }
            }
            MutationSchedule::OneFifth { sigma, .. } => sigma,
        }
    }
}

fn mutate<R: Rng + ?Sized>(parent: &[f64], schedule: &MutationSchedule, scale: f64, rng: &mut R) -> Vec<f64> {
    match schedule {
        MutationSchedule::UniformStep { .. } => parent
            .iter()
            .map(|&v| {
                let step = rng.random_range(0.0..=scale);
                if rng.random_bool(0.5) {
                    v + step
                } else {
                    v - step
                }
            })
            .collect(),
        _ if scale == 0.0 => parent.to_vec(),
        _ => {
            let normal = Normal::new(0.0, scale).expect("positive deviation");
            parent.iter().map(|&v| v + normal.sample(rng)).collect()
        }
    }
}

/// (1+1) EA mutating every coordinate at once; the child replaces the
/// parent only on strict improvement.
pub fn run_one_plus_one_ea(
    n: usize,
    schedule: MutationSchedule,
    evaluator: &Evaluator<'_>,
    seed: u64,
) -> Result<SearchOutcome> {
    if n < 1 {
        return Err(Error::Config("n_buoys must be at least 1".into()));
    }
    schedule.validate()?;
    let budget = finite_budget(evaluator)?;
    let farm = *evaluator.farm();
    let mut rng = rng::root(seed);
    let mut session = Session::new(evaluator);

    let mut parent = spread_layout(n, &farm, &mut rng);
    let Some(mut parent_f) = session.evaluate(&Layout::from_flat(&parent)?)? else {
        return Err(Error::BudgetExhausted { limit: budget });
    };
    let total = budget - 1;
    let mut sigma = schedule.scale_at(0, total);
    let mut successes = 0;
    for step in 0..total {
        let scale = match schedule {
            MutationSchedule::OneFifth { .. } => sigma,
            _ => schedule.scale_at(step, total),
        };
        let mut child = mutate(&parent, &schedule, scale, &mut rng);
        clamp_flat(&mut child, &farm);
        let Some(f) = session.evaluate(&Layout::from_flat(&child)?)? else { break };
        if f > parent_f {
            parent = child;
            parent_f = f;
            successes += 1;
        }
        if let MutationSchedule::OneFifth { window, factor, .. } = schedule {
            if (step + 1) % window == 0 {
                if successes as f64 / window as f64 > 0.2 {
                    sigma *= factor;
                } else {
                    sigma /= factor;
                }
                successes = 0;
            }
        }
    }
    Ok(session.finish(Layout::from_flat(&parent)?, true))
}
