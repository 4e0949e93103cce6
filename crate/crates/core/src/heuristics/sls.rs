use super::{place_first_buoy, FirstBuoyRule, HeuristicConfig, Placement, Placer, Refiner, SamplingRegion};
use crate::error::{Error, Result};
use crate::fitness::Evaluator;
use crate::geometry::Layout;
use crate::landscape::SectorExtraction;
use crate::rng;
use crate::search::{SearchOutcome, Session};

/// Smart local search.
///
/// The first buoy starts at the middle of the bottom edge. Every buoy,
/// including the first, is then re-drawn `sls_samples` times in the mirrored
/// sectors around its predecessor and the best partial layout kept. With
/// `Refiner::NelderMead` the best sample is refined further once the partial
/// layout has at least two buoys.
pub fn run_sls(
    config: &HeuristicConfig,
    evaluator: &Evaluator<'_>,
    guide: &SectorExtraction,
    seed: u64,
) -> Result<SearchOutcome> {
    config.validate()?;
    if !matches!(config.refiner, Refiner::None | Refiner::NelderMead) {
        return Err(Error::Config(format!("SLS does not support refiner `{}`", config.refiner)));
    }
    let mut session = Session::new(evaluator);
    let farm = *evaluator.farm();
    let first = place_first_buoy(FirstBuoyRule::CenterBottom, &farm, guide.best_angle);
    if config.n_buoys == 1 {
        return Ok(session.finish(Layout::new(vec![first])?, true));
    }
    let lower = guide.sectors.iter().map(|s| s.radial_range.0).fold(f64::INFINITY, f64::min);
    let lower = lower.max(farm.min_separation);
    let region =
        SamplingRegion::new(guide.sectors.clone(), (lower, (guide.best_distance + config.step_slack).max(lower)))?;

    let mut placed = Layout::empty();
    let mut placer = Placer::new(&mut session);
    for i in 0..config.n_buoys {
        let anchor = placed.last().unwrap_or(first);
        let mut rng = rng::substream(seed, i as u64);
        let outcome = match placer.sample_and_pick(&placed, &region, anchor, &mut rng, config.sls_samples)? {
            None => Placement::Exhausted(None),
            Some((p, _, true)) => Placement::Exhausted(Some(p)),
            Some((p, f, false)) if config.refiner == Refiner::NelderMead && !placed.is_empty() => {
                match placer.refine(&placed, p, f, Refiner::NelderMead, config.refiner_evals)? {
                    (q, false) => Placement::Placed(q),
                    (q, true) => Placement::Exhausted(Some(q)),
                }
            }
            Some((p, _, false)) => Placement::Placed(p),
        };
        match outcome {
            Placement::Placed(p) => placed.push(p),
            Placement::Exhausted(p) => {
                if let Some(p) = p {
                    placed.push(p);
                } else if placed.is_empty() {
                    placed.push(first);
                }
                break;
            }
        }
    }
    let complete = placed.len() == config.n_buoys;
    Ok(session.finish(placed, complete))
}
