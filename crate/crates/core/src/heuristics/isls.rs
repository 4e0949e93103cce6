use super::{place_first_buoy, FirstBuoyRule, HeuristicConfig, Phase, PlacementState, Placer, Refiner, SamplingRegion};
use crate::error::{Error, Result};
use crate::fitness::Evaluator;
use crate::geometry::Layout;
use crate::landscape::{SearchSector, SectorExtraction};
use crate::numerics::{max_distance_point, Bounds};
use crate::rng;
use crate::search::{SearchOutcome, Session};

/// Rotates `sector` by 0 or 180 degrees so its centre points into the upper
/// half-plane. The angle range keeps its width.
pub fn oriented_sector(sector: &SearchSector) -> SearchSector {
    let (lo, hi) = sector.angle_range;
    let mid = (lo + hi) / 2.0;
    let c = mid.rem_euclid(360.0);
    let target = if c < 180.0 { c } else { c - 180.0 };
    let delta = target - mid;
    SearchSector { angle_range: (lo + delta, hi + delta), ..*sector }
}

/// The oriented sector with its angles clipped to `[0, 180]`, so steps never
/// point downwards.
pub fn upward_sector(sector: &SearchSector) -> SearchSector {
    let o = oriented_sector(sector);
    SearchSector { angle_range: (o.angle_range.0.max(0.0), o.angle_range.1.min(180.0)), ..o }
}

/// Buoys expected in the first row: the row length `side / |cos(angle)|`,
/// capped at the farm diagonal, divided by the preferred spacing, plus one.
pub fn first_row_capacity(side: f64, angle_deg: f64, spacing: f64) -> usize {
    let diagonal = side * std::f64::consts::SQRT_2;
    let c = angle_deg.to_radians().cos().abs();
    let row = if c * diagonal <= side { diagonal } else { side / c };
    (row / spacing).floor() as usize + 1
}

/// Buoy-index threshold below which phase-2 buoys always get the
/// active-set refinement: `round(side / |cos(angle)|)`.
pub fn active_set_gate(side: f64, angle_deg: f64) -> f64 {
    let c = angle_deg.to_radians().cos().abs();
    if c < 1e-12 {
        f64::INFINITY
    } else {
        (side / c).round()
    }
}

/// ISLS with `HeuristicConfig::isls`: twenty plain samples per phase-2 buoy.
pub fn run_isls(
    config: &HeuristicConfig,
    evaluator: &Evaluator<'_>,
    guide: &SectorExtraction,
    seed: u64,
) -> Result<SearchOutcome> {
    if config.refiner != Refiner::None {
        return Err(Error::Config("ISLS takes no refiner".into()));
    }
    run_isls2(config, evaluator, guide, seed)
}

pub fn run_isls2(
    config: &HeuristicConfig,
    evaluator: &Evaluator<'_>,
    guide: &SectorExtraction,
    seed: u64,
) -> Result<SearchOutcome> {
    run_isls2_detailed(config, evaluator, guide, seed).map(|(outcome, _)| outcome)
}

/// Two-phase placement.
///
/// Phase 1 starts in a bottom corner and walks a row upwards through the
/// upward sector with `samples_phase1` samples per buoy, until the sector's
/// bottom edge clears the top of the farm, the sector leaves the farm
/// sideways or no candidate can be drawn. Phase 2 samples both orientations
/// of the sector around the last buoy with a longer reach and hands the best
/// sample to the refiner.
pub fn run_isls2_detailed(
    config: &HeuristicConfig,
    evaluator: &Evaluator<'_>,
    guide: &SectorExtraction,
    seed: u64,
) -> Result<(SearchOutcome, PlacementState)> {
    config.validate()?;
    let farm = *evaluator.farm();
    let base = guide.sectors.first().ok_or_else(|| Error::Config("no search sector".into()))?;
    let up = upward_sector(base);
    let oriented = oriented_sector(base);
    let best_local_angle = (up.angle_range.0 + up.angle_range.1) / 2.0;
    let first = place_first_buoy(FirstBuoyRule::Corner, &farm, best_local_angle);
    let bn_row = first_row_capacity(farm.side, best_local_angle, guide.best_distance);
    let gate = active_set_gate(farm.side, best_local_angle);

    let lower = base.radial_range.0.max(farm.min_separation);
    let phase1 = SamplingRegion::new(vec![up], (lower, (guide.best_distance + config.step_slack).max(lower)))?;
    let phase2 = SamplingRegion::new(
        vec![oriented, oriented.mirrored()],
        (lower, (guide.best_distance + 2.0 * farm.min_separation).max(lower)),
    )?;

    let mut state = PlacementState {
        placed: Layout::new(vec![first])?,
        phase: Phase::One,
        bn_row,
        best_local_angle,
        phase_one_buoys: 1,
    };
    let mut session = Session::new(evaluator);
    let mut placer = Placer::new(&mut session);
    let bounds = Bounds::square(farm.side);
    // 1-based index of the next buoy at the end of phase 1.
    let mut buoy_num = 2;
    let mut exhausted = false;

    while state.placed.len() < config.n_buoys {
        let anchor = state.placed.last().expect("first buoy placed");
        if anchor.y + phase1.bottom_offset() >= farm.side || !phase1.overlaps_farm(anchor, &farm) {
            break;
        }
        let mut rng = rng::substream(seed, state.placed.len() as u64);
        match placer.sample_and_pick(&state.placed, &phase1, anchor, &mut rng, config.samples_phase1) {
            Err(Error::PlacementInfeasible { .. }) => break,
            Err(e) => return Err(e),
            Ok(None) => {
                exhausted = true;
                break;
            }
            Ok(Some((p, _, ran_out))) => {
                state.placed.push(p);
                if ran_out {
                    exhausted = true;
                    break;
                }
            }
        }
        buoy_num += 1;
    }
    state.phase = Phase::Two;
    state.phase_one_buoys = state.placed.len();

    while !exhausted && state.placed.len() < config.n_buoys {
        let anchor = state.placed.last().expect("first buoy placed");
        let mut rng = rng::substream(seed, state.placed.len() as u64);
        if config.refiner == Refiner::Fast {
            let p = max_distance_point(state.placed.positions(), &bounds, &mut rng);
            match placer.best_of(&state.placed, &[p])? {
                (Some(_), _) => state.placed.push(p),
                (None, _) => exhausted = true,
            }
            continue;
        }
        let Some((p, f, ran_out)) =
            placer.sample_and_pick(&state.placed, &phase2, anchor, &mut rng, config.samples_phase2)?
        else {
            break;
        };
        let gated_off = config.refiner == Refiner::ActiveSet
            && !(buoy_num as f64 <= gate || p.y >= farm.side - farm.min_separation);
        if ran_out || config.refiner == Refiner::None || gated_off {
            state.placed.push(p);
            exhausted = ran_out;
            continue;
        }
        let (q, ran_out) = placer.refine(&state.placed, p, f, config.refiner, config.refiner_evals)?;
        state.placed.push(q);
        exhausted = ran_out;
    }

    let complete = state.placed.len() == config.n_buoys;
    let outcome = session.finish(state.placed.clone(), complete);
    Ok((outcome, state))
}
