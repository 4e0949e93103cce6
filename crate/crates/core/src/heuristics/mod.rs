//! Sequential placement heuristics: one buoy at a time, sampled inside the
//! search sectors taken from the two-buoy landscape.

mod isls;
mod sls;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::fitness::FarmArea;
use crate::geometry::{Layout, Position};
use crate::landscape::SearchSector;
use crate::numerics::{self, Bounds, DescentStrategy};
use crate::search::Session;

pub use isls::{
    active_set_gate, first_row_capacity, oriented_sector, run_isls, run_isls2, run_isls2_detailed, upward_sector,
};
pub use sls::run_sls;

/// Draws allowed per requested sample before giving up.
pub const MAX_REDRAWS: usize = 100;

/// Where the first buoy goes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FirstBuoyRule {
    /// Middle of the bottom edge.
    CenterBottom,
    /// Bottom-left corner for rows leaning right, bottom-right otherwise.
    Corner,
}

pub fn place_first_buoy(rule: FirstBuoyRule, farm: &FarmArea, best_angle_deg: f64) -> Position {
    match rule {
        FirstBuoyRule::CenterBottom => Position::new(farm.side / 2.0, 0.0),
        FirstBuoyRule::Corner => {
            let a = best_angle_deg.rem_euclid(360.0);
            if a > 0.0 && a < 90.0 {
                Position::new(0.0, 0.0)
            } else {
                Position::new(farm.side, 0.0)
            }
        }
    }
}

/// Local search applied after sampling in phase 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Refiner {
    None,
    NelderMead,
    Sqp,
    ActiveSet,
    InteriorPoint,
    /// Max-min-distance placement, no hydrodynamic search.
    Fast,
}

impl Refiner {
    fn strategy(self) -> Option<DescentStrategy> {
        match self {
            Refiner::Sqp => Some(DescentStrategy::Sqp),
            Refiner::ActiveSet => Some(DescentStrategy::ActiveSet),
            Refiner::InteriorPoint => Some(DescentStrategy::InteriorPoint),
            _ => None,
        }
    }
}

impl FromStr for Refiner {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "none" => Refiner::None,
            "nm" => Refiner::NelderMead,
            "sqp" => Refiner::Sqp,
            "as" => Refiner::ActiveSet,
            "ip" => Refiner::InteriorPoint,
            "fast" | "f" => Refiner::Fast,
            other => return Err(Error::Config(format!("unknown refiner `{other}`"))),
        })
    }
}

impl fmt::Display for Refiner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Refiner::None => "none",
            Refiner::NelderMead => "nm",
            Refiner::Sqp => "sqp",
            Refiner::ActiveSet => "as",
            Refiner::InteriorPoint => "ip",
            Refiner::Fast => "fast",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeuristicConfig {
    pub n_buoys: usize,
    pub samples_phase1: usize,
    pub samples_phase2: usize,
    pub sls_samples: usize,
    pub refiner: Refiner,
    pub refiner_evals: usize,
    /// Added to the landscape's best distance to get the largest step, m.
    pub step_slack: f64,
}

impl HeuristicConfig {
    pub fn sls(n_buoys: usize) -> Self {
        Self {
            n_buoys,
            samples_phase1: 10,
            samples_phase2: 20,
            sls_samples: 15,
            refiner: Refiner::None,
            refiner_evals: 20,
            step_slack: 20.0,
        }
    }

    pub fn sls_nm(n_buoys: usize) -> Self {
        Self { sls_samples: 3, refiner: Refiner::NelderMead, ..Self::sls(n_buoys) }
    }

    pub fn isls(n_buoys: usize) -> Self {
        Self { step_slack: 10.0, ..Self::sls(n_buoys) }
    }

    /// Three phase-2 samples followed by `refiner`.
    pub fn isls2(n_buoys: usize, refiner: Refiner) -> Self {
        Self { samples_phase2: 3, refiner, ..Self::isls(n_buoys) }
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("n_buoys", self.n_buoys),
            ("samples_phase1", self.samples_phase1),
            ("samples_phase2", self.samples_phase2),
            ("sls_samples", self.sls_samples),
            ("refiner_evals", self.refiner_evals),
        ];
        for (name, v) in counts {
            if v < 1 {
                return Err(Error::Config(format!("{name} must be at least 1")));
            }
        }
        if !(self.step_slack >= 0.0) {
            return Err(Error::Config("step_slack must be non-negative".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    One,
    Two,
}

/// Progress of a sequential placement run.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacementState {
    pub placed: Layout,
    pub phase: Phase,
    /// Estimated number of buoys that fit in the first row.
    pub bn_row: usize,
    /// Direction of the first row, degrees.
    pub best_local_angle: f64,
    /// Buoys placed before phase 2 began, the first buoy included.
    pub phase_one_buoys: usize,
}

/// Sectors plus the step-length law used to draw candidates around an anchor.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingRegion {
    pub sectors: Vec<SearchSector>,
    /// Step length is uniform on this interval, m.
    pub step_range: (f64, f64),
}

impl SamplingRegion {
    pub fn new(sectors: Vec<SearchSector>, step_range: (f64, f64)) -> Result<Self> {
        if sectors.is_empty() {
            return Err(Error::Config("sampling region needs a sector".into()));
        }
        let (lo, hi) = step_range;
        if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
            return Err(Error::Config(format!("invalid step range [{lo}, {hi}]")));
        }
        for s in &sectors {
            if !(s.angle_range.1 >= s.angle_range.0) {
                return Err(Error::Config("sector angle range is reversed".into()));
            }
        }
        Ok(Self { sectors, step_range })
    }

    /// Lowest `r sin(theta)` over the region, i.e. its bottom edge relative to the anchor.
    pub fn bottom_offset(&self) -> f64 {
        let (r_lo, r_hi) = self.step_range;
        let mut lowest = f64::INFINITY;
        for s in &self.sectors {
            let (a, b) = s.angle_range;
            let mut sines = vec![a.to_radians().sin(), b.to_radians().sin()];
            // Any interior minimum of sin sits at 270 deg (mod 360).
            let k = ((a - 270.0) / 360.0).ceil();
            if 270.0 + 360.0 * k <= b {
                sines.push(-1.0);
            }
            for s in sines {
                lowest = lowest.min((r_lo * s).min(r_hi * s));
            }
        }
        lowest
    }

    /// Whether any part of the region around `anchor` lies inside the farm.
    pub fn overlaps_farm(&self, anchor: Position, farm: &FarmArea) -> bool {
        const STEPS: usize = 24;
        let (r_lo, r_hi) = self.step_range;
        self.sectors.iter().any(|s| {
            (0..=STEPS).any(|i| {
                let a = s.angle_range.0 + (s.angle_range.1 - s.angle_range.0) * i as f64 / STEPS as f64;
                (0..=4).any(|j| {
                    let r = r_lo + (r_hi - r_lo) * j as f64 / 4.0;
                    farm.contains(anchor.offset_polar(a, r))
                })
            })
        })
    }
}

/// Draw `count` candidates around `anchor`.
///
/// A sector is picked uniformly, then angle and step length uniformly. Each
/// draw is clamped into the farm; draws that clamping pulls closer than the
/// minimum separation to the anchor are redrawn.
pub fn sample_sector<R: Rng + ?Sized>(
    region: &SamplingRegion,
    anchor: Position,
    farm: &FarmArea,
    rng: &mut R,
    count: usize,
) -> Result<Vec<Position>> {
    let uniform = |rng: &mut R, (lo, hi): (f64, f64)| if hi > lo { rng.random_range(lo..=hi) } else { lo };
    let mut out = Vec::with_capacity(count);
    let mut rejected = 0;
    let limit = MAX_REDRAWS * count.max(1);
    while out.len() < count {
        let sector = if region.sectors.len() > 1 {
            &region.sectors[rng.random_range(0..region.sectors.len())]
        } else {
            &region.sectors[0]
        };
        let angle = uniform(rng, sector.angle_range);
        let step = uniform(rng, region.step_range);
        let p = farm.clamp(anchor.offset_polar(angle, step));
        if p.distance(anchor) < farm.min_separation - 1e-9 {
            rejected += 1;
            if rejected >= limit {
                return Err(Error::PlacementInfeasible { attempts: rejected });
            }
            continue;
        }
        out.push(p);
    }
    Ok(out)
}

/// Result of trying to place one buoy.
enum Placement {
    Placed(Position),
    /// Budget ran out; carries the best evaluated candidate, if any.
    Exhausted(Option<Position>),
}

/// Evaluates candidate positions for the next buoy on top of a partial layout.
struct Placer<'s, 'e, 'a> {
    session: &'s mut Session<'e, 'a>,
    farm: FarmArea,
}

impl<'s, 'e, 'a> Placer<'s, 'e, 'a> {
    fn new(session: &'s mut Session<'e, 'a>) -> Self {
        let farm = *session.evaluator().farm();
        Self { session, farm }
    }

    fn bounds(&self) -> Bounds {
        Bounds::square(self.farm.side)
    }

    /// Best candidate by fitness, ties to the earliest; `None` if no
    /// evaluation was possible. The flag reports budget exhaustion.
    fn best_of(&mut self, placed: &Layout, candidates: &[Position]) -> Result<(Option<(Position, f64)>, bool)> {
        let mut best: Option<(Position, f64)> = None;
        for &p in candidates {
            match self.session.evaluate(&placed.with(p))? {
                Some(f) => {
                    if best.is_none_or(|(_, bf)| f > bf) {
                        best = Some((p, f));
                    }
                }
                None => return Ok((best, true)),
            }
        }
        Ok((best, false))
    }

    fn sample_and_pick<R: Rng + ?Sized>(
        &mut self,
        placed: &Layout,
        region: &SamplingRegion,
        anchor: Position,
        rng: &mut R,
        count: usize,
    ) -> Result<Option<(Position, f64, bool)>> {
        let candidates = sample_sector(region, anchor, &self.farm, rng, count)?;
        let (best, exhausted) = self.best_of(placed, &candidates)?;
        Ok(best.map(|(p, f)| (p, f, exhausted)))
    }

    /// Local search for the next buoy from `start`; returns the incumbent
    /// and whether the budget ran out.
    fn refine(
        &mut self,
        placed: &Layout,
        start: Position,
        start_value: f64,
        refiner: Refiner,
        cap: usize,
    ) -> Result<(Position, bool)> {
        let bounds = self.bounds();
        let mut failure: Option<Error> = None;
        let mut exhausted = false;
        let session = &mut *self.session;
        let objective = |q: [f64; 2]| {
            if failure.is_some() {
                return None;
            }
            match session.evaluate(&placed.with(Position::new(q[0], q[1]))) {
                Ok(Some(f)) => Some(f),
                Ok(None) => {
                    exhausted = true;
                    None
                }
                Err(e) => {
                    failure = Some(e);
                    None
                }
            }
        };
        let s = [start.x, start.y];
        let result = match (refiner, refiner.strategy()) {
            (Refiner::NelderMead, _) => numerics::nelder_mead(objective, s, start_value, &bounds, cap),
            (_, Some(strategy)) => numerics::constrained_descent(objective, s, start_value, &bounds, strategy, cap),
            _ => return Ok((start, false)),
        };
        if let Some(e) = failure {
            return Err(e);
        }
        Ok((Position::new(result.best_point[0], result.best_point[1]), exhausted))
    }
}

#[cfg(test)]
mod tests;
