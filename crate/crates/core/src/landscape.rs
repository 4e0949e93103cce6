//! Two-buoy surrogate power landscape and search-sector extraction.
//!
//! The landscape tabulates the annual average power of a two-buoy array with
//! the first buoy at the origin and the second at each `(angle, distance)`
//! cell. Sequential placement samples the next buoy inside a sector of this
//! table, relative to the last placed buoy.
//!
//! The power of a two-buoy array is unchanged when the buoys swap places, so
//! cells `(a, d)` and `(a + 180, d)` hold the same value. Extraction therefore
//! works on the upper half-plane `[0, 180)` and mirrors where needed.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::climate::{annual_average_power, WaveScenario};
use crate::error::{Error, Result};
use crate::fitness::DEFAULT_MIN_SEPARATION;
use crate::geometry::{Layout, Position};
use crate::model::WecParameters;

/// Largest radial extent a sector may have, m.
pub const MAX_SECTOR_RADIUS: f64 = 300.0;

pub const COARSE_ANGULAR_RES: f64 = 45.0;
pub const FINE_ANGULAR_RES: f64 = 5.0;
pub const RADIAL_RES: f64 = 5.0;

/// Annual average power of buoys at the origin and at `(angle_deg, distance)`.
pub fn two_buoy_power(params: &WecParameters, scenario: &WaveScenario, angle_deg: f64, distance: f64) -> Result<f64> {
    let second = Position::default().offset_polar(angle_deg, distance);
    let layout = Layout::new(vec![Position::default(), second])?;
    Ok(annual_average_power(&layout, params, scenario)?.total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SurrogateLandscape {
    pub scenario_name: String,
    pub angular_res: f64,
    pub radial_res: f64,
    pub angles: Vec<f64>,
    pub distances: Vec<f64>,
    /// Row-major by angle: `power[a * distances.len() + d]`.
    pub power: Vec<f64>,
    /// Two-buoy evaluations spent building the table.
    pub evaluations: usize,
}

impl SurrogateLandscape {
    pub fn get(&self, angle_idx: usize, dist_idx: usize) -> f64 {
        self.power[angle_idx * self.distances.len() + dist_idx]
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.angles.len(), self.distances.len())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# scenario={} angular_res_deg={} radial_res_m={} r_min_m={} r_max_m={} surrogate_evals={}",
            self.scenario_name,
            self.angular_res,
            self.radial_res,
            self.distances.first().copied().unwrap_or(0.0),
            self.distances.last().copied().unwrap_or(0.0),
            self.evaluations
        );
        out.push_str("angle_deg,distance_m,power_w\n");
        for (ai, a) in self.angles.iter().enumerate() {
            for (di, d) in self.distances.iter().enumerate() {
                let _ = writeln!(out, "{a},{d},{}", self.get(ai, di));
            }
        }
        out
    }

    /// Parses a landscape written by [`SurrogateLandscape::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, meta) = lines.next().ok_or(Error::Parse { line: 1, message: "empty landscape file".into() })?;
        let mut scenario_name = String::new();
        let mut angular_res = f64::NAN;
        let mut radial_res = f64::NAN;
        let mut evaluations = 0;
        for kv in meta.trim_start_matches('#').split_whitespace() {
            let Some((k, v)) = kv.split_once('=') else { continue };
            let num = || v.parse::<f64>().map_err(|e| Error::Parse { line: 1, message: e.to_string() });
            match k {
                "scenario" => scenario_name = v.to_string(),
                "angular_res_deg" => angular_res = num()?,
                "radial_res_m" => radial_res = num()?,
                "surrogate_evals" => evaluations = num()? as usize,
                _ => {}
            }
        }
        let mut rows = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() || line.starts_with("angle_deg") {
                continue;
            }
            let vals = line
                .split(',')
                .map(|f| f.trim().parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::Parse { line: i + 1, message: e.to_string() })?;
            if vals.len() != 3 {
                return Err(Error::Parse { line: i + 1, message: "expected angle_deg,distance_m,power_w".into() });
            }
            rows.push((vals[0], vals[1], vals[2]));
        }
        let mut angles: Vec<f64> = rows.iter().map(|r| r.0).collect();
        angles.dedup();
        let n_d = rows.len() / angles.len().max(1);
        let distances: Vec<f64> = rows.iter().take(n_d).map(|r| r.1).collect();
        if angles.len() * distances.len() != rows.len() {
            return Err(Error::Parse { line: 2, message: "landscape table is incomplete".into() });
        }
        Ok(Self {
            scenario_name,
            angular_res,
            radial_res,
            angles,
            distances,
            power: rows.iter().map(|r| r.2).collect(),
            evaluations,
        })
    }
}

/// Samples the two-buoy landscape over all angles `[0, 360)` and distances
/// `r_range.0, r_range.0 + radial_res, ..., <= r_range.1`.
pub fn build_two_buoy_landscape(
    params: &WecParameters,
    scenario: &WaveScenario,
    angular_res: f64,
    radial_res: f64,
    r_range: (f64, f64),
) -> Result<SurrogateLandscape> {
    if !(angular_res > 0.0 && radial_res > 0.0) {
        return Err(Error::Domain("landscape resolutions must be positive".into()));
    }
    let (r_min, r_max) = r_range;
    if r_min < DEFAULT_MIN_SEPARATION {
        return Err(Error::Domain(format!(
            "landscape must start at or beyond {DEFAULT_MIN_SEPARATION} m, got {r_min}"
        )));
    }
    if !(r_max >= r_min) {
        return Err(Error::Domain("landscape radial range is empty".into()));
    }
    let n_a = (360.0 / angular_res).round() as usize;
    let n_d = ((r_max - r_min) / radial_res + 1e-9).floor() as usize + 1;
    let angles: Vec<f64> = (0..n_a).map(|i| i as f64 * angular_res).collect();
    let distances: Vec<f64> = (0..n_d).map(|i| r_min + i as f64 * radial_res).collect();
    let power = (0..n_a * n_d)
        .into_par_iter()
        .map(|cell| two_buoy_power(params, scenario, angles[cell / n_d], distances[cell % n_d]))
        .collect::<Result<Vec<f64>>>()?;
    Ok(SurrogateLandscape {
        scenario_name: scenario.name.clone(),
        angular_res,
        radial_res,
        angles,
        distances,
        power,
        evaluations: n_a * n_d,
    })
}

/// Angular and radial extent relative to the last placed buoy.
///
/// Angles are in degrees and may extend below 0 or above 360.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSector {
    pub angle_range: (f64, f64),
    pub radial_range: (f64, f64),
}

impl SearchSector {
    /// The same sector on the opposite side of the anchor.
    pub fn mirrored(&self) -> Self {
        Self { angle_range: (self.angle_range.0 + 180.0, self.angle_range.1 + 180.0), ..*self }
    }

    pub fn angular_width(&self) -> f64 {
        self.angle_range.1 - self.angle_range.0
    }

    pub fn contains(&self, angle_deg: f64, distance: f64) -> bool {
        let (lo, hi) = self.angle_range;
        let a = lo + (angle_deg - lo).rem_euclid(360.0);
        a <= hi + 1e-9 && distance >= self.radial_range.0 - 1e-9 && distance <= self.radial_range.1 + 1e-9
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorMode {
    /// Two mirrored sectors, one on each side of the current buoy.
    Sls,
    /// One sector in the upper half-plane, radially clipped to 300 m.
    Auto,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectorExtraction {
    pub sectors: Vec<SearchSector>,
    /// Angle of the best cell, degrees in `[0, 180)`.
    pub best_angle: f64,
    pub best_distance: f64,
    pub best_power: f64,
}

/// Sector spanning the best and second-best cells of the upper half-plane.
///
/// A one-step angular margin is added on both sides; the radial span is
/// widened by one step only when both cells share a distance. Ties in the
/// table resolve to the lowest angle, then the lowest distance.
pub fn extract_search_sectors(landscape: &SurrogateLandscape, mode: SectorMode) -> Result<SectorExtraction> {
    let (n_a, n_d) = landscape.shape();
    let r_cap = match mode {
        SectorMode::Auto => MAX_SECTOR_RADIUS,
        SectorMode::Sls => f64::INFINITY,
    };
    let cells: Vec<(usize, usize)> = (0..n_a)
        .filter(|&a| landscape.angles[a] < 180.0)
        .flat_map(|a| (0..n_d).map(move |d| (a, d)))
        .filter(|&(_, d)| landscape.distances[d] <= r_cap + 1e-9)
        .collect();
    if cells.len() < 2 {
        return Err(Error::DegenerateLandscape);
    }
    let value = |c: &(usize, usize)| landscape.get(c.0, c.1);
    let (lo, hi) =
        cells.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| (lo.min(value(c)), hi.max(value(c))));
    if !(hi > lo) {
        return Err(Error::DegenerateLandscape);
    }
    // Cells are ordered by angle, then distance, so strict `>` keeps the lowest on ties.
    let pick = |skip: Option<(usize, usize)>| {
        cells
            .iter()
            .filter(|&&c| Some(c) != skip)
            .fold(None::<(usize, usize)>, |best, &c| match best {
                Some(b) if value(&b) >= value(&c) => Some(b),
                _ => Some(c),
            })
            .expect("at least two cells")
    };
    let best = pick(None);
    let second = pick(Some(best));
    let (a1, d1) = (landscape.angles[best.0], landscape.distances[best.1]);
    let (mut a2, d2) = (landscape.angles[second.0], landscape.distances[second.1]);
    // Use the mirror twin of the second cell when it is closer in angle.
    if a2 - a1 > 90.0 {
        a2 -= 180.0;
    } else if a1 - a2 > 90.0 {
        a2 += 180.0;
    }
    let step_a = landscape.angular_res;
    let angle_range = (a1.min(a2) - step_a, a1.max(a2) + step_a);
    let (mut r_lo, mut r_hi) = (d1.min(d2), d1.max(d2));
    if r_hi - r_lo < 1e-9 {
        r_lo -= landscape.radial_res;
        r_hi += landscape.radial_res;
    }
    let r_lo = r_lo.max(DEFAULT_MIN_SEPARATION);
    let r_hi = r_hi.min(r_cap);
    let sector = SearchSector { angle_range, radial_range: (r_lo, r_hi) };
    let sectors = match mode {
        SectorMode::Auto => vec![sector],
        SectorMode::Sls => vec![sector, sector.mirrored()],
    };
    Ok(SectorExtraction { sectors, best_angle: a1, best_distance: d1, best_power: value(&best) })
}
