use rayon::prelude::*;

use super::scenario::{SeaState, WaveScenario};
use super::spectrum::bretschneider_spectrum;
use crate::error::{Error, Result};
use crate::geometry::Layout;
use crate::model::{
    regular_wave_power, FrequencySystem, HydroKernel, PointAbsorberKernel, PowerBreakdown, WecParameters,
};

/// Regular-wave power for every `(direction, frequency)` node of a scenario.
///
/// Stored direction-major so that reductions run in ascending direction,
/// then ascending frequency order.
#[derive(Debug, Clone)]
pub struct RegularPowerGrid {
    n_dirs: usize,
    n_freqs: usize,
    cells: Vec<PowerBreakdown>,
}

impl RegularPowerGrid {
    pub fn get(&self, dir: usize, freq: usize) -> &PowerBreakdown {
        &self.cells[dir * self.n_freqs + freq]
    }

    pub fn n_dirs(&self) -> usize {
        self.n_dirs
    }

    pub fn n_freqs(&self) -> usize {
        self.n_freqs
    }
}

/// Computes the regular-wave power grid, factoring the impedance once per
/// frequency. With `parallel`, frequencies are solved concurrently; the
/// result does not depend on it.
pub fn regular_power_grid<K: HydroKernel + ?Sized>(
    kernel: &K,
    layout: &Layout,
    params: &WecParameters,
    scenario: &WaveScenario,
    parallel: bool,
) -> Result<RegularPowerGrid> {
    let solve_freq = |fi: usize| -> Result<Vec<PowerBreakdown>> {
        let omega = scenario.frequencies[fi].omega;
        let rad = kernel.radiation(layout, params, omega)?;
        let system = FrequencySystem::new(&rad, params)?;
        scenario
            .directions
            .iter()
            .map(|d| {
                let f = kernel.excitation(layout, params, omega, d.beta)?;
                let motion = system.solve(&f, d.beta)?;
                Ok(regular_wave_power(&motion, params))
            })
            .collect()
    };
    let n_freqs = scenario.frequencies.len();
    let by_freq: Vec<Vec<PowerBreakdown>> = if parallel {
        (0..n_freqs).into_par_iter().map(solve_freq).collect::<Result<_>>()?
    } else {
        (0..n_freqs).map(solve_freq).collect::<Result<_>>()?
    };
    let n_dirs = scenario.directions.len();
    let mut cells = Vec::with_capacity(n_dirs * n_freqs);
    for di in 0..n_dirs {
        for column in &by_freq {
            cells.push(column[di].clone());
        }
    }
    Ok(RegularPowerGrid { n_dirs, n_freqs, cells })
}

/// Sea-state power `sum_beta sum_omega 2 S(omega) D(beta) P(beta, omega) d_omega d_beta`
/// from a precomputed grid.
pub fn sea_state_power_from_grid(
    grid: &RegularPowerGrid,
    sea_state: &SeaState,
    scenario: &WaveScenario,
) -> Result<PowerBreakdown> {
    if grid.n_dirs != scenario.directions.len() || grid.n_freqs != scenario.frequencies.len() {
        return Err(Error::Domain("power grid does not match the scenario grids".into()));
    }
    let n_buoys = grid.cells.first().map_or(0, |c| c.per_buoy.len());
    let spectrum: Vec<f64> = scenario
        .frequencies
        .iter()
        .map(|f| bretschneider_spectrum(sea_state.hs, sea_state.tp, f.omega).map(|s| s * f.weight))
        .collect::<Result<_>>()?;
    let mut out = PowerBreakdown::zeros(n_buoys);
    for (di, d) in scenario.directions.iter().enumerate() {
        let dir_weight = 2.0 * d.weight * d.width;
        for (fi, s) in spectrum.iter().enumerate() {
            let cell = grid.get(di, fi);
            for (acc, v) in out.per_buoy.iter_mut().zip(&cell.per_buoy) {
                *acc += dir_weight * s * v;
            }
        }
    }
    out.total = out.per_buoy.iter().sum();
    Ok(out)
}

/// Mean power of the array in one sea state.
pub fn sea_state_power(
    layout: &Layout,
    params: &WecParameters,
    sea_state: &SeaState,
    scenario: &WaveScenario,
) -> Result<PowerBreakdown> {
    let grid = regular_power_grid(&PointAbsorberKernel, layout, params, scenario, false)?;
    sea_state_power_from_grid(&grid, sea_state, scenario)
}

/// Annual average power `sum_i O_i P_i` from a precomputed grid.
pub fn annual_average_power_from_grid(grid: &RegularPowerGrid, scenario: &WaveScenario) -> Result<PowerBreakdown> {
    let n_buoys = grid.cells.first().map_or(0, |c| c.per_buoy.len());
    let mut out = PowerBreakdown::zeros(n_buoys);
    for s in &scenario.sea_states {
        let p = sea_state_power_from_grid(grid, s, scenario)?;
        out.accumulate(&p, s.occurrence);
    }
    Ok(out)
}

/// Annual average power of `layout` under `scenario`, with `kernel`.
pub fn annual_average_power_with<K: HydroKernel + ?Sized>(
    kernel: &K,
    layout: &Layout,
    params: &WecParameters,
    scenario: &WaveScenario,
    parallel: bool,
) -> Result<PowerBreakdown> {
    let grid = regular_power_grid(kernel, layout, params, scenario, parallel)?;
    annual_average_power_from_grid(&grid, scenario)
}

/// Annual average power of `layout` under `scenario`.
pub fn annual_average_power(
    layout: &Layout,
    params: &WecParameters,
    scenario: &WaveScenario,
) -> Result<PowerBreakdown> {
    annual_average_power_with(&PointAbsorberKernel, layout, params, scenario, false)
}

/// Annual average power of a single isolated converter.
pub fn isolated_annual_power(params: &WecParameters, scenario: &WaveScenario) -> Result<f64> {
    let single = Layout::from_xy(&[(0.0, 0.0)])?;
    Ok(annual_average_power(&single, params, scenario)?.total)
}

/// Array power relative to `n` isolated converters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QFactorReport {
    pub p_aap: f64,
    pub isolated_p_aap: f64,
    pub n_buoys: usize,
    pub q: f64,
}

pub fn q_factor(p_aap: f64, n: usize, isolated: f64) -> Result<QFactorReport> {
    if n < 1 {
        return Err(Error::Domain("q-factor needs at least one buoy".into()));
    }
    if !(isolated > 0.0) {
        return Err(Error::Domain(format!("isolated power must be positive, got {isolated}")));
    }
    Ok(QFactorReport { p_aap, isolated_p_aap: isolated, n_buoys: n, q: p_aap / (n as f64 * isolated) })
}
