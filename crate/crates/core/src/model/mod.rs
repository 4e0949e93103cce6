//! Frequency-domain motion and power of a converter array.

mod kernel;
mod motion;
mod params;

pub use kernel::{
    dispersion_wavenumber, kernel_matrices, HydroCoefficients, HydroKernel, PointAbsorberKernel, RadiationCoefficients,
};
pub use motion::{regular_wave_power, solve_motion, FrequencySystem, MotionSolution, PowerBreakdown, MAX_CONDITION};
pub use params::{WecParameters, GRAVITY, WATER_DENSITY};

use crate::error::Result;
use crate::geometry::Layout;

/// Power absorbed by the array in a unit-amplitude regular wave, using `kernel`.
pub fn farm_power_regular_with<K: HydroKernel + ?Sized>(
    kernel: &K,
    layout: &Layout,
    params: &WecParameters,
    omega: f64,
    beta: f64,
) -> Result<PowerBreakdown> {
    let coeffs = kernel.coefficients(layout, params, omega, beta)?;
    let motion = solve_motion(&coeffs, params)?;
    Ok(regular_wave_power(&motion, params))
}

/// Power absorbed by the array in a unit-amplitude regular wave.
pub fn farm_power_regular(layout: &Layout, params: &WecParameters, omega: f64, beta: f64) -> Result<PowerBreakdown> {
    farm_power_regular_with(&PointAbsorberKernel, layout, params, omega, beta)
}
