//! Wave climate: spectra, directional spreading, sea-state statistics and the
//! integration of regular-wave power into annual average power.

mod power;
mod scenario;
mod spectrum;

pub use power::{
    annual_average_power, annual_average_power_from_grid, annual_average_power_with, isolated_annual_power, q_factor,
    regular_power_grid, sea_state_power, sea_state_power_from_grid, QFactorReport, RegularPowerGrid,
};
pub use scenario::{
    default_frequency_grid, direction_grid, frequency_grid, load_scenario, parse_scenario, Direction, FrequencyNode,
    SeaState, WaveScenario, DEFAULT_FREQUENCY_COUNT, DEFAULT_OMEGA_MAX, DEFAULT_OMEGA_MIN,
};
pub use spectrum::bretschneider_spectrum;
