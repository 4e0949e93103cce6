//! Power evaluation and layout optimization for arrays of fully submerged
//! three-tether wave-energy converters.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] solves the frequency-domain equations of motion of an array
//!   and reports the power absorbed in a regular wave.
//! * [`climate`] integrates that power over directional irregular seas and a
//!   site's sea-state statistics.
//! * [`fitness`] wraps the annual average power into the penalized,
//!   budget-metered objective every optimizer calls.
//! * [`landscape`] samples the two-buoy power landscape and extracts the
//!   search sectors that steer sequential placement.
//! * [`numerics`], [`heuristics`] and [`baselines`] are the optimizers.
//! * [`harness`] runs seeded experiments, computes statistics and writes
//!   result files.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod climate;
pub mod error;
pub mod fitness;
pub mod geometry;
pub mod harness;
pub mod heuristics;
pub mod landscape;
pub mod model;
pub mod numerics;
pub mod rng;
pub mod search;

pub use nalgebra::Complex as ComplexNum;
pub type Complex64 = nalgebra::Complex<f64>;

pub use climate::{annual_average_power, q_factor, QFactorReport, SeaState, WaveScenario};
pub use error::{Error, Result};
pub use fitness::{evaluate_layout, EvaluationBudget, Evaluator, FarmArea, FitnessReport};
pub use geometry::{Layout, Position};
pub use model::{farm_power_regular, PointAbsorberKernel, PowerBreakdown, WecParameters};
pub use search::{SearchOutcome, TracePoint};
