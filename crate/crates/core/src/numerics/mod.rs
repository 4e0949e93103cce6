//! Local refiners for the position of a single buoy.
//!
//! Everything here maximizes. Objectives are `FnMut([f64; 2]) -> Option<f64>`;
//! returning `None` stops the refiner (the caller ran out of budget) and the
//! best point seen so far is returned.

mod descent;
mod nelder_mead;
mod proxy;

pub use descent::{constrained_descent, fd_gradient, DescentStrategy, FD_STEP};
pub use nelder_mead::nelder_mead;
pub use proxy::max_distance_point;

pub type Point2 = [f64; 2];

/// Axis-aligned box `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lo: Point2,
    pub hi: Point2,
}

impl Bounds {
    pub fn square(side: f64) -> Self {
        Self { lo: [0.0, 0.0], hi: [side, side] }
    }

    pub fn clamp(&self, p: Point2) -> Point2 {
        [p[0].clamp(self.lo[0], self.hi[0]), p[1].clamp(self.lo[1], self.hi[1])]
    }

    pub fn contains(&self, p: Point2) -> bool {
        (0..2).all(|i| p[i] >= self.lo[i] && p[i] <= self.hi[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    MaxEvaluations,
    Converged,
    /// The objective asked to stop.
    Stopped,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinerResult {
    pub best_point: Point2,
    pub best_value: f64,
    pub evaluations_used: usize,
    pub converged: bool,
    pub termination: Termination,
}

/// Counts objective calls against a cap and tracks the incumbent.
pub(crate) struct Metered<F> {
    f: F,
    cap: usize,
    pub used: usize,
    pub best_point: Point2,
    pub best_value: f64,
    pub stopped: bool,
}

impl<F: FnMut(Point2) -> Option<f64>> Metered<F> {
    pub fn new(f: F, cap: usize, start: Point2, start_value: f64) -> Self {
        Self { f, cap, used: 0, best_point: start, best_value: start_value, stopped: false }
    }

    pub fn remaining(&self) -> usize {
        self.cap.saturating_sub(self.used)
    }

    pub fn call(&mut self, p: Point2) -> Option<f64> {
        if self.stopped || self.used >= self.cap {
            return None;
        }
        self.used += 1;
        match (self.f)(p) {
            Some(v) => {
                if v > self.best_value {
                    self.best_value = v;
                    self.best_point = p;
                }
                Some(v)
            }
            None => {
                self.stopped = true;
                None
            }
        }
    }

    pub fn finish(self, converged: bool) -> RefinerResult {
        let termination = if self.stopped {
            Termination::Stopped
        } else if converged {
            Termination::Converged
        } else {
            Termination::MaxEvaluations
        };
        RefinerResult {
            best_point: self.best_point,
            best_value: self.best_value,
            evaluations_used: self.used,
            converged,
            termination,
        }
    }
}

pub(crate) fn norm(v: Point2) -> f64 {
    v[0].hypot(v[1])
}

pub(crate) fn dist(a: Point2, b: Point2) -> f64 {
    norm([a[0] - b[0], a[1] - b[1]])
}
