use std::ops::{Add, Sub};

use crate::error::{Error, Result};

/// A planar position in metres.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Position {
    pub x: f64,
    pub y: f64,
}

impl Position {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Point at `distance` metres from `self` along `angle_deg` (counter-clockwise from +x).
    pub fn offset_polar(self, angle_deg: f64, distance: f64) -> Self {
        let a = angle_deg.to_radians();
        Self::new(self.x + distance * a.cos(), self.y + distance * a.sin())
    }

    pub fn distance(self, other: Position) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn rotated(self, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Position {
    type Output = Position;
    fn add(self, rhs: Position) -> Position {
        Position::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Position {
    type Output = Position;
    fn sub(self, rhs: Position) -> Position {
        Position::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl From<(f64, f64)> for Position {
    fn from((x, y): (f64, f64)) -> Self {
        Self::new(x, y)
    }
}

/// Buoy positions in placement order.
///
/// The order is significant: the sequential heuristics place buoys one at a
/// time and every output file reports buoys in this order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Layout {
    positions: Vec<Position>,
}

impl Layout {
    /// Builds a layout, rejecting empty or non-finite input.
    pub fn new(positions: Vec<Position>) -> Result<Self> {
        if positions.is_empty() {
            return Err(Error::Domain("layout must contain at least one buoy".into()));
        }
        if let Some(i) = positions.iter().position(|p| !p.is_finite()) {
            return Err(Error::Domain(format!("buoy {i} has a non-finite position")));
        }
        Ok(Self { positions })
    }

    /// A layout with no buoys yet; only used as the seed of sequential placement.
    pub fn empty() -> Self {
        Self { positions: Vec::new() }
    }

    pub fn from_xy(xy: &[(f64, f64)]) -> Result<Self> {
        Self::new(xy.iter().copied().map(Position::from).collect())
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Position] {
        &self.positions
    }

    pub fn push(&mut self, p: Position) {
        self.positions.push(p);
    }

    pub fn set(&mut self, index: usize, p: Position) {
        self.positions[index] = p;
    }

    pub fn last(&self) -> Option<Position> {
        self.positions.last().copied()
    }

    /// Layout with one extra buoy appended.
    pub fn with(&self, p: Position) -> Layout {
        let mut positions = self.positions.clone();
        positions.push(p);
        Layout { positions }
    }

    pub fn translated(&self, dx: f64, dy: f64) -> Layout {
        let d = Position::new(dx, dy);
        Layout { positions: self.positions.iter().map(|&p| p + d).collect() }
    }

    /// Rotation about the origin by `theta` radians.
    pub fn rotated(&self, theta: f64) -> Layout {
        Layout { positions: self.positions.iter().map(|p| p.rotated(theta)).collect() }
    }

    /// Coordinates flattened as `[x0, y0, x1, y1, ...]`.
    pub fn to_flat(&self) -> Vec<f64> {
        self.positions.iter().flat_map(|p| [p.x, p.y]).collect()
    }

    pub fn from_flat(flat: &[f64]) -> Result<Self> {
        if !flat.len().is_multiple_of(2) {
            return Err(Error::Domain("flat coordinate vector must have even length".into()));
        }
        Self::new(flat.chunks_exact(2).map(|c| Position::new(c[0], c[1])).collect())
    }
}
