use rand::Rng;

use super::descent::descend;
use super::{Bounds, DescentStrategy, Point2};
use crate::geometry::Position;

const STARTS: usize = 3;
const PROXY_ITERATIONS: usize = 20;

fn min_distance(p: Point2, placed: &[Position]) -> f64 {
    placed.iter().map(|q| (p[0] - q.x).hypot(p[1] - q.y)).fold(f64::INFINITY, f64::min)
}

/// Point in `bounds` as far as possible from every placed buoy.
///
/// Best of three uniform starts and the four corners, then 20 SQP iterations on the min-distance
/// function. Purely geometric, so it costs no farm evaluations and the
/// iteration count rather than the call count is what is capped.
pub fn max_distance_point<R: Rng + ?Sized>(placed: &[Position], bounds: &Bounds, rng: &mut R) -> Position {
    if placed.is_empty() {
        return Position::new((bounds.lo[0] + bounds.hi[0]) / 2.0, (bounds.lo[1] + bounds.hi[1]) / 2.0);
    }
    let mut start = [bounds.lo[0], bounds.lo[1]];
    let mut start_value = f64::NEG_INFINITY;
    let random: Vec<Point2> = (0..STARTS)
        .map(|_| [rng.random_range(bounds.lo[0]..=bounds.hi[0]), rng.random_range(bounds.lo[1]..=bounds.hi[1])])
        .collect();
    let corners = [bounds.lo, [bounds.hi[0], bounds.lo[1]], [bounds.lo[0], bounds.hi[1]], bounds.hi];
    for p in random.into_iter().chain(corners) {
        let v = min_distance(p, placed);
        if v > start_value {
            start = p;
            start_value = v;
        }
    }
    let r = descend(
        |p| Some(min_distance(p, placed)),
        start,
        start_value,
        bounds,
        DescentStrategy::Sqp,
        usize::MAX,
        PROXY_ITERATIONS,
    );
    let p = bounds.clamp(r.best_point);
    Position::new(p[0], p[1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;

    #[test]
    fn single_corner_goes_to_opposite_corner() {
        let b = Bounds::square(500.0);
        for seed in 0..20 {
            let mut r = rng::root(seed);
            let p = max_distance_point(&[Position::new(0.0, 0.0)], &b, &mut r);
            assert!(p.distance(Position::new(500.0, 500.0)) < 10.0, "seed {seed}: {p:?}");
        }
    }

    #[test]
    fn four_corners_go_to_center() {
        let b = Bounds::square(500.0);
        let corners = [(0.0, 0.0), (500.0, 0.0), (0.0, 500.0), (500.0, 500.0)].map(Position::from);
        // Dense-grid oracle for the optimum.
        let mut best = (0.0, [0.0, 0.0]);
        for i in 0..=100 {
            for j in 0..=100 {
                let p = [i as f64 * 5.0, j as f64 * 5.0];
                let v = min_distance(p, &corners);
                if v > best.0 {
                    best = (v, p);
                }
            }
        }
        let oracle = Position::new(best.1[0], best.1[1]);
        for seed in 0..20 {
            let mut r = rng::root(seed);
            let p = max_distance_point(&corners, &b, &mut r);
            assert!(p.distance(oracle) < 10.0, "seed {seed}: {p:?}");
        }
    }

    #[test]
    fn stays_in_bounds() {
        let b = Bounds::square(300.0);
        let mut r = rng::root(7);
        for k in 0..30 {
            let placed: Vec<Position> =
                (0..=k % 5).map(|i| Position::new(37.0 * i as f64, 300.0 - 11.0 * i as f64)).collect();
            let p = max_distance_point(&placed, &b, &mut r);
            assert!(b.contains([p.x, p.y]));
        }
    }
}
