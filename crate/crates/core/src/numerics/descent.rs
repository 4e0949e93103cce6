use super::{norm, Bounds, Metered, Point2, RefinerResult};

/// Finite-difference step, metres.
pub const FD_STEP: f64 = 0.5;
const INITIAL_STEP: f64 = 20.0;
const ARMIJO: f64 = 1e-4;
const ACTIVE_TOL: f64 = 0.1;
const MIN_STEP: f64 = 1e-3;
/// Longest interpolated step, in multiples of the trial step.
const MAX_EXPANSION: f64 = 8.0;
/// Gradient norms below this fraction of |f| count as zero.
const GRAD_TOL: f64 = 1e-14;
const FRACTION_TO_BOUNDARY: f64 = 0.995;
const BARRIER_SCALE: f64 = 1e-3;

/// How the box constraints are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DescentStrategy {
    /// Active set: gradient projected onto the free coordinates.
    ActiveSet,
    /// BFGS quasi-Newton direction, step clipped at the boundary.
    Sqp,
    /// Log barrier on the slacks, iterates stay strictly interior.
    InteriorPoint,
}

/// Maximizer of the parabola through `(0, f0)` with slope `s0` there and
/// `(t, ft)`, if that parabola is concave.
fn parabola_vertex(f0: f64, s0: f64, t: f64, ft: f64) -> Option<f64> {
    let c = (ft - f0 - s0 * t) / (t * t);
    (c < 0.0 && s0 > 0.0).then(|| -s0 / (2.0 * c))
}

/// Central differences, falling back to one-sided within `h` of a bound.
///
/// `value_at_point` is the known objective at `point`; it is only used for
/// one-sided differences. Returns `None` if the objective stops.
pub fn fd_gradient<F>(objective: &mut F, point: Point2, value_at_point: f64, h: f64, bounds: &Bounds) -> Option<Point2>
where
    F: FnMut(Point2) -> Option<f64>,
{
    let mut g = [0.0; 2];
    for i in 0..2 {
        let can_down = point[i] - h >= bounds.lo[i];
        let can_up = point[i] + h <= bounds.hi[i];
        let shifted = |d: f64| {
            let mut p = point;
            p[i] += d;
            p
        };
        g[i] = match (can_down, can_up) {
            (true, true) => (objective(shifted(h))? - objective(shifted(-h))?) / (2.0 * h),
            (false, true) => (objective(shifted(h))? - value_at_point) / h,
            (true, false) => (value_at_point - objective(shifted(-h))?) / h,
            (false, false) => 0.0,
        };
    }
    Some(g)
}

fn gradient_cost(point: Point2, bounds: &Bounds) -> usize {
    (0..2)
        .map(|i| {
            let down = point[i] - FD_STEP >= bounds.lo[i];
            let up = point[i] + FD_STEP <= bounds.hi[i];
            usize::from(down) + usize::from(up)
        })
        .map(|c| c.min(2))
        .sum()
}

fn zero_gradient(f: f64) -> f64 {
    (GRAD_TOL * f.abs()).max(f64::MIN_POSITIVE)
}

fn dot(a: Point2, b: Point2) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

fn axpy(x: Point2, t: f64, d: Point2) -> Point2 {
    [x[0] + t * d[0], x[1] + t * d[1]]
}

fn sub(a: Point2, b: Point2) -> Point2 {
    [a[0] - b[0], a[1] - b[1]]
}

/// Zero the components of `d` that push through a bound the point already sits on.
fn freeze_active(x: Point2, d: Point2, bounds: &Bounds) -> Point2 {
    let mut out = d;
    for i in 0..2 {
        let at_lo = x[i] - bounds.lo[i] <= ACTIVE_TOL && d[i] < 0.0;
        let at_hi = bounds.hi[i] - x[i] <= ACTIVE_TOL && d[i] > 0.0;
        if at_lo || at_hi {
            out[i] = 0.0;
        }
    }
    out
}

/// Largest `t` with `x + t d` inside the box.
fn max_feasible_step(x: Point2, d: Point2, bounds: &Bounds) -> f64 {
    let mut t = f64::INFINITY;
    for i in 0..2 {
        if d[i] > 0.0 {
            t = t.min((bounds.hi[i] - x[i]) / d[i]);
        } else if d[i] < 0.0 {
            t = t.min((bounds.lo[i] - x[i]) / d[i]);
        }
    }
    t.max(0.0)
}

struct Barrier {
    mu: f64,
}

impl Barrier {
    fn value(&self, x: Point2, f: f64, bounds: &Bounds) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            s += (x[i] - bounds.lo[i]).ln() + (bounds.hi[i] - x[i]).ln();
        }
        f + self.mu * s
    }

    fn gradient(&self, x: Point2, g: Point2, bounds: &Bounds) -> Point2 {
        let mut out = g;
        for i in 0..2 {
            out[i] += self.mu * (1.0 / (x[i] - bounds.lo[i]) - 1.0 / (bounds.hi[i] - x[i]));
        }
        out
    }
}

/// 2×2 symmetric positive-definite model of the negative Hessian.
#[derive(Clone, Copy)]
struct Curvature([[f64; 2]; 2]);

impl Curvature {
    fn scaled(s: f64) -> Self {
        Self([[s, 0.0], [0.0, s]])
    }

    fn apply(&self, v: Point2) -> Point2 {
        let m = &self.0;
        [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]]
    }

    fn solve(&self, v: Point2) -> Point2 {
        let m = &self.0;
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        [(m[1][1] * v[0] - m[0][1] * v[1]) / det, (m[0][0] * v[1] - m[1][0] * v[0]) / det]
    }

    /// BFGS update; returns false when the curvature condition fails.
    fn update(&mut self, s: Point2, y: Point2) -> bool {
        let sy = dot(s, y);
        if sy <= 1e-12 * norm(s) * norm(y) || sy <= 0.0 {
            return false;
        }
        let bs = self.apply(s);
        let sbs = dot(s, bs);
        if sbs <= 0.0 {
            return false;
        }
        for i in 0..2 {
            for j in 0..2 {
                self.0[i][j] += y[i] * y[j] / sy - bs[i] * bs[j] / sbs;
            }
        }
        true
    }
}

/// Box-constrained gradient ascent with backtracking.
///
/// Each iteration estimates the gradient by finite differences, picks a
/// direction according to `strategy`, tries a 20 m step (or the quasi-Newton
/// step for SQP) and backtracks by quadratic interpolation until the Armijo
/// condition holds. An accepted 20 m step is stretched to the interpolated
/// maximum along the line, or doubled while it keeps improving when the
/// line is not concave. Every objective call counts against
/// `max_evals`, including gradient probes.
pub fn constrained_descent<F>(
    objective: F,
    start: Point2,
    start_value: f64,
    bounds: &Bounds,
    strategy: DescentStrategy,
    max_evals: usize,
) -> RefinerResult
where
    F: FnMut(Point2) -> Option<f64>,
{
    descend(objective, start, start_value, bounds, strategy, max_evals, usize::MAX)
}

/// Same as [`constrained_descent`] but also stops after `max_iterations`
/// gradient steps.
pub(crate) fn descend<F>(
    objective: F,
    start: Point2,
    start_value: f64,
    bounds: &Bounds,
    strategy: DescentStrategy,
    max_evals: usize,
    max_iterations: usize,
) -> RefinerResult
where
    F: FnMut(Point2) -> Option<f64>,
{
    let mut m = Metered::new(objective, max_evals, start, start_value);
    let mut x = start;
    let mut fx = start_value;
    let mut barrier = Barrier { mu: BARRIER_SCALE * start_value.abs() };
    if strategy == DescentStrategy::InteriorPoint {
        // The barrier needs a strictly interior iterate.
        for i in 0..2 {
            let pad = (1e-3 * (bounds.hi[i] - bounds.lo[i])).min(ACTIVE_TOL);
            x[i] = x[i].clamp(bounds.lo[i] + pad, bounds.hi[i] - pad);
        }
        if x != start {
            match m.call(x) {
                Some(v) => fx = v,
                None => return m.finish(false),
            }
        }
    }
    let mut curvature: Option<Curvature> = None;
    let mut previous: Option<(Point2, Point2)> = None;

    for _ in 0..max_iterations {
        if m.remaining() < gradient_cost(x, bounds) + 1 {
            return m.finish(false);
        }
        let Some(g) = fd_gradient(&mut |p| m.call(p), x, fx, FD_STEP, bounds) else {
            return m.finish(false);
        };

        let merit = |p: Point2, f: f64| match strategy {
            DescentStrategy::InteriorPoint => barrier.value(p, f, bounds),
            _ => f,
        };
        let ascent = match strategy {
            DescentStrategy::InteriorPoint => barrier.gradient(x, g, bounds),
            _ => g,
        };

        // Only steps of arbitrary length are worth stretching.
        let mut expandable = true;
        let direction = match strategy {
            DescentStrategy::ActiveSet | DescentStrategy::InteriorPoint => {
                let d = if strategy == DescentStrategy::ActiveSet { freeze_active(x, ascent, bounds) } else { ascent };
                let n = norm(d);
                if n <= zero_gradient(fx) {
                    return m.finish(true);
                }
                [d[0] / n * INITIAL_STEP, d[1] / n * INITIAL_STEP]
            }
            DescentStrategy::Sqp => {
                if let (Some(b), Some((xp, gp))) = (curvature.as_mut(), previous) {
                    if !b.update(sub(x, xp), sub(gp, g)) {
                        curvature = None;
                    }
                }
                let projected = freeze_active(x, g, bounds);
                let n = norm(projected);
                if n <= zero_gradient(fx) {
                    return m.finish(true);
                }
                let b = *curvature.get_or_insert_with(|| Curvature::scaled(n / INITIAL_STEP));
                let d = freeze_active(x, b.solve(projected), bounds);
                if norm(d) <= zero_gradient(fx) || dot(d, g) <= 0.0 {
                    // Model disagrees with the gradient; fall back to steepest ascent.
                    curvature = Some(Curvature::scaled(n / INITIAL_STEP));
                    [projected[0] / n * INITIAL_STEP, projected[1] / n * INITIAL_STEP]
                } else {
                    expandable = previous.is_none();
                    d
                }
            }
        };

        let t_limit = match strategy {
            DescentStrategy::Sqp => max_feasible_step(x, direction, bounds),
            DescentStrategy::InteriorPoint => FRACTION_TO_BOUNDARY * max_feasible_step(x, direction, bounds),
            DescentStrategy::ActiveSet => f64::INFINITY,
        };
        let trial = |t: f64| -> Point2 {
            match strategy {
                DescentStrategy::ActiveSet => bounds.clamp(axpy(x, t, direction)),
                _ => axpy(x, t.min(t_limit), direction),
            }
        };

        let base = merit(x, fx);
        let slope = dot(ascent, direction);
        let mut t = 1.0;
        let mut accepted: Option<(Point2, f64, f64)> = None;
        while m.remaining() > 0 {
            let p = trial(t);
            if norm(sub(p, x)) < MIN_STEP {
                break;
            }
            let Some(fp) = m.call(p) else { return m.finish(false) };
            let mp = merit(p, fp);
            if mp >= base + ARMIJO * dot(ascent, sub(p, x)) {
                accepted = Some((p, fp, mp));
                break;
            }
            let vertex = parabola_vertex(base, slope, t, mp).unwrap_or(0.5 * t);
            t = vertex.clamp(0.1 * t, 0.5 * t);
        }
        let Some((mut p, mut fp, mut mp)) = accepted else {
            let converged = m.remaining() > 0;
            return m.finish(converged);
        };

        // A full step of arbitrary length: jump to the interpolated maximum
        // when the line is concave, otherwise keep doubling while it pays.
        if t == 1.0 && expandable {
            if let Some(vertex) = parabola_vertex(base, slope, 1.0, mp).filter(|v| *v > 1.0 && m.remaining() > 0) {
                let q = trial(vertex.min(MAX_EXPANSION));
                if norm(sub(q, p)) >= MIN_STEP {
                    let Some(fq) = m.call(q) else { return m.finish(false) };
                    let mq = merit(q, fq);
                    if mq > mp {
                        p = q;
                        fp = fq;
                    }
                }
            } else if parabola_vertex(base, slope, 1.0, mp).is_none() {
                loop {
                    if m.remaining() == 0 {
                        break;
                    }
                    let q = trial(2.0 * t);
                    if norm(sub(q, p)) < MIN_STEP {
                        break;
                    }
                    let Some(fq) = m.call(q) else { return m.finish(false) };
                    let mq = merit(q, fq);
                    if mq > mp {
                        t *= 2.0;
                        p = q;
                        fp = fq;
                        mp = mq;
                    } else {
                        break;
                    }
                }
            }
        }

        previous = Some((x, g));
        x = p;
        fx = fp;
        if strategy == DescentStrategy::InteriorPoint {
            barrier.mu *= 0.5;
        }
    }
    m.finish(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{dist, Termination};

    fn bowl(p: Point2) -> Option<f64> {
        Some(-((p[0] - 100.0).powi(2) + (p[1] - 200.0).powi(2)))
    }

    const ALL: [DescentStrategy; 3] =
        [DescentStrategy::ActiveSet, DescentStrategy::Sqp, DescentStrategy::InteriorPoint];

    #[test]
    fn gradient_of_linear_is_exact() {
        let b = Bounds::square(100.0);
        let mut f = |p: Point2| Some(3.0 * p[0] - 2.0 * p[1]);
        let g = fd_gradient(&mut f, [10.0, 20.0], 10.0, FD_STEP, &b).unwrap();
        assert!((g[0] - 3.0).abs() < 1e-9 && (g[1] + 2.0).abs() < 1e-9);
    }

    #[test]
    fn gradient_of_quadratic() {
        let b = Bounds { lo: [-10.0, -10.0], hi: [10.0, 10.0] };
        let mut f = |p: Point2| Some(-(p[0] * p[0] + p[1] * p[1]));
        let g = fd_gradient(&mut f, [3.0, 4.0], -25.0, FD_STEP, &b).unwrap();
        assert!((g[0] + 6.0).abs() < 6e-6 && (g[1] + 8.0).abs() < 8e-6, "{g:?}");
    }

    #[test]
    fn gradient_at_bound_is_one_sided() {
        let b = Bounds::square(100.0);
        let mut probes = Vec::new();
        let mut f = |p: Point2| {
            probes.push(p);
            Some(2.0 * p[0] + p[1])
        };
        let g = fd_gradient(&mut f, [0.0, 100.0], 100.0, FD_STEP, &b).unwrap();
        assert!(probes.iter().all(|&p| b.contains(p)));
        assert_eq!(probes.len(), 2);
        assert!((g[0] - 2.0).abs() < 1e-9 && (g[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn all_strategies_reach_interior_optimum() {
        let b = Bounds::square(500.0);
        let start = [90.0, 190.0];
        for s in ALL {
            let r = constrained_descent(bowl, start, bowl(start).unwrap(), &b, s, 20);
            assert!(dist(r.best_point, [100.0, 200.0]) < 1.0, "{s:?}: {r:?}");
            assert!(r.evaluations_used <= 20);
        }
    }

    #[test]
    fn active_set_stops_on_face() {
        let b = Bounds::square(10.0);
        let r = constrained_descent(|p| Some(p[0]), [5.0, 5.0], 5.0, &b, DescentStrategy::ActiveSet, 20);
        assert_eq!(r.best_point[0], 10.0);
        assert!(r.converged, "{r:?}");
        assert_eq!(r.termination, Termination::Converged);
    }

    #[test]
    fn interior_point_stays_interior() {
        let b = Bounds::square(10.0);
        let r = constrained_descent(|p| Some(p[0] + p[1]), [5.0, 5.0], 10.0, &b, DescentStrategy::InteriorPoint, 20);
        for i in 0..2 {
            assert!(r.best_point[i] > 0.0 && r.best_point[i] < 10.0, "{r:?}");
        }
        assert!(r.best_value > 10.0);
    }

    #[test]
    fn caps_are_exact_and_monotone() {
        let b = Bounds::square(500.0);
        for s in ALL {
            for cap in 0..25 {
                let mut calls = 0;
                let r = constrained_descent(
                    |p| {
                        calls += 1;
                        bowl(p)
                    },
                    [10.0, 480.0],
                    bowl([10.0, 480.0]).unwrap(),
                    &b,
                    s,
                    cap,
                );
                assert_eq!(calls, r.evaluations_used);
                assert!(calls <= cap);
                assert!(r.best_value >= bowl([10.0, 480.0]).unwrap());
            }
        }
    }
}
