use super::{dist, Bounds, Metered, Point2, RefinerResult};

const REFLECTION: f64 = 1.0;
const EXPANSION: f64 = 2.0;
const CONTRACTION: f64 = 0.5;
const SHRINK: f64 = 0.5;
const INITIAL_EDGE: f64 = 10.0;
const MIN_DIAMETER: f64 = 0.1;

fn along(c: Point2, towards: Point2, t: f64) -> Point2 {
    [c[0] + t * (towards[0] - c[0]), c[1] + t * (towards[1] - c[1])]
}

/// Nelder–Mead on a 2D position, maximizing.
///
/// The simplex starts with 10 m edges along the axes; every proposal is
/// clamped into `bounds`. Stops after `max_evals` objective calls or when the
/// simplex diameter drops below 0.1 m. `start_value` is the known objective
/// at `start` and is not re-evaluated.
pub fn nelder_mead<F>(objective: F, start: Point2, start_value: f64, bounds: &Bounds, max_evals: usize) -> RefinerResult
where
    F: FnMut(Point2) -> Option<f64>,
{
    let mut m = Metered::new(objective, max_evals, start, start_value);
    let mut simplex: Vec<(Point2, f64)> = vec![(start, start_value)];
    for axis in 0..2 {
        let mut v = start;
        v[axis] += INITIAL_EDGE;
        if v[axis] > bounds.hi[axis] {
            v[axis] = start[axis] - INITIAL_EDGE;
        }
        let v = bounds.clamp(v);
        let Some(fv) = m.call(v) else { return m.finish(false) };
        simplex.push((v, fv));
    }

    loop {
        // Stable sort keeps the earlier vertex first on ties.
        simplex.sort_by(|a, b| b.1.total_cmp(&a.1));
        let diameter = (0..3)
            .flat_map(|i| (i + 1..3).map(move |j| (i, j)))
            .map(|(i, j)| dist(simplex[i].0, simplex[j].0))
            .fold(0.0, f64::max);
        if diameter < MIN_DIAMETER {
            return m.finish(true);
        }
        let (best, good, worst) = (simplex[0], simplex[1], simplex[2]);
        let centroid = [(best.0[0] + good.0[0]) / 2.0, (best.0[1] + good.0[1]) / 2.0];

        let r = bounds.clamp(along(centroid, worst.0, -REFLECTION));
        let Some(fr) = m.call(r) else { return m.finish(false) };
        if fr > best.1 {
            let e = bounds.clamp(along(centroid, r, EXPANSION));
            let Some(fe) = m.call(e) else {
                simplex[2] = (r, fr);
                return m.finish(false);
            };
            simplex[2] = if fe > fr { (e, fe) } else { (r, fr) };
            continue;
        }
        if fr > good.1 {
            simplex[2] = (r, fr);
            continue;
        }
        let (c, outside) = if fr > worst.1 {
            (bounds.clamp(along(centroid, r, CONTRACTION)), true)
        } else {
            (bounds.clamp(along(centroid, worst.0, CONTRACTION)), false)
        };
        let Some(fc) = m.call(c) else { return m.finish(false) };
        if (outside && fc >= fr) || (!outside && fc > worst.1) {
            simplex[2] = (c, fc);
            continue;
        }
        for i in 1..3 {
            let p = along(best.0, simplex[i].0, SHRINK);
            let Some(fp) = m.call(p) else { return m.finish(false) };
            simplex[i] = (p, fp);
        }
    }
}
