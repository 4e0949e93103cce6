use std::f64::consts::PI;

use approx::assert_relative_eq;
use proptest::prelude::*;

use super::*;
use crate::climate::SeaState;
use crate::fitness::Evaluator;
use crate::landscape::{build_two_buoy_landscape, extract_search_sectors, SectorExtraction, SectorMode};
use crate::model::WecParameters;
use crate::rng;
use crate::search::SearchOutcome;
use crate::WaveScenario;

/// One sea state, one direction, one frequency: fast enough for loops.
fn cheap_scenario() -> WaveScenario {
    let sea = vec![SeaState { hs: 2.0, tp: 9.0, occurrence: 1.0 }];
    WaveScenario::new("cheap", sea, &[(90.0, 1.0)], &[2.0 * PI / 9.0]).unwrap()
}

fn guide(angle_range: (f64, f64), radial_range: (f64, f64), best_angle: f64, best_distance: f64) -> SectorExtraction {
    let s = SearchSector { angle_range, radial_range };
    SectorExtraction { sectors: vec![s], best_angle, best_distance, best_power: 1.0 }
}

fn steep_guide() -> SectorExtraction {
    guide((60.0, 70.0), (55.0, 65.0), 65.0, 60.0)
}

fn trace_is_monotone(out: &SearchOutcome) -> bool {
    out.trace.windows(2).all(|w| w[1].best_fitness >= w[0].best_fitness && w[1].evaluation == w[0].evaluation + 1)
}

#[test]
fn first_buoy_rules() {
    let farm = FarmArea::for_buoys(16).unwrap();
    let p = place_first_buoy(FirstBuoyRule::CenterBottom, &farm, 0.0);
    assert_relative_eq!(p.x, 282.8427, epsilon = 1e-4);
    assert_eq!(p.y, 0.0);
    assert_eq!(place_first_buoy(FirstBuoyRule::Corner, &farm, 45.0), Position::new(0.0, 0.0));
    let right = place_first_buoy(FirstBuoyRule::Corner, &farm, 135.0);
    assert_relative_eq!(right.x, 565.6854, epsilon = 1e-4);
    assert_eq!(place_first_buoy(FirstBuoyRule::Corner, &farm, 0.0).x, farm.side);
    assert_eq!(place_first_buoy(FirstBuoyRule::Corner, &farm, 90.0).x, farm.side);
}

#[test]
fn refiner_names_round_trip() {
    for r in
        [Refiner::None, Refiner::NelderMead, Refiner::Sqp, Refiner::ActiveSet, Refiner::InteriorPoint, Refiner::Fast]
    {
        assert_eq!(r.to_string().parse::<Refiner>().unwrap(), r);
    }
    assert!(matches!("bfgs".parse::<Refiner>(), Err(Error::Config(_))));
}

#[test]
fn config_rejects_zero_counts() {
    let mut c = HeuristicConfig::isls(16);
    c.samples_phase1 = 0;
    assert!(matches!(c.validate(), Err(Error::Config(_))));
    assert!(HeuristicConfig::isls2(16, Refiner::ActiveSet).validate().is_ok());
}

#[test]
fn samples_stay_in_sector_when_it_fits() {
    let farm = FarmArea::for_buoys(16).unwrap();
    let sector = SearchSector { angle_range: (30.0, 75.0), radial_range: (55.0, 65.0) };
    let region = SamplingRegion::new(vec![sector], (55.0, 80.0)).unwrap();
    let anchor = Position::new(200.0, 200.0);
    let mut r = rng::root(3);
    let pts = sample_sector(&region, anchor, &farm, &mut r, 1000).unwrap();
    assert_eq!(pts.len(), 1000);
    for p in pts {
        let d = p - anchor;
        let angle = d.y.atan2(d.x).to_degrees();
        let dist = p.distance(anchor);
        assert!(sector.contains(angle, 60.0), "{angle}");
        assert!((55.0 - 1e-9..=80.0 + 1e-9).contains(&dist));
        assert!(farm.contains(p));
    }
}

#[test]
fn sampling_is_seeded() {
    let farm = FarmArea::for_buoys(16).unwrap();
    let sector = SearchSector { angle_range: (0.0, 90.0), radial_range: (50.0, 60.0) };
    let region = SamplingRegion::new(vec![sector, sector.mirrored()], (50.0, 80.0)).unwrap();
    let a = sample_sector(&region, Position::new(100.0, 100.0), &farm, &mut rng::root(9), 50).unwrap();
    let b = sample_sector(&region, Position::new(100.0, 100.0), &farm, &mut rng::root(9), 50).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sampling_outside_farm_is_infeasible() {
    let farm = FarmArea::for_buoys(16).unwrap();
    let sector = SearchSector { angle_range: (190.0, 260.0), radial_range: (55.0, 65.0) };
    let region = SamplingRegion::new(vec![sector], (55.0, 70.0)).unwrap();
    let err = sample_sector(&region, Position::new(0.0, 0.0), &farm, &mut rng::root(1), 5).unwrap_err();
    assert_eq!(err, Error::PlacementInfeasible { attempts: 500 });
}

#[test]
fn region_bottom_edge() {
    let up = SearchSector { angle_range: (60.0, 120.0), radial_range: (50.0, 60.0) };
    let r = SamplingRegion::new(vec![up], (50.0, 70.0)).unwrap();
    assert_relative_eq!(r.bottom_offset(), 50.0 * 60f64.to_radians().sin(), epsilon = 1e-12);
    let flat = SearchSector { angle_range: (150.0, 185.0), radial_range: (50.0, 60.0) };
    let r = SamplingRegion::new(vec![flat], (50.0, 70.0)).unwrap();
    assert_relative_eq!(r.bottom_offset(), 70.0 * 185f64.to_radians().sin(), epsilon = 1e-12);
    let down = SearchSector { angle_range: (-100.0, -80.0), radial_range: (50.0, 60.0) };
    let r = SamplingRegion::new(vec![down], (50.0, 70.0)).unwrap();
    assert_relative_eq!(r.bottom_offset(), -70.0, epsilon = 1e-12);
}

#[test]
fn sectors_are_turned_upwards() {
    let s = SearchSector { angle_range: (-30.0, 5.0), radial_range: (55.0, 65.0) };
    assert_eq!(oriented_sector(&s).angle_range, (150.0, 185.0));
    assert_eq!(upward_sector(&s).angle_range, (150.0, 180.0));
    let t = SearchSector { angle_range: (40.0, 60.0), radial_range: (55.0, 65.0) };
    assert_eq!(oriented_sector(&t), t);
    let u = SearchSector { angle_range: (400.0, 420.0), radial_range: (55.0, 65.0) };
    assert_eq!(oriented_sector(&u).angle_range, (40.0, 60.0));
}

#[test]
fn row_capacity_and_gate() {
    let side = 565.685424949238;
    assert_eq!(first_row_capacity(side, 165.0, 60.0), 10);
    assert_eq!(first_row_capacity(side, 0.0, 60.0), 10);
    // Steep rows are capped at the diagonal, 800 m.
    assert_eq!(first_row_capacity(side, 90.0, 50.0), 17);
    assert_eq!(first_row_capacity(side, 65.0, 60.0), 14);
    assert_eq!(active_set_gate(side, 0.0), 566.0);
    assert!(active_set_gate(side, 90.0).is_infinite());
}

#[test]
fn sls_single_buoy_needs_no_evaluations() {
    let params = WecParameters::default();
    let sc = cheap_scenario();
    let ev = Evaluator::new(&params, &sc, FarmArea::for_buoys(1).unwrap(), 100);
    let g = guide((0.0, 90.0), (50.0, 60.0), 45.0, 55.0);
    let out = run_sls(&HeuristicConfig::sls(1), &ev, &g, 1).unwrap();
    assert_eq!(out.evaluations_used, 0);
    assert_eq!(out.layout.positions(), &[Position::new(ev.farm().side / 2.0, 0.0)]);
    assert!(out.complete);
}

#[test]
fn sls_samples_every_buoy() {
    let params = WecParameters::default();
    let sc = cheap_scenario();
    for n in [2, 4] {
        let ev = Evaluator::new(&params, &sc, FarmArea::for_buoys(n).unwrap(), 10_000);
        let mut g = guide((0.0, 90.0), (50.0, 60.0), 45.0, 55.0);
        g.sectors.push(g.sectors[0].mirrored());
        let out = run_sls(&HeuristicConfig::sls(n), &ev, &g, 5).unwrap();
        assert_eq!(out.evaluations_used, 15 * (n - 1) + 15);
        assert_eq!(ev.budget().used(), out.evaluations_used);
        assert_eq!(out.layout.len(), n);
        assert!(trace_is_monotone(&out));
        assert!(out.layout.positions().iter().all(|p| ev.farm().contains(*p)));
    }
}

#[test]
fn sls_stops_when_budget_runs_out() {
    let params = WecParameters::default();
    let sc = cheap_scenario();
    let ev = Evaluator::new(&params, &sc, FarmArea::for_buoys(4).unwrap(), 20);
    let mut g = guide((0.0, 90.0), (50.0, 60.0), 45.0, 55.0);
    g.sectors.push(g.sectors[0].mirrored());
    let out = run_sls(&HeuristicConfig::sls(4), &ev, &g, 5).unwrap();
    assert!(!out.complete);
    assert_eq!(out.evaluations_used, 20);
    assert_eq!(out.layout.len(), 2);
}

#[test]
fn sls_two_buoys_near_sector_optimum() {
    // Brute force over the same sector at 1 deg / 1 m is the oracle.
    let params = WecParameters::default();
    let sc = WaveScenario::simplified();
    let land = build_two_buoy_landscape(&params, &sc, 45.0, 5.0, (50.0, 300.0)).unwrap();
    let g = extract_search_sectors(&land, SectorMode::Sls).unwrap();
    let farm = FarmArea::for_buoys(2).unwrap();
    let ev = Evaluator::new(&params, &sc, farm, usize::MAX);
    let mut best = 0.0f64;
    let first = Position::new(farm.side / 2.0, 0.0);
    let (lo, hi) = g.sectors[0].angle_range;
    let r_hi = g.best_distance + 20.0;
    for a in (lo as i32)..=(hi as i32) {
        for d in 50..=(r_hi as i32) {
            for s in [0.0, 180.0] {
                let p = farm.clamp(first.offset_polar(a as f64 + s, d as f64));
                if let Ok(r) = ev.evaluate_unmetered(&Layout::new(vec![first, p]).unwrap()) {
                    best = best.max(r.penalized_fitness);
                }
            }
        }
    }
    let mut hits = 0;
    for seed in 0..10 {
        let ev = Evaluator::new(&params, &sc, farm, 1000);
        let out = run_sls(&HeuristicConfig::sls(2), &ev, &g, seed).unwrap();
        let f = ev.evaluate_unmetered(&out.layout).unwrap().penalized_fitness;
        if f >= 0.99 * best {
            hits += 1;
        }
    }
    assert!(hits >= 9, "{hits}/10");
}

#[test]
fn isls_phase_one_climbs_and_stops_at_top() {
    let params = WecParameters::default();
    let sc = cheap_scenario();
    let n = 16;
    let farm = FarmArea::for_buoys(n).unwrap();
    let g = steep_guide();
    let region = SamplingRegion::new(vec![upward_sector(&g.sectors[0])], (55.0, 70.0)).unwrap();
    for seed in 0..10 {
        let ev = Evaluator::new(&params, &sc, farm, 10_000);
        let (out, state) = run_isls2_detailed(&HeuristicConfig::isls(n), &ev, &g, seed).unwrap();
        assert!(out.complete);
        let k = state.phase_one_buoys;
        assert!(k > 1 && k < n, "{k}");
        let pos = out.layout.positions();
        assert_eq!(pos[0], Position::new(0.0, 0.0));
        assert!(pos[..k].windows(2).all(|w| w[1].y >= w[0].y));
        for anchor in &pos[..k - 1] {
            assert!(anchor.y + region.bottom_offset() < farm.side);
        }
        assert!(pos[k - 1].y + region.bottom_offset() >= farm.side);
        assert_eq!(out.evaluations_used, 10 * (k - 1) + 20 * (n - k));
        assert!(trace_is_monotone(&out));
    }
}

#[test]
fn isls2_without_refiner_matches_isls() {
    let params = WecParameters::default();
    let sc = cheap_scenario();
    let n = 9;
    let farm = FarmArea::for_buoys(n).unwrap();
    let mut cfg = HeuristicConfig::isls2(n, Refiner::None);
    cfg.samples_phase2 = 20;
    let a = run_isls2(&cfg, &Evaluator::new(&params, &sc, farm, 5000), &steep_guide(), 4).unwrap();
    let b = run_isls(&HeuristicConfig::isls(n), &Evaluator::new(&params, &sc, farm, 5000), &steep_guide(), 4).unwrap();
    assert_eq!(a, b);
}

#[test]
fn runs_are_reproducible() {
    let params = WecParameters::default();
    let sc = cheap_scenario();
    let n = 9;
    let farm = FarmArea::for_buoys(n).unwrap();
    for refiner in [Refiner::NelderMead, Refiner::ActiveSet, Refiner::Sqp, Refiner::InteriorPoint, Refiner::Fast] {
        let cfg = HeuristicConfig::isls2(n, refiner);
        let a = run_isls2(&cfg, &Evaluator::new(&params, &sc, farm, 5000), &steep_guide(), 11).unwrap();
        let b = run_isls2(&cfg, &Evaluator::new(&params, &sc, farm, 5000), &steep_guide(), 11).unwrap();
        assert_eq!(a, b, "{refiner}");
        assert!(a.complete);
        assert!(trace_is_monotone(&a));
        assert!(a.layout.positions().iter().all(|p| farm.contains(*p)));
    }
}

#[test]
fn nelder_mead_keeps_best_sample() {
    let params = WecParameters::default();
    let sc = cheap_scenario();
    let farm = FarmArea::for_buoys(9).unwrap();
    let ev = Evaluator::new(&params, &sc, farm, 1000);
    let mut session = Session::new(&ev);
    let mut placer = Placer::new(&mut session);
    let placed = Layout::from_xy(&[(100.0, 100.0), (160.0, 120.0), (200.0, 190.0)]).unwrap();
    let s = SearchSector { angle_range: (0.0, 360.0), radial_range: (50.0, 60.0) };
    let region = SamplingRegion::new(vec![s], (50.0, 160.0)).unwrap();
    for seed in 0..5 {
        let (p, f, _) = placer
            .sample_and_pick(&placed, &region, Position::new(200.0, 190.0), &mut rng::root(seed), 3)
            .unwrap()
            .unwrap();
        let (q, exhausted) = placer.refine(&placed, p, f, Refiner::NelderMead, 20).unwrap();
        assert!(!exhausted);
        let refined = ev.evaluate_unmetered(&placed.with(q)).unwrap().penalized_fitness;
        assert!(refined >= f);
    }
}

#[test]
fn fast_places_at_max_min_distance() {
    let params = WecParameters::default();
    let sc = cheap_scenario();
    let n = 16;
    let farm = FarmArea::for_buoys(n).unwrap();
    // A flat first row leaves the upper half empty.
    let g = guide((0.0, 10.0), (55.0, 65.0), 5.0, 60.0);
    for seed in 0..5 {
        let ev = Evaluator::new(&params, &sc, farm, 5000);
        let (out, state) = run_isls2_detailed(&HeuristicConfig::isls2(n, Refiner::Fast), &ev, &g, seed).unwrap();
        let k = state.phase_one_buoys;
        let pos = out.layout.positions();
        assert!(pos[..k].iter().all(|p| p.y < farm.side / 2.0));
        // Each FAST buoy costs one evaluation.
        assert_eq!(out.evaluations_used, 10 * (k - 1) + (n - k));
        {
            let i = k;
            let min_dist = |p: Position| pos[..i].iter().map(|q| q.distance(p)).fold(f64::INFINITY, f64::min);
            let mut oracle = 0.0f64;
            let steps = 200;
            for a in 0..=steps {
                for b in 0..=steps {
                    let p = Position::new(farm.side * a as f64 / steps as f64, farm.side * b as f64 / steps as f64);
                    oracle = oracle.max(min_dist(p));
                }
            }
            assert!((min_dist(pos[i]) - oracle).abs() < 5.0, "seed {seed}: {} vs {oracle}", min_dist(pos[i]));
        }
    }
}

#[test]
fn active_set_variant_fills_the_farm_feasibly() {
    let params = WecParameters::default();
    let sc = cheap_scenario();
    let n = 9;
    let farm = FarmArea::for_buoys(n).unwrap();
    let ev = Evaluator::new(&params, &sc, farm, 600);
    let out = run_isls2(&HeuristicConfig::isls2(n, Refiner::ActiveSet), &ev, &steep_guide(), 0).unwrap();
    assert!(out.complete);
    let report = ev.evaluate_unmetered(&out.layout).unwrap();
    assert_eq!(report.violation_sum, 0.0);
    assert!(out.evaluations_used <= 600);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sampled_steps_respect_minimum_separation(
        seed in any::<u64>(),
        x in 0.0..400.0f64, y in 0.0..400.0f64,
        lo in -180.0..180.0f64, width in 1.0..120.0f64,
    ) {
        let farm = FarmArea::for_buoys(8).unwrap();
        let s = SearchSector { angle_range: (lo, lo + width), radial_range: (50.0, 60.0) };
        let region = SamplingRegion::new(vec![s, s.mirrored()], (50.0, 90.0)).unwrap();
        let anchor = farm.clamp(Position::new(x, y));
        if let Ok(pts) = sample_sector(&region, anchor, &farm, &mut rng::root(seed), 15) {
            for p in pts {
                prop_assert!(farm.contains(p));
                prop_assert!(p.distance(anchor) >= 50.0 - 1e-9);
            }
        }
    }
}
