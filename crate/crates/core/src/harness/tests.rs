use super::*;
use crate::climate::WaveScenario;
use crate::heuristics::Refiner;

fn cheap_config(method: Method, workers: usize) -> ExperimentConfig {
    let mut c = ExperimentConfig::new("unused", method, 3, 25);
    c.n_runs = 4;
    c.root_seed = 7;
    c.workers = workers;
    c
}

fn cheap_scenario() -> WaveScenario {
    WaveScenario::new(
        "cheap",
        vec![crate::SeaState { hs: 2.0, tp: 8.0, occurrence: 1.0 }],
        &[(0.0, 1.0)],
        &[0.6, 0.8, 1.0],
    )
    .unwrap()
}

#[test]
fn every_method_name_parses_back() {
    let names: Vec<_> = Method::names().collect();
    assert_eq!(names.len(), 15);
    for n in names {
        let m: Method = n.parse().unwrap();
        assert_eq!(m.to_string(), n);
    }
    assert_eq!("ISLS2-AS".parse::<Method>().unwrap(), Method::Isls2(Refiner::ActiveSet));
    assert!(matches!("bogus".parse::<Method>(), Err(crate::Error::Config(_))));
}

#[test]
fn config_validation() {
    let mut c = cheap_config(Method::RandomSearch, 1);
    assert!(c.validate().is_ok());
    c.workers = 0;
    assert!(c.validate().is_err());
    let mut c = cheap_config(Method::RandomSearch, 1);
    c.budget = 0;
    assert!(c.validate().is_err());
    assert_eq!(cheap_config(Method::RandomSearch, 1).seed_of(3), 10);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let sc = cheap_scenario();
    for method in [Method::RandomSearch, Method::DifferentialEvolution, Method::Isls2(Refiner::Sqp)] {
        let mut one = cheap_config(method, 1);
        let mut four = cheap_config(method, 4);
        if method == Method::DifferentialEvolution {
            one.method_params.de.population = 5;
            four.method_params.de.population = 5;
        }
        let a = run_experiment_on(&one, &sc).unwrap();
        let b = run_experiment_on(&four, &sc).unwrap();
        let rows = |r: &[RunRecord]| results_to_csv(&r.iter().map(ResultRow::from).collect::<Vec<_>>()).unwrap();
        assert_eq!(rows(&a), rows(&b), "{method}");
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.layout, y.layout);
            assert_eq!(x.trace, y.trace);
        }
        assert!(a.iter().enumerate().all(|(i, r)| r.run_id == i && r.seed == 7 + i as u64));
    }
}

#[test]
fn records_respect_budget_and_trace_is_monotone() {
    let sc = cheap_scenario();
    let recs = run_experiment_on(&cheap_config(Method::EaOneFifth, 2), &sc).unwrap();
    for r in &recs {
        assert!(r.evaluations_used <= 25);
        assert!(r.trace.windows(2).all(|w| w[1].best_fitness >= w[0].best_fitness));
        assert!(r.trace.windows(2).all(|w| w[1].evaluation > w[0].evaluation));
        assert_eq!(r.surrogate_evaluations, 0);
        assert!(r.q_factor > 0.0);
    }
}

#[test]
fn guided_methods_report_surrogate_cost() {
    let sc = cheap_scenario();
    let mut c = cheap_config(Method::Sls, 1);
    c.n_runs = 1;
    c.budget = 100;
    let r = &run_experiment_on(&c, &sc).unwrap()[0];
    // 8 coarse angles by 51 distances.
    assert_eq!(r.surrogate_evaluations, 8 * 51);
}

#[test]
fn files_round_trip_statistics() {
    let sc = cheap_scenario();
    let recs = run_experiment_on(&cheap_config(Method::RandomSearch, 2), &sc).unwrap();
    let dir = tempfile::tempdir().unwrap();
    write_experiment(dir.path(), &recs).unwrap();
    let rows = read_results(dir.path()).unwrap();
    let from_file: Vec<f64> = rows.iter().map(|r| r.penalized_w).collect();
    let in_memory: Vec<f64> = recs.iter().map(|r| r.report.penalized_fitness).collect();
    assert_eq!(summarize(&from_file).unwrap(), summarize(&in_memory).unwrap());
    for r in &recs {
        assert!(dir.path().join(format!("trace_{}.csv", r.run_id)).exists());
        let text = std::fs::read_to_string(dir.path().join(format!("layout_{}.csv", r.run_id))).unwrap();
        assert_eq!(layout_from_csv(&text).unwrap().len(), 3);
    }
}
