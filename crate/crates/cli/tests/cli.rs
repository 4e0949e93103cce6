use std::path::Path;
use std::process::{Command, Output};

fn wecopt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wecopt")).args(args).output().expect("binary runs")
}

/// Single sea state, one direction, three frequencies: fast to evaluate.
fn cheap_scenario(dir: &Path) -> String {
    let path = dir.join("cheap.csv");
    std::fs::write(
        &path,
        "# scenario: cheap\n[seastates]\nHs,Tp,O\n2.0,8.0,1.0\n[directions]\nbeta_deg,weight\n0,1\n[frequencies]\nomega\n0.6\n0.8\n1.0\n",
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

fn optimize(scenario: &str, method: &str, out: &Path, workers: &str, budget: &str) -> Output {
    wecopt(&[
        "optimize",
        "--scenario",
        scenario,
        "--method",
        method,
        "--buoys",
        "3",
        "--budget",
        budget,
        "--runs",
        "3",
        "--seed",
        "11",
        "--out",
        out.to_str().unwrap(),
        "--workers",
        workers,
    ])
}

#[test]
fn optimize_writes_all_files() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = cheap_scenario(tmp.path());
    let out = tmp.path().join("rs");
    let o = optimize(&sc, "rs", &out, "2", "30");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let results = std::fs::read_to_string(out.join("results.csv")).unwrap();
    assert!(results.starts_with("run_id,seed,final_power_w,violation_m,penalized_w,q_factor,evals_used\n"));
    assert_eq!(results.lines().count(), 4);
    for run in 0..3 {
        let trace = std::fs::read_to_string(out.join(format!("trace_{run}.csv"))).unwrap();
        assert!(trace.starts_with("eval_index,best_penalized_w\n"));
        let layout = std::fs::read_to_string(out.join(format!("layout_{run}.csv"))).unwrap();
        assert!(layout.starts_with("buoy_index,x_m,y_m,per_buoy_power_w\n"));
        assert_eq!(layout.lines().count(), 4);
    }
}

#[test]
fn results_identical_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = cheap_scenario(tmp.path());
    let (one, four) = (tmp.path().join("one"), tmp.path().join("four"));
    assert!(optimize(&sc, "isls2-sqp", &one, "1", "60").status.success());
    assert!(optimize(&sc, "isls2-sqp", &four, "4", "60").status.success());
    let a = std::fs::read(one.join("results.csv")).unwrap();
    let b = std::fs::read(four.join("results.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn configuration_errors_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = cheap_scenario(tmp.path());
    let out = tmp.path().join("x");
    assert_eq!(optimize(&sc, "no-such-method", &out, "1", "10").status.code(), Some(2));
    assert_eq!(optimize("no-such-scenario.csv", "rs", &out, "1", "10").status.code(), Some(2));
    assert_eq!(optimize(&sc, "rs", &out, "1", "0").status.code(), Some(2));
    assert_eq!(wecopt(&["optimize", "--method", "rs"]).status.code(), Some(2));
}

#[test]
fn exhausted_budget_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = cheap_scenario(tmp.path());
    let out = tmp.path().join("short");
    // Sequential placement needs far more than 5 evaluations for 3 buoys.
    let o = optimize(&sc, "sls", &out, "1", "5");
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(out.join("results.csv").exists());
}

#[test]
fn compare_reports_both_directions() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = cheap_scenario(tmp.path());
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(optimize(&sc, "rs", &a, "2", "40").status.success());
    assert!(optimize(&sc, "rs", &b, "2", "2").status.success());
    let o = wecopt(&["compare", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap()]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("p(a > b)") && text.contains("p(b > a)"), "{text}");
    let bad = wecopt(&["compare", "--a", a.to_str().unwrap(), "--b", b.to_str().unwrap(), "--alpha", "2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn field_and_landscape_files() {
    let tmp = tempfile::tempdir().unwrap();
    let sc = cheap_scenario(tmp.path());
    let layout = tmp.path().join("layout.csv");
    std::fs::write(&layout, "buoy_index,x_m,y_m,per_buoy_power_w\n0,50.00,50.00,1\n").unwrap();
    let field = tmp.path().join("field.csv");
    let o = wecopt(&[
        "field",
        "--layout",
        layout.to_str().unwrap(),
        "--scenario",
        &sc,
        "--step",
        "50",
        "--margin",
        "0",
        "--out",
        field.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&field).unwrap();
    assert!(text.starts_with("x_m,y_m,power_w,masked\n"));
    // Side 141.42 m, step 50: 3 x 3 nodes, only (50, 50) is masked.
    assert_eq!(text.lines().count(), 10);
    assert_eq!(text.lines().filter(|l| l.ends_with(",1")).count(), 1);

    let land = tmp.path().join("land.csv");
    let o = wecopt(&["landscape", "--scenario", &sc, "--mode", "coarse", "--out", land.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8(o.stdout).unwrap().matches("sector:").count() == 2);
}
