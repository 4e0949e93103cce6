use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wecopt::fitness::{farm_side, DEFAULT_MIN_SEPARATION};
use wecopt::harness::{
    export_energy_field, field_to_csv, layout_from_csv, read_results, run_experiment, summarize, wilcoxon_one_tailed,
    write_experiment, ExperimentConfig, Method, Summary, FIELD_MARGIN,
};
use wecopt::landscape::{
    build_two_buoy_landscape, extract_search_sectors, SectorMode, COARSE_ANGULAR_RES, FINE_ANGULAR_RES,
    MAX_SECTOR_RADIUS, RADIAL_RES,
};
use wecopt::{Error, WaveScenario, WecParameters};

#[derive(Parser)]
#[command(name = "wecopt", version, about = "Layout optimization for wave-energy converter farms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded optimizations and write results.csv plus per-run traces and layouts.
    Optimize(OptimizeArgs),
    /// Sample the two-buoy power landscape and report the search sectors.
    Landscape(LandscapeArgs),
    /// Export the probe-buoy energy field around a layout.
    Field(FieldArgs),
    /// One-tailed rank-sum comparison of two result directories.
    Compare(CompareArgs),
}

#[derive(clap::Args)]
struct OptimizeArgs {
    /// Built-in scenario name or scenario file.
    #[arg(long, default_value = "simplified")]
    scenario: String,
    #[arg(long)]
    method: String,
    #[arg(long)]
    buoys: usize,
    /// Farm evaluations per run.
    #[arg(long)]
    budget: usize,
    #[arg(long, default_value_t = 1)]
    runs: usize,
    /// Root seed; run i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Mutation step for the fixed-sigma and 1/5-rule evolution strategies.
    #[arg(long)]
    sigma: Option<f64>,
    /// Differential evolution population size.
    #[arg(long)]
    de_population: Option<usize>,
    #[arg(long)]
    de_weight: Option<f64>,
    #[arg(long)]
    de_crossover: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LandscapeMode {
    /// 45 degree sampling, mirrored sector pair.
    Coarse,
    /// 5 degree sampling, single sector clipped to 300 m.
    Fine,
}

#[derive(clap::Args)]
struct LandscapeArgs {
    #[arg(long, default_value = "simplified")]
    scenario: String,
    #[arg(long, value_enum, default_value_t = LandscapeMode::Fine)]
    mode: LandscapeMode,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct FieldArgs {
    /// Layout file as written by `optimize`.
    #[arg(long)]
    layout: PathBuf,
    #[arg(long, default_value = "simplified")]
    scenario: String,
    /// Grid spacing in metres.
    #[arg(long, default_value_t = 10.0)]
    step: f64,
    /// Extent beyond the farm edge in metres.
    #[arg(long, default_value_t = FIELD_MARGIN)]
    margin: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(clap::Args)]
struct CompareArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Significance threshold.
    #[arg(long, default_value_t = 0.025)]
    alpha: f64,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Budget(String),
    Other(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Config(_) | Error::Parse { .. } | Error::InvalidScenario { .. } | Error::Domain(_) => {
                Failure::Config(msg)
            }
            Error::BudgetExhausted { .. } | Error::PlacementInfeasible { .. } => Failure::Budget(msg),
            _ => Failure::Other(msg),
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Optimize(a) => optimize(a),
        Command::Landscape(a) => landscape(a),
        Command::Field(a) => field(a),
        Command::Compare(a) => compare(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn print_summary(label: &str, s: &Summary) {
    let std = if s.std_defined { format!("{:.6e}", s.std) } else { "n/a".into() };
    println!("{label}: n={} max={:.6e} median={:.6e} mean={:.6e} std={std}", s.count, s.max, s.median, s.mean);
}

fn optimize(a: OptimizeArgs) -> Result<(), Failure> {
    let method: Method = a.method.parse()?;
    let mut config = ExperimentConfig::new(a.scenario, method, a.buoys, a.budget);
    config.n_runs = a.runs;
    config.root_seed = a.seed;
    config.workers = a.workers.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if let Some(sigma) = a.sigma {
        config.method_params.sigma = sigma;
    }
    if let Some(p) = a.de_population {
        config.method_params.de.population = p;
    }
    if let Some(w) = a.de_weight {
        config.method_params.de.weight = w;
    }
    if let Some(c) = a.de_crossover {
        config.method_params.de.crossover_rate = c;
    }
    let records = run_experiment(&config)?;
    write_experiment(&a.out, &records)?;
    let penalized: Vec<f64> = records.iter().map(|r| r.report.penalized_fitness).collect();
    let q: Vec<f64> = records.iter().map(|r| r.q_factor).collect();
    print_summary("penalized_w", &summarize(&penalized)?);
    print_summary("q_factor", &summarize(&q)?);
    let incomplete: Vec<usize> = records.iter().filter(|r| !r.complete).map(|r| r.run_id).collect();
    if !incomplete.is_empty() {
        return Err(Failure::Budget(format!("budget ran out before all buoys were placed in runs {incomplete:?}")));
    }
    Ok(())
}

fn landscape(a: LandscapeArgs) -> Result<(), Failure> {
    let scenario = WaveScenario::resolve(&a.scenario)?;
    let (res, mode) = match a.mode {
        LandscapeMode::Coarse => (COARSE_ANGULAR_RES, SectorMode::Sls),
        LandscapeMode::Fine => (FINE_ANGULAR_RES, SectorMode::Auto),
    };
    let params = WecParameters::default();
    let land =
        build_two_buoy_landscape(&params, &scenario, res, RADIAL_RES, (DEFAULT_MIN_SEPARATION, MAX_SECTOR_RADIUS))?;
    std::fs::write(&a.out, land.to_csv()).map_err(Error::from)?;
    let ext = extract_search_sectors(&land, mode)?;
    println!("best: angle={} deg distance={} m power={:.6e} W", ext.best_angle, ext.best_distance, ext.best_power);
    for s in &ext.sectors {
        println!(
            "sector: angle [{}, {}] deg, distance [{}, {}] m",
            s.angle_range.0, s.angle_range.1, s.radial_range.0, s.radial_range.1
        );
    }
    println!("two-buoy evaluations: {}", land.evaluations);
    Ok(())
}

fn field(a: FieldArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&a.layout).map_err(|e| Error::Io(format!("{}: {e}", a.layout.display())))?;
    let layout = layout_from_csv(&text)?;
    let scenario = WaveScenario::resolve(&a.scenario)?;
    let side = farm_side(layout.len().max(1))?;
    let params = WecParameters::default();
    let field = export_energy_field(&layout, &params, &scenario, side, a.step, a.margin, DEFAULT_MIN_SEPARATION)?;
    std::fs::write(&a.out, field_to_csv(&field)).map_err(Error::from)?;
    println!("nodes: {} evaluated: {}", field.nodes.len(), field.evaluations);
    Ok(())
}

fn compare(a: CompareArgs) -> Result<(), Failure> {
    if !(a.alpha > 0.0 && a.alpha < 1.0) {
        return Err(Failure::Config(format!("alpha must lie in (0, 1), got {}", a.alpha)));
    }
    let fa: Vec<f64> = read_results(&a.a)?.iter().map(|r| r.penalized_w).collect();
    let fb: Vec<f64> = read_results(&a.b)?.iter().map(|r| r.penalized_w).collect();
    print_summary("a", &summarize(&fa)?);
    print_summary("b", &summarize(&fb)?);
    let p_ab = wilcoxon_one_tailed(&fa, &fb)?;
    let p_ba = wilcoxon_one_tailed(&fb, &fa)?;
    println!("p(a > b) = {p_ab:.6}");
    println!("p(b > a) = {p_ba:.6}");
    let verdict = if p_ab < a.alpha {
        "a is significantly better"
    } else if p_ba < a.alpha {
        "b is significantly better"
    } else {
        "no significant difference"
    };
    println!("alpha = {}: {verdict}", a.alpha);
    Ok(())
}
