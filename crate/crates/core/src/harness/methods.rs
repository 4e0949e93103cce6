use std::fmt;
use std::str::FromStr;

use crate::baselines::{run_de, run_one_plus_one_ea, run_random_search, DeConfig, MutationSchedule};
use crate::error::{Error, Result};
use crate::fitness::Evaluator;
use crate::heuristics::{run_isls, run_isls2, run_sls, HeuristicConfig, Refiner};
use crate::landscape::SectorExtraction;
use crate::search::SearchOutcome;

/// Every optimizer the harness can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    RandomSearch,
    EaSigma,
    EaUniform,
    EaLinear,
    EaOneFifth,
    DifferentialEvolution,
    Sls,
    SlsNm,
    Isls,
    IslsNm,
    Isls2(Refiner),
}

/// Which search sectors a method needs from the landscape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GuideKind {
    None,
    /// Coarse landscape, mirrored sector pair.
    Sls,
    /// Fine landscape, single sector.
    Auto,
}

const NAMES: [(&str, Method); 15] = [
    ("rs", Method::RandomSearch),
    ("ea-sigma", Method::EaSigma),
    ("ea-uniform", Method::EaUniform),
    ("ea-linear", Method::EaLinear),
    ("ea-onefifth", Method::EaOneFifth),
    ("de", Method::DifferentialEvolution),
    ("sls", Method::Sls),
    ("sls-nm", Method::SlsNm),
    ("isls", Method::Isls),
    ("isls-nm", Method::IslsNm),
    ("isls2-as", Method::Isls2(Refiner::ActiveSet)),
    ("isls2-sqp", Method::Isls2(Refiner::Sqp)),
    ("isls2-f", Method::Isls2(Refiner::Fast)),
    ("isls2-nm", Method::Isls2(Refiner::NelderMead)),
    ("isls2-ip", Method::Isls2(Refiner::InteriorPoint)),
];

impl Method {
    pub fn names() -> impl Iterator<Item = &'static str> {
        NAMES.iter().map(|(n, _)| *n)
    }

    pub fn guide_kind(self) -> GuideKind {
        match self {
            Method::Sls | Method::SlsNm => GuideKind::Sls,
            Method::Isls | Method::IslsNm | Method::Isls2(_) => GuideKind::Auto,
            _ => GuideKind::None,
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.to_ascii_lowercase();
        NAMES.iter().find(|(n, _)| *n == key).map(|(_, m)| *m).ok_or_else(|| {
            Error::Config(format!("unknown method `{s}` (known: {})", Method::names().collect::<Vec<_>>().join(", ")))
        })
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = NAMES.iter().find(|(_, m)| m == self).map(|(n, _)| *n).unwrap_or("isls2-none");
        f.write_str(name)
    }
}

/// Tunables for the methods that have any.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodParams {
    pub sigma: f64,
    pub uniform_step: f64,
    pub linear_decay: (f64, f64),
    pub de: DeConfig,
}

impl Default for MethodParams {
    fn default() -> Self {
        Self { sigma: 10.0, uniform_step: 30.0, linear_decay: (30.0, 1.0), de: DeConfig::default() }
    }
}

/// Runs one seeded optimization with `evaluator`'s budget.
pub fn run_method(
    method: Method,
    params: &MethodParams,
    n_buoys: usize,
    evaluator: &Evaluator<'_>,
    guide: Option<&SectorExtraction>,
    seed: u64,
) -> Result<SearchOutcome> {
    let need_guide = || guide.ok_or_else(|| Error::Config(format!("method `{method}` needs search sectors")));
    match method {
        Method::RandomSearch => run_random_search(n_buoys, evaluator, seed),
        Method::EaSigma => {
            run_one_plus_one_ea(n_buoys, MutationSchedule::FixedSigma { sigma: params.sigma }, evaluator, seed)
        }
        Method::EaUniform => {
            run_one_plus_one_ea(n_buoys, MutationSchedule::UniformStep { s: params.uniform_step }, evaluator, seed)
        }
        Method::EaLinear => {
            let (start, end) = params.linear_decay;
            run_one_plus_one_ea(n_buoys, MutationSchedule::LinearDecay { start, end }, evaluator, seed)
        }
        Method::EaOneFifth => run_one_plus_one_ea(n_buoys, MutationSchedule::one_fifth(params.sigma), evaluator, seed),
        Method::DifferentialEvolution => run_de(n_buoys, &params.de, evaluator, seed),
        Method::Sls => run_sls(&HeuristicConfig::sls(n_buoys), evaluator, need_guide()?, seed),
        Method::SlsNm => run_sls(&HeuristicConfig::sls_nm(n_buoys), evaluator, need_guide()?, seed),
        Method::Isls => run_isls(&HeuristicConfig::isls(n_buoys), evaluator, need_guide()?, seed),
        Method::IslsNm => {
            run_isls2(&HeuristicConfig::isls2(n_buoys, Refiner::NelderMead), evaluator, need_guide()?, seed)
        }
        Method::Isls2(refiner) => run_isls2(&HeuristicConfig::isls2(n_buoys, refiner), evaluator, need_guide()?, seed),
    }
}
