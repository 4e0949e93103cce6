use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

/// Lower edge of the default frequency grid, rad/s.
pub const DEFAULT_OMEGA_MIN: f64 = 0.25;
/// Upper edge of the default frequency grid, rad/s.
pub const DEFAULT_OMEGA_MAX: f64 = 3.0;
pub const DEFAULT_FREQUENCY_COUNT: usize = 50;

const OCCURRENCE_TOLERANCE: f64 = 1e-9;

/// One `(Hs, Tp)` bin of a scatter diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeaState {
    pub hs: f64,
    pub tp: f64,
    pub occurrence: f64,
}

/// A wave direction with its spreading density `weight` (1/rad) and the
/// angular width `width` (rad) it stands for in the quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    pub beta: f64,
    pub weight: f64,
    pub width: f64,
}

/// A quadrature node of the frequency grid; `weight` is the trapezoid weight in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyNode {
    pub omega: f64,
    pub weight: f64,
}

/// Sea states with occurrence probabilities plus the direction and frequency grids.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveScenario {
    pub name: String,
    pub sea_states: Vec<SeaState>,
    pub directions: Vec<Direction>,
    pub frequencies: Vec<FrequencyNode>,
}

/// 50 points uniform over `[0.25, 3.0]` rad/s with trapezoid weights.
pub fn default_frequency_grid() -> Vec<FrequencyNode> {
    let omegas = default_omegas();
    frequency_grid(&omegas).expect("default grid is valid")
}

fn default_omegas() -> Vec<f64> {
    let n = DEFAULT_FREQUENCY_COUNT;
    let step = (DEFAULT_OMEGA_MAX - DEFAULT_OMEGA_MIN) / (n - 1) as f64;
    (0..n).map(|i| DEFAULT_OMEGA_MIN + i as f64 * step).collect()
}

/// Trapezoid weights over strictly increasing `omegas`. A single node gets unit weight.
pub fn frequency_grid(omegas: &[f64]) -> Result<Vec<FrequencyNode>> {
    if omegas.is_empty() {
        return Err(invalid("frequencies", "frequency grid is empty"));
    }
    if omegas.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
        return Err(invalid("frequencies", "frequencies must be positive and finite"));
    }
    if omegas.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("frequencies", "frequency grid must be strictly increasing"));
    }
    let n = omegas.len();
    if n == 1 {
        return Ok(vec![FrequencyNode { omega: omegas[0], weight: 1.0 }]);
    }
    Ok((0..n)
        .map(|i| {
            let lo = omegas[i.saturating_sub(1)];
            let hi = omegas[(i + 1).min(n - 1)];
            FrequencyNode { omega: omegas[i], weight: 0.5 * (hi - lo) }
        })
        .collect())
}

/// Direction quadrature from `(beta_deg, relative_weight)` pairs.
///
/// Evenly spaced directions each stand for one spacing; otherwise each
/// direction covers half the gap to its circular neighbours. Weights are
/// rescaled into a density with `sum(weight * width) = 1`.
pub fn direction_grid(entries: &[(f64, f64)]) -> Result<Vec<Direction>> {
    if entries.is_empty() {
        return Err(invalid("directions", "direction table is empty"));
    }
    let mut dirs: Vec<(f64, f64)> = Vec::with_capacity(entries.len());
    for &(deg, w) in entries {
        if !deg.is_finite() || !w.is_finite() || w < 0.0 {
            return Err(invalid("directions", "directions need finite angles and non-negative weights"));
        }
        dirs.push((deg.to_radians().rem_euclid(2.0 * PI), w));
    }
    dirs.sort_by(|a, b| a.0.total_cmp(&b.0));
    if dirs.windows(2).any(|w| w[1].0 - w[0].0 < 1e-12) {
        return Err(invalid("directions", "duplicate wave direction"));
    }
    let n = dirs.len();
    let widths: Vec<f64> = if n == 1 {
        vec![1.0]
    } else {
        let gaps: Vec<f64> = dirs.windows(2).map(|w| w[1].0 - w[0].0).collect();
        let uniform = gaps.iter().all(|g| (g - gaps[0]).abs() <= 1e-9);
        if uniform {
            vec![gaps[0]; n]
        } else {
            (0..n)
                .map(|i| {
                    let next = (dirs[(i + 1) % n].0 - dirs[i].0).rem_euclid(2.0 * PI);
                    let prev = (dirs[i].0 - dirs[(i + n - 1) % n].0).rem_euclid(2.0 * PI);
                    0.5 * (next + prev)
                })
                .collect()
        }
    };
    let mass: f64 = dirs.iter().zip(&widths).map(|(d, w)| d.1 * w).sum();
    if !(mass > 0.0) {
        return Err(invalid("directions", "direction weights sum to zero"));
    }
    Ok(dirs.iter().zip(widths).map(|(&(beta, w), width)| Direction { beta, weight: w / mass, width }).collect())
}

fn invalid(field: &str, message: &str) -> Error {
    Error::InvalidScenario { field: field.into(), message: message.into() }
}

impl WaveScenario {
    /// Builds a scenario, renormalizing occurrence probabilities when needed.
    ///
    /// Returns the scenario together with any normalization warnings.
    pub fn build(
        name: impl Into<String>,
        sea_states: Vec<SeaState>,
        directions_deg: &[(f64, f64)],
        omegas: &[f64],
    ) -> Result<(Self, Vec<String>)> {
        let mut warnings = Vec::new();
        if sea_states.is_empty() {
            return Err(invalid("seastates", "sea-state table is empty"));
        }
        for s in &sea_states {
            if !(s.hs > 0.0 && s.hs.is_finite()) {
                return Err(invalid("Hs", "significant wave height must be positive"));
            }
            if !(s.tp > 0.0 && s.tp.is_finite()) {
                return Err(invalid("Tp", "peak period must be positive"));
            }
            if !(0.0..=1.0).contains(&s.occurrence) {
                return Err(invalid("O", "occurrence probability must lie in [0, 1]"));
            }
        }
        let total: f64 = sea_states.iter().map(|s| s.occurrence).sum();
        if !(total > 0.0) {
            return Err(invalid("O", "occurrence probabilities sum to zero"));
        }
        let sea_states = if (total - 1.0).abs() > OCCURRENCE_TOLERANCE {
            warnings.push(format!("occurrence probabilities sum to {total}; renormalized to 1"));
            sea_states.into_iter().map(|s| SeaState { occurrence: s.occurrence / total, ..s }).collect()
        } else {
            sea_states
        };
        let scenario = WaveScenario {
            name: name.into(),
            sea_states,
            directions: direction_grid(directions_deg)?,
            frequencies: frequency_grid(omegas)?,
        };
        Ok((scenario, warnings))
    }

    /// Like [`WaveScenario::build`], logging warnings instead of returning them.
    pub fn new(
        name: impl Into<String>,
        sea_states: Vec<SeaState>,
        directions_deg: &[(f64, f64)],
        omegas: &[f64],
    ) -> Result<Self> {
        let (scenario, warnings) = Self::build(name, sea_states, directions_deg, omegas)?;
        for w in warnings {
            log::warn!("{w}");
        }
        Ok(scenario)
    }

    /// Single sea state (Hs = 2 m, Tp = 9 s), seven uniform directions over
    /// `[0, 180)` degrees and the default frequency grid.
    pub fn simplified() -> Self {
        let dirs: Vec<(f64, f64)> = (0..7).map(|i| (i as f64 * 180.0 / 7.0, 1.0)).collect();
        let sea = vec![SeaState { hs: 2.0, tp: 9.0, occurrence: 1.0 }];
        Self::new("simplified", sea, &dirs, &default_omegas()).expect("simplified scenario is valid")
    }

    /// A single regular direction `beta_deg` with the default frequency grid.
    pub fn unidirectional(name: &str, hs: f64, tp: f64, beta_deg: f64) -> Result<Self> {
        Self::new(name, vec![SeaState { hs, tp, occurrence: 1.0 }], &[(beta_deg, 1.0)], &default_omegas())
    }

    /// Built-in scenario by name: `simplified`, `sydney`, `perth`, `adelaide` or `tasmania`.
    pub fn builtin(name: &str) -> Result<Self> {
        let text = match name {
            "simplified" => return Ok(Self::simplified()),
            "sydney" => include_str!("../../scenarios/sydney.csv"),
            "perth" => include_str!("../../scenarios/perth.csv"),
            "adelaide" => include_str!("../../scenarios/adelaide.csv"),
            "tasmania" => include_str!("../../scenarios/tasmania.csv"),
            other => return Err(Error::Config(format!("unknown built-in scenario `{other}`"))),
        };
        parse_scenario(text, name).map(|(s, _)| s)
    }

    pub fn builtin_names() -> &'static [&'static str] {
        &["simplified", "sydney", "perth", "adelaide", "tasmania"]
    }

    /// Loads a built-in name or a scenario file path.
    pub fn resolve(name_or_path: &str) -> Result<Self> {
        if Self::builtin_names().contains(&name_or_path) {
            Self::builtin(name_or_path)
        } else {
            load_scenario(name_or_path).map_err(|e| match e {
                Error::Io(msg) => {
                    Error::Config(format!("scenario `{name_or_path}` is neither built in nor readable: {msg}"))
                }
                other => other,
            })
        }
    }

    /// Renders the scenario in the scenario file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# scenario: {}", self.name);
        out.push_str("[seastates]\nHs,Tp,O\n");
        for s in &self.sea_states {
            let _ = writeln!(out, "{},{},{}", s.hs, s.tp, s.occurrence);
        }
        out.push_str("\n[directions]\nbeta_deg,weight\n");
        for d in &self.directions {
            let _ = writeln!(out, "{},{}", d.beta.to_degrees(), d.weight);
        }
        out.push_str("\n[frequencies]\nomega\n");
        for f in &self.frequencies {
            let _ = writeln!(out, "{}", f.omega);
        }
        out
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    SeaStates,
    Directions,
    Frequencies,
}

/// Parses the scenario file format; returns the scenario and normalization warnings.
///
/// ```text
/// # comment
/// [seastates]
/// Hs,Tp,O
/// 2.0,9.0,1.0
/// [directions]
/// beta_deg,weight
/// 90,1
/// [frequencies]
/// omega
/// 0.5
/// ```
///
/// A missing `[frequencies]` section selects the default grid.
pub fn parse_scenario(text: &str, default_name: &str) -> Result<(WaveScenario, Vec<String>)> {
    let mut name = default_name.to_string();
    let mut section = Section::None;
    let mut seen_freq = false;
    let mut sea = Vec::new();
    let mut dirs = Vec::new();
    let mut omegas = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(n) = rest.trim().strip_prefix("scenario:") {
                name = n.trim().to_string();
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            section = match line.to_ascii_lowercase().as_str() {
                "[seastates]" => Section::SeaStates,
                "[directions]" => Section::Directions,
                "[frequencies]" => {
                    seen_freq = true;
                    Section::Frequencies
                }
                _ => return Err(Error::Parse { line: line_no, message: format!("unknown section {line}") }),
            };
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        // Column header rows start with a non-numeric token.
        if fields[0].parse::<f64>().is_err() && fields[0].chars().next().is_some_and(|c| c.is_ascii_alphabetic()) {
            continue;
        }
        let nums = fields
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
        let want = match section {
            Section::None => return Err(Error::Parse { line: line_no, message: "data before any section".into() }),
            Section::SeaStates => 3,
            Section::Directions => 2,
            Section::Frequencies => 1,
        };
        if nums.len() != want {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected {want} fields, found {}", nums.len()),
            });
        }
        match section {
            Section::SeaStates => sea.push(SeaState { hs: nums[0], tp: nums[1], occurrence: nums[2] }),
            Section::Directions => dirs.push((nums[0], nums[1])),
            Section::Frequencies => omegas.push(nums[0]),
            Section::None => unreachable!(),
        }
    }
    if !seen_freq {
        omegas = default_omegas();
    }
    WaveScenario::build(name, sea, &dirs, &omegas)
}

/// Reads a scenario file; normalization warnings are logged.
pub fn load_scenario(path: impl AsRef<Path>) -> Result<WaveScenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("scenario");
    let (scenario, warnings) = parse_scenario(&text, stem)?;
    for w in warnings {
        log::warn!("{}: {w}", path.display());
    }
    Ok(scenario)
}
