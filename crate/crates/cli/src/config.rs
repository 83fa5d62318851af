//! Scenario configuration: one JSON document per experiment.

use std::path::PathBuf;

use pmconv_core::ideals::{IdealSpec, IndexSetSpec};
use pmconv_core::pmspace::SpaceSpec;
use pmconv_core::seqlab::{builtin_sequence, Mode, DEFAULT_BUDGET, MIN_SAMPLES};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub name: String,
    pub space: SpaceSpec,
    pub sequence: SequenceSpec,
    #[serde(default)]
    pub ideal: Option<IdealSpec>,
    #[serde(default)]
    pub statistics: Vec<StatisticSpec>,
    pub windows: ScheduleSpec,
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default)]
    pub samples: Option<u64>,
    #[serde(default = "default_budget")]
    pub budget: u64,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Also run sampled mode next to exact mode and report the discrepancy.
    #[serde(default)]
    pub cross_check: bool,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_mode() -> Mode {
    Mode::Exact
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET as u64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub name: String,
    #[serde(default)]
    pub params: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "statistic", rename_all = "kebab-case", deny_unknown_fields)]
pub enum StatisticSpec {
    PreCauchy { t: Vec<f64> },
    AveragedLevySum,
    StrongIst { p: f64, t: Vec<f64> },
    IstarPreCauchy { t: Vec<f64>, witness: IndexSetSpec },
    RealPreCauchy { eps: Vec<f64> },
    StatExceptionalDensity { xi: f64, eps: Vec<f64> },
    Dichotomy { alpha: f64, beta: f64 },
}

impl StatisticSpec {
    pub fn label(&self) -> String {
        match self {
            StatisticSpec::PreCauchy { .. } => "pre-cauchy".into(),
            StatisticSpec::AveragedLevySum => "averaged-levy-sum".into(),
            StatisticSpec::StrongIst { p, .. } => format!("strong-ist-p{p}"),
            StatisticSpec::IstarPreCauchy { .. } => "istar-pre-cauchy".into(),
            StatisticSpec::RealPreCauchy { .. } => "real-pre-cauchy".into(),
            StatisticSpec::StatExceptionalDensity { xi, .. } => format!("stat-exceptional-xi{xi}"),
            StatisticSpec::Dichotomy { .. } => "dichotomy".into(),
        }
    }

    /// Whether the statistic counts quadruples and so honours the mode.
    pub fn uses_quadruples(&self) -> bool {
        matches!(
            self,
            StatisticSpec::PreCauchy { .. }
                | StatisticSpec::AveragedLevySum
                | StatisticSpec::IstarPreCauchy { .. }
                | StatisticSpec::RealPreCauchy { .. }
        )
    }

    fn grid(&self) -> Option<(&'static str, &[f64])> {
        match self {
            StatisticSpec::PreCauchy { t }
            | StatisticSpec::StrongIst { t, .. }
            | StatisticSpec::IstarPreCauchy { t, .. } => Some(("t", t)),
            StatisticSpec::RealPreCauchy { eps }
            | StatisticSpec::StatExceptionalDensity { eps, .. } => Some(("eps", eps)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScheduleSpec {
    List {
        windows: Vec<(u64, u64)>,
    },
    /// `(a!, a!)` for `a = from..=up_to`.
    Factorial {
        #[serde(default = "default_factorial_from")]
        from: u32,
        up_to: u32,
    },
    /// `(s, s)` for each size.
    Diagonal {
        sizes: Vec<u64>,
    },
}

fn default_factorial_from() -> u32 {
    1
}

impl ScheduleSpec {
    pub fn windows(&self) -> Vec<(u64, u64)> {
        match self {
            ScheduleSpec::List { windows } => windows.clone(),
            ScheduleSpec::Factorial { from, up_to } => (*from..=*up_to)
                .map(|a| {
                    let f = (1..=a as u64).product::<u64>();
                    (f, f)
                })
                .collect(),
            ScheduleSpec::Diagonal { sizes } => sizes.iter().map(|&s| (s, s)).collect(),
        }
    }
}

impl ScenarioConfig {
    /// Parses a config, reporting the field path of the first error.
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| CliError::Config {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })
    }

    /// Checks everything that can be checked without running a statistic.
    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |path: &str, message: String| CliError::Config {
            path: path.to_string(),
            message,
        };
        if self.name.is_empty()
            || !self
                .name
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || "-_".contains(c))
        {
            return Err(bad(
                "name",
                "must be nonempty and use only [A-Za-z0-9_-]".into(),
            ));
        }
        self.space
            .build()
            .map_err(|e| bad("space", e.to_string()))?;
        builtin_sequence(&self.sequence.name, &self.sequence.params)
            .map_err(|e| bad("sequence", e.to_string()))?;
        if let Some(ideal) = &self.ideal {
            ideal.model().map_err(|e| bad("ideal", e.to_string()))?;
            ideal
                .threshold()
                .map_err(|e| bad("ideal.threshold", e.to_string()))?;
        }
        if matches!(self.windows, ScheduleSpec::Factorial { up_to, .. } if up_to > 20) {
            return Err(bad("windows.up_to", "factorials above 20! overflow".into()));
        }
        let windows = self.windows.windows();
        if windows.is_empty() {
            return Err(bad("windows", "schedule is empty".into()));
        }
        for (i, w) in windows.iter().enumerate() {
            if w.0 == 0 || w.1 == 0 {
                return Err(bad(
                    &format!("windows[{i}]"),
                    "window sides must be at least 1".into(),
                ));
            }
            if i > 0 && !(windows[i - 1].0 < w.0 && windows[i - 1].1 < w.1) {
                return Err(bad(
                    &format!("windows[{i}]"),
                    format!(
                        "schedule must increase strictly in both coordinates: {:?} then {:?}",
                        windows[i - 1],
                        w
                    ),
                ));
            }
        }
        let mut labels = std::collections::BTreeSet::new();
        for (i, stat) in self.statistics.iter().enumerate() {
            if !labels.insert(stat.label()) {
                return Err(bad(
                    &format!("statistics[{i}]"),
                    format!("duplicate statistic `{}`", stat.label()),
                ));
            }
            if matches!(stat, StatisticSpec::Dichotomy { .. }) && self.ideal.is_none() {
                return Err(bad(
                    &format!("statistics[{i}]"),
                    "dichotomy needs an `ideal`".into(),
                ));
            }
            if let Some((field, grid)) = stat.grid() {
                if grid.is_empty() || grid.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(bad(
                        &format!("statistics[{i}].{field}"),
                        "must be a nonempty list of positive numbers".into(),
                    ));
                }
            }
            if let StatisticSpec::Dichotomy { alpha, beta } = stat {
                if alpha.partial_cmp(beta) != Some(std::cmp::Ordering::Less) {
                    return Err(bad(
                        &format!("statistics[{i}]"),
                        "alpha must be below beta".into(),
                    ));
                }
            }
        }
        let samples_needed = self.mode == Mode::Sampled
            || (self.cross_check && self.statistics.iter().any(|s| s.uses_quadruples()));
        if samples_needed {
            if self.seed.is_none() {
                return Err(bad(
                    "seed",
                    "a seed is required when a statistic may sample".into(),
                ));
            }
            match self.samples {
                Some(n) if n >= MIN_SAMPLES => {}
                _ => {
                    return Err(bad(
                        "samples",
                        format!("at least {MIN_SAMPLES} samples are required"),
                    ))
                }
            }
        }
        Ok(())
    }
}

/// Scenarios shipped with the binary.
pub fn builtin_scenarios() -> Vec<(&'static str, &'static str, ScenarioConfig)> {
    vec![
        (
            "example1",
            "harmonic-block sequence on the simple space with H(x) = 1 - exp(-x), factorial windows",
            example1(),
        ),
        (
            "note31",
            "equilateral counterexample: strong I-statistical indicators toward p and toward q",
            note31(),
        ),
    ]
}

pub fn builtin_scenario(name: &str) -> Option<ScenarioConfig> {
    builtin_scenarios()
        .into_iter()
        .find(|s| s.0 == name)
        .map(|s| s.2)
}

fn example1() -> ScenarioConfig {
    ScenarioConfig::from_json(
        r#"{
            "name": "example1",
            "space": {"space": "simple", "H": {"kind": "exp-simple", "param": 1}},
            "sequence": {"name": "harmonic-block"},
            "ideal": {"ideal": "density-zero"},
            "statistics": [
                {"statistic": "pre-cauchy", "t": [0.25, 0.6, 0.9]},
                {"statistic": "averaged-levy-sum"},
                {"statistic": "real-pre-cauchy", "eps": [0.5, 1.0]}
            ],
            "windows": {"kind": "factorial", "from": 2, "up_to": 4},
            "mode": "exact",
            "seed": 0
        }"#,
    )
    .expect("built-in scenario parses")
}

fn note31() -> ScenarioConfig {
    ScenarioConfig::from_json(
        r#"{
            "name": "note31",
            "space": {"space": "equilateral", "F": {"kind": "exp-simple", "param": 1}},
            "sequence": {"name": "note31", "params": {"p": 0, "q": 1}},
            "ideal": {"ideal": "density-zero"},
            "statistics": [
                {"statistic": "strong-ist", "p": 0, "t": [0.5]},
                {"statistic": "strong-ist", "p": 1, "t": [0.5]},
                {"statistic": "stat-exceptional-density", "xi": 0, "eps": [0.5]}
            ],
            "windows": {"kind": "diagonal", "sizes": [25, 50, 100, 200]},
            "mode": "exact",
            "seed": 0
        }"#,
    )
    .expect("built-in scenario parses")
}
