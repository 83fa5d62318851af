//! Executes a scenario and writes its trajectories and manifest.

use std::path::{Path, PathBuf};
use std::time::Instant;

use pmconv_core::ideals::IdealModel;
use pmconv_core::pmspace::PmSpace;
use pmconv_core::seqlab::{
    averaged_levy_sum, builtin_sequence, dichotomy_report, istar_pre_cauchy_indicator,
    pre_cauchy_indicator, real_pre_cauchy_indicator, stat_exceptional_density,
    strong_ist_indicator, IndicatorRecord, Mode, QuadOptions,
};
use pmconv_core::{DoubleSequence, Point};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{ScenarioConfig, StatisticSpec};
use crate::error::CliError;
use crate::output::{sha256_hex, to_csv, to_jsonl, write_atomic};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub scenario: String,
    pub library_version: String,
    /// SHA-256 of the effective config with `output` cleared.
    pub config_sha256: String,
    pub effective_config: ScenarioConfig,
    pub windows: Vec<(u64, u64)>,
    pub statistics: Vec<StatisticEntry>,
    pub cross_check: Option<CrossCheck>,
    pub total_runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticEntry {
    pub statistic: String,
    pub csv: String,
    pub jsonl: String,
    pub csv_sha256: String,
    pub jsonl_sha256: String,
    pub rows: usize,
    pub runtime_ms: f64,
    pub summary: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheck {
    /// True when any sampled value lies more than three standard errors
    /// from the exact one.
    pub breach: bool,
    pub records: Vec<CrossCheckRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossCheckRecord {
    pub statistic: String,
    pub m: u64,
    pub n: u64,
    pub t_or_eps: Option<f64>,
    pub exact: f64,
    pub sampled: f64,
    pub discrepancy: f64,
    pub sigma: f64,
    pub breach: bool,
}

struct Context {
    space: Box<dyn PmSpace>,
    real: DoubleSequence<f64>,
    points: DoubleSequence<Point>,
    ideal: Option<(IdealModel, f64)>,
    windows: Vec<(u64, u64)>,
}

struct Computed {
    entry: StatisticEntry,
    checks: Vec<CrossCheckRecord>,
}

/// Validates `config`, runs every statistic and writes
/// `<out>/<scenario>_<statistic>.{csv,jsonl}` followed by
/// `<out>/<scenario>_manifest.json`.
pub fn run(config: &ScenarioConfig, out_dir: &Path) -> Result<RunManifest, CliError> {
    config.validate()?;
    let start = Instant::now();
    let config_err = |path: &str, e: pmconv_core::Error| CliError::Config {
        path: path.into(),
        message: e.to_string(),
    };
    let real = builtin_sequence(&config.sequence.name, &config.sequence.params)
        .map_err(|e| config_err("sequence", e))?;
    let ideal = match &config.ideal {
        Some(spec) => Some((
            spec.model().map_err(|e| config_err("ideal", e))?,
            spec.threshold()
                .map_err(|e| config_err("ideal.threshold", e))?,
        )),
        None => None,
    };
    let ctx = Context {
        space: config.space.build().map_err(|e| config_err("space", e))?,
        points: real.points(),
        real,
        ideal,
        windows: config.windows.windows(),
    };
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;

    let computed: Vec<Computed> = config
        .statistics
        .par_iter()
        .map(|stat| run_statistic(config, &ctx, stat, out_dir))
        .collect::<Result<_, _>>()?;

    let mut effective = config.clone();
    effective.output = None;
    let config_sha256 = sha256_hex(&serde_json::to_vec(&effective).expect("config serializes"));
    effective.output = Some(out_dir.to_path_buf());

    let cross_check = config.cross_check.then(|| {
        let records: Vec<CrossCheckRecord> =
            computed.iter().flat_map(|c| c.checks.clone()).collect();
        CrossCheck {
            breach: records.iter().any(|r| r.breach),
            records,
        }
    });
    let manifest = RunManifest {
        scenario: config.name.clone(),
        library_version: pmconv_core::VERSION.to_string(),
        config_sha256,
        effective_config: effective,
        windows: ctx.windows.clone(),
        statistics: computed.into_iter().map(|c| c.entry).collect(),
        cross_check,
        total_runtime_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    write_atomic(&manifest_path(out_dir, &config.name), text.as_bytes())?;
    Ok(manifest)
}

pub fn manifest_path(out_dir: &Path, scenario: &str) -> PathBuf {
    out_dir.join(format!("{scenario}_manifest.json"))
}

fn quad_options(config: &ScenarioConfig, mode: Mode) -> QuadOptions {
    match mode {
        Mode::Exact => QuadOptions::exact().with_budget(config.budget as u128),
        Mode::Sampled => QuadOptions::sampled(
            config.samples.expect("validated"),
            config.seed.expect("validated"),
        ),
    }
}

fn run_statistic(
    config: &ScenarioConfig,
    ctx: &Context,
    stat: &StatisticSpec,
    out_dir: &Path,
) -> Result<Computed, CliError> {
    let label = stat.label();
    let start = Instant::now();
    let (records, summary) = compute(ctx, stat, &quad_options(config, config.mode))
        .map_err(|e| CliError::from_core(&label, e))?;

    let mut checks = Vec::new();
    if config.cross_check && stat.uses_quadruples() {
        let other = match config.mode {
            Mode::Exact => Mode::Sampled,
            Mode::Sampled => Mode::Exact,
        };
        let (alt, _) = compute(ctx, stat, &quad_options(config, other))
            .map_err(|e| CliError::from_core(&label, e))?;
        for (a, b) in records.iter().zip(&alt) {
            let (exact, sampled) = if config.mode == Mode::Exact {
                (a, b)
            } else {
                (b, a)
            };
            checks.push(cross_check_record(&label, exact, sampled));
        }
    }
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;

    let csv_name = format!("{}_{label}.csv", config.name);
    let jsonl_name = format!("{}_{label}.jsonl", config.name);
    let csv = to_csv(&config.name, &label, &records);
    let jsonl = to_jsonl(&config.name, &label, &records);
    write_atomic(&out_dir.join(&csv_name), csv.as_bytes())?;
    write_atomic(&out_dir.join(&jsonl_name), jsonl.as_bytes())?;
    Ok(Computed {
        entry: StatisticEntry {
            statistic: label,
            csv: csv_name,
            jsonl: jsonl_name,
            csv_sha256: sha256_hex(csv.as_bytes()),
            jsonl_sha256: sha256_hex(jsonl.as_bytes()),
            rows: records.len(),
            runtime_ms,
            summary,
        },
        checks,
    })
}

fn cross_check_record(
    label: &str,
    exact: &IndicatorRecord,
    sampled: &IndicatorRecord,
) -> CrossCheckRecord {
    let n = sampled.samples.unwrap_or(1).max(1) as f64;
    // counting statistics are Bernoulli means; other statistics are means
    // of values in [0, 1], whose standard deviation is at most 1/2
    let sd = if exact.count.is_some() {
        (exact.value * (1.0 - exact.value)).max(0.0).sqrt()
    } else {
        0.5
    };
    let sigma = sd / n.sqrt();
    let discrepancy = (sampled.value - exact.value).abs();
    CrossCheckRecord {
        statistic: label.to_string(),
        m: exact.m,
        n: exact.n,
        t_or_eps: exact.t_or_eps,
        exact: exact.value,
        sampled: sampled.value,
        discrepancy,
        sigma,
        breach: discrepancy > 3.0 * sigma,
    }
}

type Output = (Vec<IndicatorRecord>, Option<Value>);

/// Records ordered by window, then by `t` or `eps`.
fn compute(ctx: &Context, stat: &StatisticSpec, opts: &QuadOptions) -> pmconv_core::Result<Output> {
    let space = &*ctx.space;
    let per_window =
        |grid: &[f64], f: &dyn Fn((u64, u64), f64) -> pmconv_core::Result<IndicatorRecord>| {
            let mut out = Vec::with_capacity(ctx.windows.len() * grid.len());
            for &w in &ctx.windows {
                for &t in grid {
                    out.push(f(w, t)?);
                }
            }
            Ok::<_, pmconv_core::Error>(out)
        };
    Ok(match stat {
        StatisticSpec::PreCauchy { t } => (
            per_window(t, &|w, t| {
                pre_cauchy_indicator(space, &ctx.points, t, w, opts)
            })?,
            None,
        ),
        StatisticSpec::AveragedLevySum => (
            ctx.windows
                .iter()
                .map(|&w| averaged_levy_sum(space, &ctx.points, w, opts))
                .collect::<pmconv_core::Result<_>>()?,
            None,
        ),
        StatisticSpec::StrongIst { p, t } => (
            per_window(t, &|w, t| {
                strong_ist_indicator(space, &ctx.points, Point(*p), t, w)
            })?,
            None,
        ),
        StatisticSpec::IstarPreCauchy { t, witness } => {
            let witness = witness.build();
            let mut trajectories = Vec::with_capacity(t.len());
            for &t in t {
                trajectories.push(istar_pre_cauchy_indicator(
                    space,
                    &ctx.points,
                    t,
                    &witness,
                    &ctx.windows,
                    opts,
                )?);
            }
            // interleave so records stay ordered by window
            let len = trajectories[0].records.len();
            let records = (0..len)
                .flat_map(|i| trajectories.iter().map(move |tr| tr.records[i].clone()))
                .collect();
            (records, None)
        }
        StatisticSpec::RealPreCauchy { eps } => (
            per_window(eps, &|w, e| {
                real_pre_cauchy_indicator(&ctx.real, e, w, opts)
            })?,
            None,
        ),
        StatisticSpec::StatExceptionalDensity { xi, eps } => (
            per_window(eps, &|w, e| stat_exceptional_density(&ctx.real, *xi, e, w))?,
            None,
        ),
        StatisticSpec::Dichotomy { alpha, beta } => {
            let (ideal, _) = ctx.ideal.as_ref().expect("validated");
            let report = dichotomy_report(&ctx.real, *alpha, *beta, ideal, &ctx.windows)?;
            let records = report
                .records
                .iter()
                .map(|r| IndicatorRecord {
                    m: r.m,
                    n: r.n,
                    t_or_eps: None,
                    value: r.d_a,
                    mode: Mode::Exact,
                    samples: None,
                    seed: None,
                    count: Some(r.count_a as u128),
                    den: Some(r.m as u128 * r.n as u128),
                })
                .collect();
            let summary = json!({
                "alpha": report.alpha,
                "beta": report.beta,
                "verdict": report.verdict,
                "oscillation": report.oscillation,
                "tail_mean_a": report.tail_mean_a,
                "a_verdict": report.a_verdict,
            });
            (records, Some(summary))
        }
    })
}
