//! Double sequences and their finite-window convergence diagnostics.
//!
//! Every asymptotic notion (statistical convergence, pre-Cauchy, ideal
//! limits) is replaced by the statistic it is built from, evaluated on a
//! window `[1, m] × [1, n]`. Exact quadruple statistics are integer counts
//! over ordered quadruples `(j, k, p, q)` with `j, p <= m` and `k, q <= n`,
//! diagonal included, normalised by `(mn)²`.

mod builtins;
mod dichotomy;
mod indicators;
mod quad;
mod subseq;

pub use builtins::{builtin_names, builtin_sequence, note31_sets};
pub use dichotomy::{dichotomy_report, DichotomyRecord, DichotomyReport, TrendVerdict};
pub use indicators::{
    averaged_levy_sum, i_stat_cluster_points, istar_pre_cauchy_indicator, pre_cauchy_indicator,
    pringsheim_limit_estimate, real_pre_cauchy_indicator, stat_exceptional_density,
    strong_ist_indicator,
};
pub use quad::{QuadOptions, DEFAULT_BUDGET, MIN_SAMPLES, SAMPLE_BLOCK};
pub use subseq::{extract_convergent_subsequence, subsequence_along};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::pmspace::Point;

/// A total, deterministic rule `(j, k) ↦ x_jk` on ℕ × ℕ (indices from 1).
pub struct DoubleSequence<T> {
    name: String,
    rule: Arc<dyn Fn(u64, u64) -> T + Send + Sync>,
}

impl<T> Clone for DoubleSequence<T> {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            rule: Arc::clone(&self.rule),
        }
    }
}

impl<T> fmt::Debug for DoubleSequence<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DoubleSequence({})", self.name)
    }
}

impl<T: 'static> DoubleSequence<T> {
    pub fn new(
        name: impl Into<String>,
        rule: impl Fn(u64, u64) -> T + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            rule: Arc::new(rule),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn at(&self, j: u64, k: u64) -> T {
        (self.rule)(j, k)
    }

    pub fn map<U: 'static>(&self, f: impl Fn(T) -> U + Send + Sync + 'static) -> DoubleSequence<U> {
        let inner = self.clone();
        DoubleSequence::new(self.name.clone(), move |j, k| f(inner.at(j, k)))
    }
}

impl DoubleSequence<f64> {
    /// The same sequence read as points of a space (real coordinates, or
    /// labels for spaces that only compare points).
    pub fn points(&self) -> DoubleSequence<Point> {
        self.map(Point)
    }
}

/// How a quadruple statistic was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Sampled,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Exact => "exact",
            Mode::Sampled => "sampled",
        })
    }
}

/// One value of a statistic at one window.
///
/// Counting statistics in exact mode carry the exact rational
/// `count / den`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorRecord {
    pub m: u64,
    pub n: u64,
    /// The `t` or `eps` parameter, if the statistic has one.
    pub t_or_eps: Option<f64>,
    pub value: f64,
    pub mode: Mode,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub count: Option<u128>,
    pub den: Option<u128>,
}

impl IndicatorRecord {
    pub(crate) fn exact_ratio(
        m: u64,
        n: u64,
        t_or_eps: Option<f64>,
        count: u128,
        den: u128,
    ) -> Self {
        Self {
            m,
            n,
            t_or_eps,
            value: count as f64 / den as f64,
            mode: Mode::Exact,
            samples: None,
            seed: None,
            count: Some(count),
            den: Some(den),
        }
    }
}

/// A statistic over a schedule of windows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorTrajectory {
    pub statistic: String,
    pub records: Vec<IndicatorRecord>,
}

impl IndicatorTrajectory {
    pub fn new(statistic: impl Into<String>) -> Self {
        Self {
            statistic: statistic.into(),
            records: Vec::new(),
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.value).collect()
    }
}
