//! Quadruple statistics over a window, exact or sampled.
//!
//! Exact mode collapses the window to its distinct values ("classes") with
//! multiplicities, so a pair predicate is evaluated once per pair of
//! classes; symmetric predicates are evaluated once per unordered pair.
//! Counts are integers and float sums are reduced in a fixed order, so
//! results do not depend on the number of threads.
//!
//! Sampled mode draws quadruples in fixed blocks of [`SAMPLE_BLOCK`]; block
//! `b` uses its own ChaCha8 stream `b` under the master seed, which again
//! makes the result independent of how blocks are scheduled.

use std::collections::HashMap;
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{DoubleSequence, IndicatorRecord, Mode};
use crate::error::{Error, Result};

/// Largest `(mn)²` accepted in exact mode by default.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;
/// Smallest sample size accepted in sampled mode.
pub const MIN_SAMPLES: u64 = 1000;
/// Quadruples drawn per random stream in sampled mode.
pub const SAMPLE_BLOCK: u64 = 8192;

/// Evaluation settings for quadruple statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadOptions {
    pub mode: Mode,
    /// Exact mode refuses windows with `(mn)²` above this.
    pub budget: u128,
    pub samples: u64,
    pub seed: u64,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self::exact()
    }
}

impl QuadOptions {
    pub fn exact() -> Self {
        Self {
            mode: Mode::Exact,
            budget: DEFAULT_BUDGET,
            samples: 0,
            seed: 0,
        }
    }

    pub fn sampled(samples: u64, seed: u64) -> Self {
        Self {
            mode: Mode::Sampled,
            budget: DEFAULT_BUDGET,
            samples,
            seed,
        }
    }

    pub fn with_budget(self, budget: u128) -> Self {
        Self { budget, ..self }
    }

    fn check(&self, m: u64, n: u64) -> Result<()> {
        if m == 0 || n == 0 {
            return Err(Error::WindowTooSmall {
                m,
                n,
                reason: "window must be at least (1, 1)",
            });
        }
        match self.mode {
            Mode::Exact => {
                let quadruples = (m as u128 * n as u128).pow(2);
                if quadruples > self.budget {
                    return Err(Error::BudgetExceeded {
                        m,
                        n,
                        quadruples,
                        budget: self.budget,
                    });
                }
            }
            Mode::Sampled => {
                if self.samples < MIN_SAMPLES {
                    return Err(Error::TooFewSamples {
                        min: MIN_SAMPLES,
                        got: self.samples,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Distinct values of a window in order of first appearance (dictionary
/// order), with multiplicities.
pub(crate) struct Classes<V> {
    pub values: Vec<V>,
    pub mult: Vec<u64>,
}

pub(crate) fn classes<V>(x: &DoubleSequence<V>, m: u64, n: u64) -> Classes<V>
where
    V: Copy + Eq + Hash + Send + 'static,
{
    let rows: Vec<Vec<V>> = (1..=m)
        .into_par_iter()
        .map(|j| (1..=n).map(|k| x.at(j, k)).collect())
        .collect();
    let mut index: HashMap<V, usize> = HashMap::new();
    let mut values = Vec::new();
    let mut mult = Vec::new();
    for v in rows.into_iter().flatten() {
        let i = *index.entry(v).or_insert_with(|| {
            values.push(v);
            mult.push(0);
            values.len() - 1
        });
        mult[i] += 1;
    }
    Classes { values, mult }
}

/// Number of ordered quadruples whose value pair satisfies `hit`.
pub(crate) fn count_quadruples<V, F>(
    x: &DoubleSequence<V>,
    window: (u64, u64),
    t_or_eps: Option<f64>,
    opts: &QuadOptions,
    symmetric: bool,
    hit: F,
) -> Result<IndicatorRecord>
where
    V: Copy + Eq + Hash + Send + Sync + 'static,
    F: Fn(V, V) -> bool + Sync,
{
    let (m, n) = window;
    opts.check(m, n)?;
    match opts.mode {
        Mode::Exact => {
            let c = classes(x, m, n);
            let count: u128 = (0..c.values.len())
                .into_par_iter()
                .map(|i| {
                    let a = c.values[i];
                    let ma = c.mult[i] as u128;
                    let mut s = 0u128;
                    if symmetric {
                        if hit(a, a) {
                            s += ma * ma;
                        }
                        for j in i + 1..c.values.len() {
                            if hit(a, c.values[j]) {
                                s += 2 * ma * c.mult[j] as u128;
                            }
                        }
                    } else {
                        for j in 0..c.values.len() {
                            if hit(a, c.values[j]) {
                                s += ma * c.mult[j] as u128;
                            }
                        }
                    }
                    s
                })
                .sum();
            let den = (m as u128 * n as u128).pow(2);
            Ok(IndicatorRecord::exact_ratio(m, n, t_or_eps, count, den))
        }
        Mode::Sampled => {
            let hits: u64 = sample_blocks(opts)
                .into_par_iter()
                .map(|(block, size)| {
                    let mut rng = block_rng(opts.seed, block);
                    (0..size)
                        .filter(|_| {
                            let (a, b) = draw_pair(x, m, n, &mut rng);
                            hit(a, b)
                        })
                        .count() as u64
                })
                .sum();
            Ok(sampled_record(
                m,
                n,
                t_or_eps,
                opts,
                hits as f64 / opts.samples as f64,
                Some(hits),
            ))
        }
    }
}

/// Mean of `weight(x_jk, x_pq)` over ordered quadruples.
pub(crate) fn mean_over_quadruples<V, F>(
    x: &DoubleSequence<V>,
    window: (u64, u64),
    opts: &QuadOptions,
    symmetric: bool,
    weight: F,
) -> Result<IndicatorRecord>
where
    V: Copy + Eq + Hash + Send + Sync + 'static,
    F: Fn(V, V) -> f64 + Sync,
{
    let (m, n) = window;
    opts.check(m, n)?;
    match opts.mode {
        Mode::Exact => {
            let c = classes(x, m, n);
            let partial: Vec<f64> = (0..c.values.len())
                .into_par_iter()
                .map(|i| {
                    let a = c.values[i];
                    let ma = c.mult[i] as f64;
                    let mut s = 0.0;
                    if symmetric {
                        s += ma * ma * weight(a, a);
                        for j in i + 1..c.values.len() {
                            s += 2.0 * ma * c.mult[j] as f64 * weight(a, c.values[j]);
                        }
                    } else {
                        for j in 0..c.values.len() {
                            s += ma * c.mult[j] as f64 * weight(a, c.values[j]);
                        }
                    }
                    s
                })
                .collect();
            let total: f64 = partial.iter().sum();
            let den = (m as f64 * n as f64).powi(2);
            Ok(IndicatorRecord {
                m,
                n,
                t_or_eps: None,
                value: total / den,
                mode: Mode::Exact,
                samples: None,
                seed: None,
                count: None,
                den: None,
            })
        }
        Mode::Sampled => {
            let partial: Vec<f64> = sample_blocks(opts)
                .into_par_iter()
                .map(|(block, size)| {
                    let mut rng = block_rng(opts.seed, block);
                    (0..size)
                        .map(|_| {
                            let (a, b) = draw_pair(x, m, n, &mut rng);
                            weight(a, b)
                        })
                        .sum::<f64>()
                })
                .collect();
            let total: f64 = partial.iter().sum();
            Ok(sampled_record(
                m,
                n,
                None,
                opts,
                total / opts.samples as f64,
                None,
            ))
        }
    }
}

fn sample_blocks(opts: &QuadOptions) -> Vec<(u64, u64)> {
    let blocks = opts.samples.div_ceil(SAMPLE_BLOCK);
    (0..blocks)
        .map(|b| (b, SAMPLE_BLOCK.min(opts.samples - b * SAMPLE_BLOCK)))
        .collect()
}

fn block_rng(seed: u64, block: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(block);
    rng
}

fn draw_pair<V: 'static>(x: &DoubleSequence<V>, m: u64, n: u64, rng: &mut ChaCha8Rng) -> (V, V) {
    let j = rng.random_range(1..=m);
    let k = rng.random_range(1..=n);
    let p = rng.random_range(1..=m);
    let q = rng.random_range(1..=n);
    (x.at(j, k), x.at(p, q))
}

fn sampled_record(
    m: u64,
    n: u64,
    t_or_eps: Option<f64>,
    opts: &QuadOptions,
    value: f64,
    hits: Option<u64>,
) -> IndicatorRecord {
    IndicatorRecord {
        m,
        n,
        t_or_eps,
        value,
        mode: Mode::Sampled,
        samples: Some(opts.samples),
        seed: Some(opts.seed),
        count: hits.map(u128::from),
        den: hits.map(|_| u128::from(opts.samples)),
    }
}
