use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::DoubleSequence;
use crate::error::{Error, Result};
use crate::ideals::{is_negligible, IdealModel, IdealVerdict, IndexSet2D, DEFAULT_THRESHOLD};

/// Tail mean below which a density trajectory is said to tend to 0.
pub const TREND_LEVEL: f64 = 0.02;
/// Tail spread above which a trajectory is said to oscillate.
pub const OSCILLATION_LEVEL: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrendVerdict {
    TendsZero,
    TendsOne,
    Oscillates,
    Inconclusive,
}

/// `D_mn(A)`, `D_mn(B)` and `D_mn(A) (1 - D_mn(A))` at one window; the
/// counts are exact and `count_a + count_b = mn`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DichotomyRecord {
    pub m: u64,
    pub n: u64,
    pub count_a: u64,
    pub count_b: u64,
    pub d_a: f64,
    pub d_b: f64,
    pub product: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DichotomyReport {
    pub alpha: f64,
    pub beta: f64,
    pub records: Vec<DichotomyRecord>,
    /// `max - min` of `D_mn(A)` over the tail windows.
    pub oscillation: f64,
    pub tail_mean_a: f64,
    pub verdict: TrendVerdict,
    /// Ideal verdict for `A` at the last window.
    pub a_verdict: IdealVerdict,
}

/// Splits the window values at the gap `(α, β)` into `A = {x_jk <= α}` and
/// its complement `B`, and tracks their window densities over the schedule.
///
/// The tail is the last quarter of the schedule (at least one window). The
/// verdict is `TendsZero` when the tail mean of `D(A)` and `D(A)` at the
/// half-window of the last window are below [`TREND_LEVEL`], `TendsOne`
/// likewise for `D(B)`, `Oscillates` when the tail spread exceeds
/// [`OSCILLATION_LEVEL`], and `Inconclusive` otherwise.
pub fn dichotomy_report(
    x: &DoubleSequence<f64>,
    alpha: f64,
    beta: f64,
    ideal: &IdealModel,
    windows: &[(u64, u64)],
) -> Result<DichotomyReport> {
    if alpha.partial_cmp(&beta) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidGap { alpha, beta });
    }
    if windows.is_empty() {
        return Err(Error::EmptySchedule);
    }
    let m_max = windows.iter().map(|w| w.0).max().unwrap_or(0);
    let n_max = windows.iter().map(|w| w.1).max().unwrap_or(0);
    if windows.iter().any(|w| w.0 == 0 || w.1 == 0) {
        return Err(Error::WindowTooSmall {
            m: m_max,
            n: n_max,
            reason: "window must be at least (1, 1)",
        });
    }
    // one pass over the largest window: prefix counts of A
    let rows: Vec<Vec<u64>> = (1..=m_max)
        .into_par_iter()
        .map(|j| {
            let mut acc = 0;
            let mut prefix = Vec::with_capacity(n_max as usize);
            for k in 1..=n_max {
                let v = x.at(j, k);
                if v > alpha && v < beta {
                    return Err(Error::GapViolation {
                        j,
                        k,
                        value: v,
                        alpha,
                        beta,
                    });
                }
                if v <= alpha {
                    acc += 1;
                }
                prefix.push(acc);
            }
            Ok(prefix)
        })
        .collect::<Result<_>>()?;
    let count_a =
        |m: u64, n: u64| -> u64 { rows[..m as usize].iter().map(|r| r[n as usize - 1]).sum() };

    let records: Vec<DichotomyRecord> = windows
        .iter()
        .map(|&(m, n)| {
            let a = count_a(m, n);
            let b = m * n - a;
            let d_a = a as f64 / (m * n) as f64;
            DichotomyRecord {
                m,
                n,
                count_a: a,
                count_b: b,
                d_a,
                d_b: b as f64 / (m * n) as f64,
                product: d_a * (1.0 - d_a),
            }
        })
        .collect();

    let tail_len = records.len().div_ceil(4).max(1);
    let tail = &records[records.len() - tail_len..];
    let tail_mean_a = tail.iter().map(|r| r.d_a).sum::<f64>() / tail_len as f64;
    let lo = tail.iter().map(|r| r.d_a).fold(f64::INFINITY, f64::min);
    let hi = tail.iter().map(|r| r.d_a).fold(f64::NEG_INFINITY, f64::max);
    let oscillation = hi - lo;

    let &(m_last, n_last) = windows.last().expect("schedule is nonempty");
    let (hm, hn) = (m_last.div_ceil(2), n_last.div_ceil(2));
    let half_a = count_a(hm, hn) as f64 / (hm * hn) as f64;
    let verdict = if tail_mean_a < TREND_LEVEL && half_a < TREND_LEVEL {
        TrendVerdict::TendsZero
    } else if 1.0 - tail_mean_a < TREND_LEVEL && 1.0 - half_a < TREND_LEVEL {
        TrendVerdict::TendsOne
    } else if oscillation > OSCILLATION_LEVEL {
        TrendVerdict::Oscillates
    } else {
        TrendVerdict::Inconclusive
    };

    let seq = x.clone();
    let a_set = IndexSet2D::predicate("A", move |j, k| seq.at(j, k) <= alpha);
    let a_verdict = is_negligible(ideal, &a_set, (m_last, n_last), DEFAULT_THRESHOLD)?;

    Ok(DichotomyReport {
        alpha,
        beta,
        records,
        oscillation,
        tail_mean_a,
        verdict,
        a_verdict,
    })
}
