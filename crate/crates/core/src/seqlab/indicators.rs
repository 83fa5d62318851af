use rayon::prelude::*;

use super::quad::{classes, count_quadruples, mean_over_quadruples, QuadOptions};
use super::{DoubleSequence, IndicatorRecord, IndicatorTrajectory};
use crate::error::{ensure_positive, Error, Result};
use crate::ideals::{is_negligible, IdealModel, IdealVerdict, IndexSet2D, DEFAULT_THRESHOLD};
use crate::pmspace::{PmSpace, Point};

fn check_window(m: u64, n: u64) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::WindowTooSmall {
            m,
            n,
            reason: "window must be at least (1, 1)",
        });
    }
    Ok(())
}

/// Number of window positions whose value satisfies `hit`.
fn count_positions<V, F>(x: &DoubleSequence<V>, m: u64, n: u64, hit: F) -> u128
where
    V: Copy + Eq + std::hash::Hash + Send + Sync + 'static,
    F: Fn(V) -> bool + Sync,
{
    let c = classes(x, m, n);
    c.values
        .par_iter()
        .zip(c.mult.par_iter())
        .map(|(&v, &k)| if hit(v) { k as u128 } else { 0 })
        .sum()
}

/// `(1/mn) |{(j, k) : x_jk ∉ N_p(t), j <= m, k <= n}|`, exactly.
pub fn strong_ist_indicator<S: PmSpace + ?Sized>(
    space: &S,
    x: &DoubleSequence<Point>,
    p: Point,
    t: f64,
    window: (u64, u64),
) -> Result<IndicatorRecord> {
    ensure_positive("t", t)?;
    let (m, n) = window;
    check_window(m, n)?;
    let outside = count_positions(x, m, n, |y| space.eval(p, y, t) <= 1.0 - t);
    Ok(IndicatorRecord::exact_ratio(
        m,
        n,
        Some(t),
        outside,
        m as u128 * n as u128,
    ))
}

/// `(1/m²n²) |{(j, k, p, q) : (x_jk, x_pq) ∉ 𝔘(t)}|` over ordered
/// quadruples of the window.
pub fn pre_cauchy_indicator<S: PmSpace + ?Sized>(
    space: &S,
    x: &DoubleSequence<Point>,
    t: f64,
    window: (u64, u64),
    opts: &QuadOptions,
) -> Result<IndicatorRecord> {
    ensure_positive("t", t)?;
    count_quadruples(x, window, Some(t), opts, space.is_symmetric(), |a, b| {
        space.eval(a, b, t) <= 1.0 - t
    })
}

/// `S(m, n) = (1/m²n²) Σ d_L(F_{x_jk x_pq}, ε₀)` over ordered quadruples.
pub fn averaged_levy_sum<S: PmSpace + ?Sized>(
    space: &S,
    x: &DoubleSequence<Point>,
    window: (u64, u64),
    opts: &QuadOptions,
) -> Result<IndicatorRecord> {
    mean_over_quadruples(x, window, opts, space.is_symmetric(), |a, b| {
        space.dl_to_eps0(a, b)
    })
}

/// The pre-Cauchy statistic reported only at the windows whose corner
/// `(m, n)` lies in the witness set `M`.
pub fn istar_pre_cauchy_indicator<S: PmSpace + ?Sized>(
    space: &S,
    x: &DoubleSequence<Point>,
    t: f64,
    witness: &IndexSet2D,
    windows: &[(u64, u64)],
    opts: &QuadOptions,
) -> Result<IndicatorTrajectory> {
    if windows.is_empty() {
        return Err(Error::EmptySchedule);
    }
    let mut out = IndicatorTrajectory::new("istar_pre_cauchy");
    for &(m, n) in windows.iter().filter(|&&(m, n)| witness.contains(m, n)) {
        out.records
            .push(pre_cauchy_indicator(space, x, t, (m, n), opts)?);
    }
    if out.records.is_empty() {
        return Err(Error::EmptyTrace);
    }
    Ok(out)
}

/// `(1/m²n²) |{(j, k, p, q) : |x_jk - x_pq| >= eps}|` for a real sequence.
pub fn real_pre_cauchy_indicator(
    x: &DoubleSequence<f64>,
    eps: f64,
    window: (u64, u64),
    opts: &QuadOptions,
) -> Result<IndicatorRecord> {
    ensure_positive("eps", eps)?;
    count_quadruples(&x.points(), window, Some(eps), opts, true, |a, b| {
        (a.0 - b.0).abs() >= eps
    })
}

/// `(1/mn) |{(j, k) : |x_jk - ξ| >= eps, j <= m, k <= n}|`, exactly.
pub fn stat_exceptional_density(
    x: &DoubleSequence<f64>,
    xi: f64,
    eps: f64,
    window: (u64, u64),
) -> Result<IndicatorRecord> {
    ensure_positive("eps", eps)?;
    let (m, n) = window;
    check_window(m, n)?;
    let far = count_positions(&x.points(), m, n, |v| (v.0 - xi).abs() >= eps);
    Ok(IndicatorRecord::exact_ratio(
        m,
        n,
        Some(eps),
        far,
        m as u128 * n as u128,
    ))
}

/// Candidate Pringsheim limit: the corner value `x_mn`, accepted when every
/// entry with `j >= ⌈m/2⌉` and `k >= ⌈n/2⌉` lies within `eps` of it.
pub fn pringsheim_limit_estimate(
    x: &DoubleSequence<f64>,
    window: (u64, u64),
    eps: f64,
) -> Result<Option<f64>> {
    ensure_positive("eps", eps)?;
    let (m, n) = window;
    if m < 4 || n < 4 {
        return Err(Error::WindowTooSmall {
            m,
            n,
            reason: "a Pringsheim estimate needs at least (4, 4)",
        });
    }
    let corner = x.at(m, n);
    let settled = (m.div_ceil(2)..=m)
        .into_par_iter()
        .all(|j| (n.div_ceil(2)..=n).all(|k| (x.at(j, k) - corner).abs() < eps));
    Ok(settled.then_some(corner))
}

/// For each `ξ` on the grid, the verdict for `{(j, k) : |x_jk - ξ| < eps}`;
/// the I-statistical cluster point candidates are those judged not
/// negligible.
pub fn i_stat_cluster_points(
    x: &DoubleSequence<f64>,
    xi_grid: &[f64],
    eps: f64,
    ideal: &IdealModel,
    window: (u64, u64),
) -> Result<Vec<(f64, IdealVerdict)>> {
    ensure_positive("eps", eps)?;
    if xi_grid.is_empty() {
        return Err(Error::BadGrid("xi_grid"));
    }
    xi_grid
        .iter()
        .map(|&xi| {
            let seq = x.clone();
            let near = IndexSet2D::predicate("near", move |j, k| (seq.at(j, k) - xi).abs() < eps);
            Ok((xi, is_negligible(ideal, &near, window, DEFAULT_THRESHOLD)?))
        })
        .collect()
}
