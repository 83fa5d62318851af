use super::{levy_distance, Ddf};
use crate::error::{ensure_positive, Error, Result};

/// Outcome of a finite weak-convergence check.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakConvergenceVerdict {
    pub converges: bool,
    /// Largest `|F_tail(x) - F(x)|` over the probe points.
    pub max_discrepancy: f64,
    /// Lévy distance from the last member to the target.
    pub tail_levy_distance: f64,
    pub probe_points: Vec<f64>,
}

/// Continuity points of `target` used to probe pointwise convergence.
///
/// Midpoints between consecutive jumps plus a uniform grid over
/// `(0, x_hi)`; every probe keeps a distance of at least `min_gap` from each
/// jump of the target.
pub fn probe_points(target: &Ddf, probe_count: usize, min_gap: f64) -> Vec<f64> {
    let jumps = target.jumps();
    let far_jump = jumps.last().copied().unwrap_or(0.0);
    let q = target.quantile(target.sup_finite() - 1e-6);
    let x_hi = (2.0 * far_jump)
        .max(if q.is_finite() { q } else { 0.0 })
        .max(1.0);
    let clear = |x: f64| jumps.iter().all(|j| (x - j).abs() >= min_gap);
    let mut probes: Vec<f64> = jumps
        .windows(2)
        .map(|w| 0.5 * (w[0] + w[1]))
        .filter(|&x| x > 0.0 && clear(x))
        .collect();
    probes.extend(
        (0..probe_count)
            .map(|i| x_hi * (i as f64 + 0.5) / probe_count as f64)
            .filter(|&x| clear(x)),
    );
    probes.sort_by(|a, b| a.total_cmp(b));
    probes.dedup();
    probes
}

/// Finite check of `F_n → F` weakly, judged on the last member of the
/// sequence: converges iff `d_L(F_last, F) < tol` and the pointwise
/// discrepancy at every probe is below `tol`. Probes stay `tol` away from
/// the jumps of the target.
pub fn weakly_converges(
    sequence: &[Ddf],
    target: &Ddf,
    probe_count: usize,
    tol: f64,
) -> Result<WeakConvergenceVerdict> {
    ensure_positive("tol", tol)?;
    if probe_count == 0 {
        return Err(Error::NonPositive {
            name: "probe_count",
            value: 0.0,
        });
    }
    let tail = sequence.last().ok_or(Error::EmptySequence)?;
    let probes = probe_points(target, probe_count, tol);
    let max_discrepancy = probes
        .iter()
        .map(|&x| (tail.eval(x) - target.eval(x)).abs())
        .fold(0.0f64, f64::max);
    let tail_levy_distance = levy_distance(tail, target, (tol * 1e-3).min(1e-6))?;
    Ok(WeakConvergenceVerdict {
        converges: tail_levy_distance < tol && max_discrepancy < tol,
        max_discrepancy,
        tail_levy_distance,
        probe_points: probes,
    })
}
