//! The Lévy distance on Δ⁺.
//!
//! `d_L(F, G)` is the infimum of `h ∈ (0, 1]` such that
//!
//! ```text
//! F(x - h) - h <= G(x) <= F(x + h) + h   and
//! G(x - h) - h <= F(x) <= G(x + h) + h   for every x in (-1/h, 1/h).
//! ```
//!
//! Feasibility is monotone in `h`, so the distance is found by bisection. A
//! feasibility test reduces to four one-sided dominance checks of the form
//! `A(x + a) + h >= B(x + b)`. Every jump of `A` or `B` (shifted) is visited
//! explicitly; on the open cells between jumps both sides are monotone, so
//! `A(left+) + h >= B(right)` certifies the whole cell. Between knots every
//! shape is concave, so a chord of `A` above a tangent of `B` also certifies
//! it; cells that fail both certificates are bisected.

use super::Ddf;
use crate::error::{ensure_positive, Result};

/// Default absolute tolerance for Lévy distances.
pub const DEFAULT_LEVY_TOL: f64 = 1e-9;

const MAX_BISECTIONS: usize = 64;
const MAX_REFINED_CELLS: usize = 4_000_000;

/// Lévy distance between two distance distribution functions, within `tol`.
pub fn levy_distance(f: &Ddf, g: &Ddf, tol: f64) -> Result<f64> {
    ensure_positive("tol", tol)?;
    if f == g {
        return Ok(0.0);
    }
    let slack = 0.5 * tol;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= 0.5 * tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if feasible(f, g, mid, slack) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // feasible(h) => check(h) => feasible(h + slack), so d_L lies in [lo, hi + slack]
    Ok((0.5 * (lo + hi + slack)).min(1.0))
}

/// `d_L(F, ε₀)`, using `d_L(F, ε₀) = inf { h : F(h+) >= 1 - h }`.
pub fn distance_to_eps0(f: &Ddf, tol: f64) -> Result<f64> {
    ensure_positive("tol", tol)?;
    if f.eval_right(0.0) >= 1.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f.eval_right(mid) >= 1.0 - mid {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The four sandwich inequalities at corridor width `h`, each relaxed by `slack`.
pub(crate) fn feasible(f: &Ddf, g: &Ddf, h: f64, slack: f64) -> bool {
    let right_end = 1.0 / h;
    let margin = h + slack;
    dominates(g, 0.0, f, -h, margin, right_end)
        && dominates(f, h, g, 0.0, margin, right_end)
        && dominates(f, 0.0, g, -h, margin, right_end)
        && dominates(g, h, f, 0.0, margin, right_end)
}

/// Checks `a(x + a_shift) + margin >= b(x + b_shift)` for every `x` in
/// `(0, right_end)`. Both functions vanish on `(-∞, 0]`, so nothing to the
/// left of the origin can fail.
fn dominates(a: &Ddf, a_shift: f64, b: &Ddf, b_shift: f64, margin: f64, right_end: f64) -> bool {
    let mut cuts: Vec<f64> = Vec::new();
    // the origins of the shifted functions are kinks
    cuts.extend([0.0, -a_shift, -b_shift]);
    cuts.extend(a.knots().into_iter().map(|k| k - a_shift));
    cuts.extend(b.knots().into_iter().map(|k| k - b_shift));
    cuts.push(right_end);
    cuts.retain(|&c| c >= 0.0 && c <= right_end);
    cuts.sort_by(|x, y| x.total_cmp(y));
    cuts.dedup();

    let lhs = |x: f64| a.eval(x + a_shift) + margin;
    let lhs_right = |x: f64| a.eval_right(x + a_shift) + margin;
    let rhs = |x: f64| b.eval(x + b_shift);

    for &c in &cuts {
        if c > 0.0 && c < right_end && lhs(c) < rhs(c) {
            return false;
        }
    }

    let continuous = a.has_continuous_part() || b.has_continuous_part();
    let mut stack: Vec<(f64, f64)> = cuts.windows(2).map(|w| (w[0], w[1])).collect();
    stack.reverse();
    let mut refined = 0usize;
    while let Some((u, v)) = stack.pop() {
        let mid = 0.5 * (u + v);
        if !continuous {
            // both sides are constant on the open cell; the midpoint avoids
            // rounding in the shifted jump locations
            if mid > u && mid < v && lhs(mid) < rhs(mid) {
                return false;
            }
            continue;
        }
        if lhs_right(u) >= rhs(v) {
            continue;
        }
        // both sides are concave on the cell: the chord of the left side
        // stays above the tangent of the right side at the midpoint
        let (at, slope) = (rhs(mid), b.slope(mid + b_shift));
        if lhs_right(u) >= at + slope * (u - mid) && lhs(v) >= at + slope * (v - mid) {
            continue;
        }
        if mid <= u || mid >= v || v - u <= 1e-13 * v.max(1.0) || refined > MAX_REFINED_CELLS {
            continue;
        }
        if lhs(mid) < rhs(mid) {
            return false;
        }
        refined += 1;
        stack.push((mid, v));
        stack.push((u, mid));
    }
    true
}
