//! Distance distribution functions.
//!
//! A distance distribution function (d.d.f.) is a nondecreasing function on
//! `[0, ∞]` that vanishes at `0`, equals `1` at `∞` and is left-continuous on
//! `(0, ∞)`. Values of `F(x)` are read as "the probability that the distance
//! is less than `x`".
//!
//! [`Ddf`] keeps either a closed form (unit step, simple exponential) or a
//! breakpoint table, and finite mixtures of those. Closed forms are
//! evaluated exactly; jump locations are always explicit so the Lévy
//! feasibility check can visit them.

mod json;
mod levy;
mod tau;
mod weak;

pub use levy::{distance_to_eps0, levy_distance, DEFAULT_LEVY_TOL};
pub use tau::{tau_m, tau_m_at, TAU_TAIL_MASS};
pub use weak::{probe_points, weakly_converges, WeakConvergenceVerdict};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interpolation between breakpoints of a [`Ddf::table`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    /// Left-continuous steps: `F(x)` is the value of the last breakpoint
    /// strictly left of `x`.
    Step,
    /// Linear interpolation through the breakpoints, starting from `(0, 0)`.
    Linear,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    /// Jump from 0 to 1 right after `p`; `p` may be `+∞`.
    UnitStep(f64),
    /// `1 - exp(-x / c)`.
    ExpSimple(f64),
    Table {
        points: Vec<(f64, f64)>,
        interp: Interp,
    },
    Mixture(Vec<(f64, Ddf)>),
}

/// A distance distribution function, an element of Δ⁺.
#[derive(Debug, Clone, PartialEq)]
pub struct Ddf {
    shape: Shape,
}

/// Which representation a [`Ddf`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DdfKind {
    UnitStep,
    ExpSimple,
    Table,
    Mixture,
}

impl Ddf {
    /// The unit step ε_p: `0` on `[0, p]`, `1` on `(p, ∞]`.
    pub fn unit_step(p: f64) -> Result<Self> {
        if p.is_nan() || p < 0.0 {
            return Err(Error::InvalidDdf(format!(
                "unit step location must be >= 0, got {p}"
            )));
        }
        Ok(Self {
            shape: Shape::UnitStep(p),
        })
    }

    /// ε₀, the distribution of a zero distance.
    pub fn eps0() -> Self {
        Self {
            shape: Shape::UnitStep(0.0),
        }
    }

    /// ε_∞, zero at every finite abscissa.
    pub fn eps_inf() -> Self {
        Self {
            shape: Shape::UnitStep(f64::INFINITY),
        }
    }

    /// `t ↦ 1 - exp(-t / c)`.
    pub fn exp_simple(c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidDdf(format!(
                "exp-simple scale must be positive and finite, got {c}"
            )));
        }
        Ok(Self {
            shape: Shape::ExpSimple(c),
        })
    }

    /// Breakpoint table. Abscissae must be finite, nonnegative and strictly
    /// increasing; values must lie in `[0, 1]` and be nondecreasing. A final
    /// value below 1 leaves the remaining mass at `∞`.
    pub fn table(points: Vec<(f64, f64)>, interp: Interp) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidDdf("table has no breakpoints".into()));
        }
        let mut prev: Option<(f64, f64)> = None;
        for &(x, v) in &points {
            if !(x.is_finite() && x >= 0.0) {
                return Err(Error::InvalidDdf(format!(
                    "breakpoint abscissa {x} is not a finite nonnegative number"
                )));
            }
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidDdf(format!(
                    "breakpoint value {v} is outside [0, 1]"
                )));
            }
            if let Some((px, pv)) = prev {
                if x <= px {
                    return Err(Error::InvalidDdf(format!(
                        "breakpoints not strictly increasing at x = {x}"
                    )));
                }
                if v < pv {
                    return Err(Error::InvalidDdf(format!(
                        "values decrease at x = {x} ({pv} -> {v})"
                    )));
                }
            }
            prev = Some((x, v));
        }
        if interp == Interp::Linear && points[0].0 == 0.0 && points[0].1 != 0.0 {
            return Err(Error::InvalidDdf(
                "linear table must start at value 0 when its first abscissa is 0".into(),
            ));
        }
        Ok(Self {
            shape: Shape::Table { points, interp },
        })
    }

    /// Convex combination `Σ wᵢ Fᵢ`. Weights must be nonnegative and sum to 1
    /// (within 1e-12; they are renormalised).
    pub fn mixture(components: Vec<(f64, Ddf)>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidDdf("mixture has no components".into()));
        }
        let total: f64 = components.iter().map(|(w, _)| *w).sum();
        if components
            .iter()
            .any(|(w, _)| !(*w >= 0.0 && w.is_finite()))
        {
            return Err(Error::InvalidDdf("mixture weights must be >= 0".into()));
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDdf(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        let components = components
            .into_iter()
            .filter(|(w, _)| *w > 0.0)
            .map(|(w, f)| (w / total, f))
            .collect();
        Ok(Self {
            shape: Shape::Mixture(components),
        })
    }

    pub fn kind(&self) -> DdfKind {
        match self.shape {
            Shape::UnitStep(_) => DdfKind::UnitStep,
            Shape::ExpSimple(_) => DdfKind::ExpSimple,
            Shape::Table { .. } => DdfKind::Table,
            Shape::Mixture(_) => DdfKind::Mixture,
        }
    }

    /// Location of the jump for a unit step, scale for exp-simple.
    pub fn param(&self) -> Option<f64> {
        match self.shape {
            Shape::UnitStep(p) | Shape::ExpSimple(p) => Some(p),
            _ => None,
        }
    }

    pub fn is_eps0(&self) -> bool {
        match &self.shape {
            Shape::UnitStep(p) => *p == 0.0,
            _ => self.eval_right(0.0) >= 1.0,
        }
    }

    pub fn is_eps_inf(&self) -> bool {
        self.sup_finite() <= 0.0
    }

    /// Left-continuous evaluation on the extended half-line. Negative
    /// abscissae evaluate to 0 (the function is extended by 0 to the left).
    pub fn eval(&self, x: f64) -> f64 {
        if x.is_nan() || x <= 0.0 {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        self.eval_finite(x, false)
    }

    /// Right limit `F(x+)`.
    pub fn eval_right(&self, x: f64) -> f64 {
        if x.is_nan() || x < 0.0 {
            return 0.0;
        }
        if x == f64::INFINITY {
            return 1.0;
        }
        self.eval_finite(x, true)
    }

    fn eval_finite(&self, x: f64, right: bool) -> f64 {
        match &self.shape {
            Shape::UnitStep(p) => {
                let above = if right { x >= *p } else { x > *p };
                if above && p.is_finite() {
                    1.0
                } else {
                    0.0
                }
            }
            Shape::ExpSimple(c) => -(-x / c).exp_m1(),
            Shape::Table { points, interp } => match interp {
                Interp::Step => {
                    // number of breakpoints strictly left of x (or at/left of x for the right limit)
                    let idx = if right {
                        points.partition_point(|&(px, _)| px <= x)
                    } else {
                        points.partition_point(|&(px, _)| px < x)
                    };
                    if idx == 0 {
                        0.0
                    } else {
                        points[idx - 1].1
                    }
                }
                Interp::Linear => linear_eval(points, x),
            },
            Shape::Mixture(parts) => {
                let v: f64 = parts.iter().map(|(w, f)| w * f.eval_finite(x, right)).sum();
                v.clamp(0.0, 1.0)
            }
        }
    }

    /// `lim F(x)` as `x → ∞` through finite values; below 1 when some mass
    /// sits at infinity.
    pub fn sup_finite(&self) -> f64 {
        match &self.shape {
            Shape::UnitStep(p) => {
                if p.is_finite() {
                    1.0
                } else {
                    0.0
                }
            }
            Shape::ExpSimple(_) => 1.0,
            Shape::Table { points, .. } => points.last().map_or(0.0, |p| p.1),
            Shape::Mixture(parts) => parts
                .iter()
                .map(|(w, f)| w * f.sup_finite())
                .sum::<f64>()
                .min(1.0),
        }
    }

    /// Finite abscissae where the function may jump.
    pub fn jumps(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_points(&mut out, false);
        sort_dedup(&mut out);
        out
    }

    /// Jumps together with the kinks of linear tables.
    pub fn knots(&self) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_points(&mut out, true);
        sort_dedup(&mut out);
        out
    }

    fn collect_points(&self, out: &mut Vec<f64>, kinks: bool) {
        match &self.shape {
            Shape::UnitStep(p) => {
                if p.is_finite() {
                    out.push(*p);
                }
            }
            Shape::ExpSimple(_) => {}
            Shape::Table { points, interp } => {
                if *interp == Interp::Step || kinks {
                    out.extend(points.iter().map(|p| p.0));
                }
            }
            Shape::Mixture(parts) => {
                for (_, f) in parts {
                    f.collect_points(out, kinks);
                }
            }
        }
    }

    /// Derivative at `x` away from the knots. Between consecutive knots
    /// every shape is concave on the positive half-line, which is what the
    /// Lévy certificate relies on.
    pub(crate) fn slope(&self, x: f64) -> f64 {
        if !(x > 0.0 && x.is_finite()) {
            return 0.0;
        }
        match &self.shape {
            Shape::UnitStep(_) => 0.0,
            Shape::ExpSimple(c) => (-x / c).exp() / c,
            Shape::Table { points, interp } => match interp {
                Interp::Step => 0.0,
                Interp::Linear => {
                    let idx = points.partition_point(|&(px, _)| px < x);
                    if idx == points.len() {
                        return 0.0;
                    }
                    let (x1, v1) = points[idx];
                    let (x0, v0) = if idx == 0 {
                        (0.0, 0.0)
                    } else {
                        points[idx - 1]
                    };
                    if x1 <= x0 {
                        0.0
                    } else {
                        (v1 - v0) / (x1 - x0)
                    }
                }
            },
            Shape::Mixture(parts) => parts.iter().map(|(w, f)| w * f.slope(x)).sum(),
        }
    }

    /// True when the function has a part that varies continuously (so that
    /// pointwise checks between knots need refinement).
    pub fn has_continuous_part(&self) -> bool {
        match &self.shape {
            Shape::UnitStep(_) => false,
            Shape::ExpSimple(_) => true,
            Shape::Table { interp, .. } => *interp == Interp::Linear,
            Shape::Mixture(parts) => parts.iter().any(|(_, f)| f.has_continuous_part()),
        }
    }

    /// `inf { x >= 0 : F(x+) >= level }`, or `+∞` when the level is never
    /// reached at a finite abscissa.
    pub fn quantile(&self, level: f64) -> f64 {
        if level <= 0.0 {
            return 0.0;
        }
        if level > self.sup_finite() {
            return f64::INFINITY;
        }
        match &self.shape {
            Shape::UnitStep(p) => *p,
            Shape::ExpSimple(c) => -c * (-level).ln_1p(),
            _ => {
                // bracket then bisect on the monotone right-limit
                let mut hi = self.knots().last().copied().unwrap_or(1.0).max(1.0);
                while self.eval_right(hi) < level {
                    hi *= 2.0;
                    if !hi.is_finite() {
                        return f64::INFINITY;
                    }
                }
                if self.eval_right(0.0) >= level {
                    return 0.0;
                }
                let mut lo = 0.0;
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if mid <= lo || mid >= hi {
                        break;
                    }
                    if self.eval_right(mid) >= level {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                hi
            }
        }
    }

    /// `x ↦ F(x / s)`: the distribution of the distance scaled by `s`.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::NonPositive {
                name: "scale",
                value: s,
            });
        }
        let shape = match &self.shape {
            Shape::UnitStep(p) => Shape::UnitStep(p * s),
            Shape::ExpSimple(c) => Shape::ExpSimple(c * s),
            Shape::Table { points, interp } => Shape::Table {
                points: points.iter().map(|&(x, v)| (x * s, v)).collect(),
                interp: *interp,
            },
            Shape::Mixture(parts) => Shape::Mixture(
                parts
                    .iter()
                    .map(|(w, f)| f.scaled(s).map(|g| (*w, g)))
                    .collect::<Result<_>>()?,
            ),
        };
        Ok(Self { shape })
    }
}

fn linear_eval(points: &[(f64, f64)], x: f64) -> f64 {
    let idx = points.partition_point(|&(px, _)| px < x);
    if idx == points.len() {
        return points[idx - 1].1;
    }
    let (x1, v1) = points[idx];
    let (x0, v0) = if idx == 0 {
        (0.0, 0.0)
    } else {
        points[idx - 1]
    };
    if x1 <= x0 {
        return v1;
    }
    v0 + (v1 - v0) * (x - x0) / (x1 - x0)
}

fn sort_dedup(v: &mut Vec<f64>) {
    v.sort_by(|a, b| a.total_cmp(b));
    v.dedup();
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slope_matches_finite_differences() {
        let f = Ddf::mixture(vec![
            (0.3, Ddf::unit_step(0.4).unwrap()),
            (0.4, Ddf::exp_simple(0.6).unwrap()),
            (
                0.3,
                Ddf::table(vec![(0.5, 0.2), (2.0, 1.0)], Interp::Linear).unwrap(),
            ),
        ])
        .unwrap();
        for x in [0.1, 0.3, 0.7, 1.3, 2.5] {
            let h = 1e-6;
            let fd = (f.eval(x + h) - f.eval(x - h)) / (2.0 * h);
            assert!(
                (f.slope(x) - fd).abs() < 1e-5,
                "{x}: {} vs {fd}",
                f.slope(x)
            );
        }
        assert_eq!(f.slope(-1.0), 0.0);
    }

    #[test]
    fn unit_step_is_left_continuous() {
        let e = Ddf::unit_step(0.3).unwrap();
        assert_eq!(e.eval(0.3), 0.0);
        assert_eq!(e.eval_right(0.3), 1.0);
        assert_eq!(e.eval(0.300_000_1), 1.0);
        let e2 = Ddf::unit_step(2.0).unwrap();
        assert_eq!(e2.eval(2.0), 0.0);
        assert_eq!(e2.eval(2.0001), 1.0);
    }

    #[test]
    fn eps0_is_one_on_positive_axis() {
        let e = Ddf::eps0();
        assert_eq!(e.eval(0.0), 0.0);
        assert_eq!(e.eval(1.0), 1.0);
        assert_eq!(e.eval(1e-300), 1.0);
        assert!(e.is_eps0());
    }

    #[test]
    fn negative_step_location_rejected() {
        assert!(Ddf::unit_step(-0.1).is_err());
        assert!(Ddf::unit_step(f64::NAN).is_err());
    }

    #[test]
    fn exp_simple_matches_closed_form() {
        let f = Ddf::exp_simple(1.0).unwrap();
        assert!((f.eval(1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-15);
        assert!((f.eval(1.0) - 0.632_121).abs() < 1e-6);
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(f64::INFINITY), 1.0);
    }

    #[test]
    fn eps_inf_vanishes_on_finite_axis() {
        let e = Ddf::eps_inf();
        assert_eq!(e.eval(1e300), 0.0);
        assert_eq!(e.eval(f64::INFINITY), 1.0);
        assert!(e.is_eps_inf());
        assert!(e.jumps().is_empty());
    }

    #[test]
    fn step_table_eval() {
        let f = Ddf::table(vec![(0.0, 0.25), (1.0, 0.5), (2.0, 1.0)], Interp::Step).unwrap();
        assert_eq!(f.eval(0.0), 0.0);
        assert_eq!(f.eval(0.5), 0.25);
        assert_eq!(f.eval(1.0), 0.25);
        assert_eq!(f.eval(1.5), 0.5);
        assert_eq!(f.eval(2.0), 0.5);
        assert_eq!(f.eval(2.5), 1.0);
        assert_eq!(f.eval_right(1.0), 0.5);
        assert_eq!(f.eval_right(0.0), 0.25);
    }

    #[test]
    fn linear_table_eval() {
        let f = Ddf::table(vec![(1.0, 0.5), (3.0, 1.0)], Interp::Linear).unwrap();
        assert!((f.eval(0.5) - 0.25).abs() < 1e-15);
        assert!((f.eval(2.0) - 0.75).abs() < 1e-15);
        assert_eq!(f.eval(10.0), 1.0);
        assert!(Ddf::table(vec![(0.0, 0.5)], Interp::Linear).is_err());
    }

    #[test]
    fn table_validation() {
        assert!(Ddf::table(vec![], Interp::Step).is_err());
        assert!(Ddf::table(vec![(1.0, 0.5), (1.0, 0.7)], Interp::Step).is_err());
        assert!(Ddf::table(vec![(1.0, 0.5), (2.0, 0.4)], Interp::Step).is_err());
        assert!(Ddf::table(vec![(-1.0, 0.5)], Interp::Step).is_err());
        assert!(Ddf::table(vec![(1.0, 1.5)], Interp::Step).is_err());
    }

    #[test]
    fn mixture_eval_and_jumps() {
        let f = Ddf::mixture(vec![
            (0.25, Ddf::unit_step(0.5).unwrap()),
            (0.75, Ddf::exp_simple(2.0).unwrap()),
        ])
        .unwrap();
        let expected = 0.25 + 0.75 * (1.0 - (-0.5f64).exp());
        assert!((f.eval(1.0) - expected).abs() < 1e-15);
        assert_eq!(f.jumps(), vec![0.5]);
        assert!(f.has_continuous_part());
        assert!(Ddf::mixture(vec![(0.5, Ddf::eps0())]).is_err());
    }

    #[test]
    fn quantiles() {
        let f = Ddf::exp_simple(1.0).unwrap();
        let q = f.quantile(0.5);
        assert!((f.eval(q) - 0.5).abs() < 1e-12);
        assert_eq!(Ddf::unit_step(1.5).unwrap().quantile(0.9), 1.5);
        assert_eq!(Ddf::eps_inf().quantile(0.5), f64::INFINITY);
        let m = Ddf::mixture(vec![
            (0.5, Ddf::unit_step(1.0).unwrap()),
            (0.5, Ddf::unit_step(3.0).unwrap()),
        ])
        .unwrap();
        assert!((m.quantile(0.75) - 3.0).abs() < 1e-9);
    }

    #[test]
    fn scaling_moves_jumps_and_scales() {
        let h = Ddf::exp_simple(1.0).unwrap();
        let f = h.scaled(2.0).unwrap();
        assert!((f.eval(2.0) - h.eval(1.0)).abs() < 1e-15);
        assert_eq!(
            Ddf::unit_step(1.0).unwrap().scaled(3.0).unwrap().param(),
            Some(3.0)
        );
    }
}
