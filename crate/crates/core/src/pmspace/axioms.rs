use rayon::prelude::*;
use serde::Serialize;

use super::{distinct_points, PmSpace, Point};
use crate::error::{Error, Result};

/// Slack allowed in the triangle axiom.
pub const TRIANGLE_TOL: f64 = 1e-9;

/// Outcome of one axiom over the sampled points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomCheck {
    pub axiom: &'static str,
    pub passed: bool,
    /// Largest violation found; 0 when none.
    pub worst_violation: f64,
    /// Pair or triple attaining the worst violation.
    pub witness: Option<Vec<Point>>,
    /// Abscissa of the worst violation, when it is pointwise.
    pub at: Option<f64>,
}

impl AxiomCheck {
    fn new(axiom: &'static str) -> Self {
        Self {
            axiom,
            passed: true,
            worst_violation: 0.0,
            witness: None,
            at: None,
        }
    }

    fn record(&mut self, violation: f64, witness: &[Point], at: Option<f64>) {
        if violation > self.worst_violation {
            self.passed = false;
            self.worst_violation = violation;
            self.witness = Some(witness.to_vec());
            self.at = at;
        }
    }

    fn merge(mut self, other: Self) -> Self {
        if other.worst_violation > self.worst_violation {
            self = other;
        }
        self
    }
}

/// Results for the four PM-space axioms: `F_xx = ε₀`, `F_xy ≠ ε₀` for
/// `x ≠ y`, `F_xy = F_yx` and `F_xz ≥ τ(F_xy, F_yz)`.
///
/// A pass means no violation was found at the sampled points and abscissae.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub identity: AxiomCheck,
    pub separation: AxiomCheck,
    pub symmetry: AxiomCheck,
    pub triangle: AxiomCheck,
    pub abscissae: usize,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.passed)
    }

    pub fn checks(&self) -> [&AxiomCheck; 4] {
        [
            &self.identity,
            &self.separation,
            &self.symmetry,
            &self.triangle,
        ]
    }

    pub fn failures(&self) -> Vec<&AxiomCheck> {
        self.checks().into_iter().filter(|c| !c.passed).collect()
    }
}

/// Checks the axioms on every sampled pair and triple at `grid` abscissae
/// in `(0, T]`, half spaced uniformly and half geometrically so that small
/// distances are probed as densely as large ones. `T` is where every sampled
/// distribution is within `1e-6` of its supremum.
pub fn verify_axioms<S: PmSpace + ?Sized>(
    space: &S,
    sample_points: &[Point],
    grid: usize,
) -> Result<AxiomReport> {
    let pts = distinct_points(sample_points);
    if pts.len() < 2 {
        return Err(Error::TooFewPoints {
            need: 2,
            got: pts.len(),
        });
    }
    if grid < 2 {
        return Err(Error::GridTooCoarse(grid));
    }
    let xs = abscissae(space, &pts, grid);

    let mut identity = AxiomCheck::new("identity");
    let mut separation = AxiomCheck::new("separation");
    let mut symmetry = AxiomCheck::new("symmetry");
    for (i, &x) in pts.iter().enumerate() {
        let fxx = space.distribution(x, x);
        let near_zero = 1.0 - fxx.eval_right(0.0);
        identity.record(near_zero, &[x, x], Some(0.0));
        for &t in &xs {
            identity.record(1.0 - fxx.eval(t), &[x, x], Some(t));
        }
        for &y in &pts[i + 1..] {
            let fxy = space.distribution(x, y);
            let fyx = space.distribution(y, x);
            if fxy.eval_right(0.0) >= 1.0 {
                separation.record(1.0, &[x, y], None);
            }
            for &t in &xs {
                let d = (fxy.eval(t) - fyx.eval(t)).abs();
                symmetry.record(d, &[x, y], Some(t));
            }
        }
    }

    let triangle = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            let mut check = AxiomCheck::new("triangle");
            let x = pts[i];
            for &y in &pts {
                let fxy = space.distribution(x, y);
                for &z in &pts {
                    let fyz = space.distribution(y, z);
                    let fxz = space.distribution(x, z);
                    for &t in &xs {
                        let direct = fxz.eval(t);
                        // τ_M(F, G)(t) <= min(F(t), G(t)), so most abscissae need no sup
                        if fxy.eval(t).min(fyz.eval(t)) - direct <= TRIANGLE_TOL {
                            continue;
                        }
                        let bound = space.triangle().eval(&fxy, &fyz, t);
                        let gap = bound - direct;
                        if gap > TRIANGLE_TOL {
                            check.record(gap, &[x, y, z], Some(t));
                        }
                    }
                }
            }
            check
        })
        .reduce(|| AxiomCheck::new("triangle"), AxiomCheck::merge);

    Ok(AxiomReport {
        identity,
        separation,
        symmetry,
        triangle,
        abscissae: xs.len(),
    })
}

fn abscissae<S: PmSpace + ?Sized>(space: &S, pts: &[Point], grid: usize) -> Vec<f64> {
    let mut t_max = 0.0f64;
    for &x in pts {
        for &y in pts {
            let f = space.distribution(x, y);
            let q = f.quantile(f.sup_finite() - 1e-6);
            if q.is_finite() {
                t_max = t_max.max(q);
            }
        }
    }
    if t_max <= 0.0 {
        t_max = 1.0;
    }
    let uniform = grid / 2;
    let geometric = grid - uniform;
    let lo = t_max * 1e-6;
    let ratio = (t_max / lo).powf(1.0 / geometric.max(1) as f64);
    let mut xs: Vec<f64> = (1..=uniform)
        .map(|i| t_max * i as f64 / uniform as f64)
        .chain((0..geometric).map(|i| lo * ratio.powi(i as i32)))
        .collect();
    xs.sort_by(|a, b| a.total_cmp(b));
    xs.dedup();
    xs
}
