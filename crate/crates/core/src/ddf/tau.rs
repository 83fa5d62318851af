//! The maximal triangle function τ_M, the sup-min convolution
//! `τ_M(F, G)(x) = sup { min(F(u), G(v)) : u + v = x }`.

use super::{Ddf, Interp};
use crate::error::{Error, Result};

/// Tail mass left outside the grid of [`tau_m`]: the grid extends until both
/// inputs exceed `sup - TAU_TAIL_MASS`.
pub const TAU_TAIL_MASS: f64 = 1e-6;

/// Pointwise sup-min convolution at `x`.
///
/// On `[0, x]` the map `u ↦ F(u)` is nondecreasing and `u ↦ G(x - u)` is
/// nonincreasing, so the supremum sits at their crossing, located by
/// bisection. Both argument orders are evaluated and the larger attained value
/// kept, which makes the result exactly symmetric.
pub fn tau_m_at(f: &Ddf, g: &Ddf, x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return 0.0;
    }
    if x == f64::INFINITY {
        return 1.0;
    }
    if f.is_eps0() {
        return g.eval(x);
    }
    if g.is_eps0() {
        return f.eval(x);
    }
    crossing_sup(f, g, x).max(crossing_sup(g, f, x))
}

fn crossing_sup(f: &Ddf, g: &Ddf, x: f64) -> f64 {
    let phi = |u: f64| f.eval(u);
    let psi = |u: f64| g.eval(x - u);
    // phi - psi is nondecreasing: negative at 0 unless G(x) = 0, nonnegative at x
    if psi(0.0) <= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0f64, x);
    for _ in 0..1100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mid) < psi(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // min(phi, psi) = phi left of the crossing, psi right of it
    phi(lo).min(psi(lo)).max(phi(hi).min(psi(hi)))
}

/// Discretised τ_M on a uniform grid of `grid_resolution` cells over
/// `[0, x_max]`, where `x_max` is the sum of the inputs' quantiles at
/// `sup - TAU_TAIL_MASS`.
///
/// The result is a left-continuous step table that agrees with the sup-min
/// convolution at every grid abscissa and carries the remaining mass
/// (`min(sup F, sup G)`) right after `x_max`.
pub fn tau_m(f: &Ddf, g: &Ddf, grid_resolution: usize) -> Result<Ddf> {
    if grid_resolution < 2 {
        return Err(Error::GridTooCoarse(grid_resolution));
    }
    let sup = f.sup_finite().min(g.sup_finite());
    let grid = tau_grid(f, g, grid_resolution);
    let x_max = grid[grid.len() - 1];
    let step = x_max / grid_resolution as f64;
    let mut points = Vec::with_capacity(grid_resolution + 1);
    let mut running = 0.0f64;
    for (i, &x) in grid.iter().enumerate() {
        running = running.max(tau_m_at(f, g, x)).min(sup);
        // value on the cell ending at x
        let left = step * i as f64;
        if points.last().is_none_or(|&(_, v)| v != running) {
            points.push((left, running));
        }
    }
    if points.last().is_none_or(|&(_, v)| v < sup) {
        points.push((x_max, sup));
    }
    points.retain(|&(_, v)| v > 0.0);
    if points.is_empty() {
        return Ok(Ddf::eps_inf());
    }
    Ddf::table(points, Interp::Step)
}

/// Grid abscissae used by [`tau_m`] for the given inputs.
pub(crate) fn tau_grid(f: &Ddf, g: &Ddf, grid_resolution: usize) -> Vec<f64> {
    let qf = f.quantile(f.sup_finite() - TAU_TAIL_MASS);
    let qg = g.quantile(g.sup_finite() - TAU_TAIL_MASS);
    let mut x_max = qf + qg;
    if !(x_max > 0.0 && x_max.is_finite()) {
        x_max = 1.0;
    }
    let step = x_max / grid_resolution as f64;
    (1..=grid_resolution)
        .map(|i| {
            if i == grid_resolution {
                x_max
            } else {
                step * i as f64
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force sup-min over grid pairs (u, x - u), u on a fine grid plus
    /// points just right of every grid node.
    fn brute_tau(f: &Ddf, g: &Ddf, x: f64, n: usize) -> f64 {
        let mut best = 0.0f64;
        for i in 0..=n {
            let u = x * i as f64 / n as f64;
            for du in [0.0, 1e-9] {
                let uu = (u + du).min(x);
                best = best.max(f.eval(uu).min(g.eval(x - uu)));
            }
        }
        best
    }

    #[test]
    fn identity_law_on_grid() {
        let f = Ddf::exp_simple(0.8).unwrap();
        let h = tau_m(&Ddf::eps0(), &f, 256).unwrap();
        for x in tau_grid(&Ddf::eps0(), &f, 256) {
            assert_eq!(h.eval(x), f.eval(x), "x = {x}");
        }
    }

    #[test]
    fn steps_add_their_locations() {
        let a = Ddf::unit_step(1.0).unwrap();
        let b = Ddf::unit_step(2.0).unwrap();
        let h = tau_m(&a, &b, 256).unwrap();
        for x in tau_grid(&a, &b, 256) {
            let expected = brute_tau(&a, &b, x, 4096);
            assert_eq!(h.eval(x), expected, "x = {x}");
            assert_eq!(h.eval(x), if x > 3.0 { 1.0 } else { 0.0 });
        }
        assert_eq!(h.eval(3.0), 0.0);
        assert_eq!(h.eval(3.000_001), 1.0);
    }

    #[test]
    fn commutative() {
        let f = Ddf::exp_simple(0.5).unwrap();
        let g = Ddf::mixture(vec![
            (0.5, Ddf::unit_step(0.2).unwrap()),
            (0.5, Ddf::exp_simple(2.0).unwrap()),
        ])
        .unwrap();
        assert_eq!(tau_m(&f, &g, 256).unwrap(), tau_m(&g, &f, 256).unwrap());
    }

    #[test]
    fn continuous_inputs_match_brute_force() {
        let f = Ddf::exp_simple(1.0).unwrap();
        let g = Ddf::exp_simple(2.0).unwrap();
        for x in [0.1, 0.5, 1.0, 3.0, 7.5] {
            // the sup of min(H(u/a), H(v/b)) over u + v = x is H(x / (a + b))
            let exact = 1.0 - (-x / 3.0f64).exp();
            assert!((tau_m_at(&f, &g, x) - exact).abs() < 1e-12);
            assert!((brute_tau(&f, &g, x, 20_000) - exact).abs() < 1e-3);
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        assert!(tau_m(&Ddf::eps0(), &Ddf::eps0(), 1).is_err());
    }
}
