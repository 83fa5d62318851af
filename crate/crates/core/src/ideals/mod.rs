//! Densities on ℕ and ℕ × ℕ, decidable models of ideals on ℕ × ℕ and
//! window-based negligibility verdicts.
//!
//! An ideal is an infinite object; every verdict here is read off a finite
//! window `[1, m] × [1, n]` and says [`Verdict::Unknown`] when the window
//! does not settle the question.

mod cover;
mod sets;

pub use sets::{double_density, natural_density, Axis, IndexSet2D, IndexSetSpec};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_positive, Error, Result};
use crate::seqlab::DoubleSequence;

/// Default density below which a window trace counts as negligible.
pub const DEFAULT_THRESHOLD: f64 = 0.01;

/// A decidable model of an ideal on ℕ × ℕ.
#[derive(Debug, Clone)]
pub enum IdealModel {
    /// Finite sets.
    Fin,
    /// Sets of double natural density zero.
    DensityZero,
    /// Sets covered by finitely many rows and columns.
    RowColumn,
    /// Subsets of the union of the listed sets.
    ExplicitUnion(Vec<IndexSet2D>),
}

impl IdealModel {
    /// Whether every row `{i} × ℕ` and column `ℕ × {i}` belongs to the ideal.
    pub fn is_strongly_admissible(&self) -> bool {
        matches!(self, IdealModel::DensityZero | IdealModel::RowColumn)
    }

    pub fn name(&self) -> &'static str {
        match self {
            IdealModel::Fin => "fin",
            IdealModel::DensityZero => "density-zero",
            IdealModel::RowColumn => "row-column",
            IdealModel::ExplicitUnion(_) => "explicit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Negligible,
    NotNegligible,
    Unknown,
}

/// A negligibility verdict with the window statistics behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdealVerdict {
    pub verdict: Verdict,
    pub window: (u64, u64),
    /// `K(m, n)`.
    pub count: u64,
    pub density: f64,
    /// Density on the half-window `(⌈m/2⌉, ⌈n/2⌉)`.
    pub half_density: f64,
    /// Minimum number of rows and columns covering the trace, when computed
    /// (capped one above the budget).
    pub cover: Option<usize>,
}

impl IdealVerdict {
    pub fn is_negligible(&self) -> bool {
        self.verdict == Verdict::Negligible
    }

    pub fn is_not_negligible(&self) -> bool {
        self.verdict == Verdict::NotNegligible
    }
}

fn half(m: u64) -> u64 {
    m.div_ceil(2).max(1)
}

/// Rows plus columns allowed to cover a negligible trace under
/// [`IdealModel::RowColumn`]: `max(1, ⌊log₂ min(m, n)⌋)`.
pub fn row_column_budget(m: u64, n: u64) -> usize {
    let side = m.min(n).max(1);
    (63 - side.leading_zeros() as usize).max(1)
}

/// Whether `k` belongs to the ideal, judged on the window `(m, n)`.
///
/// * `Fin`: explicit sets are negligible and sets known to be infinite are
///   not. A bare predicate is negligible if its window trace is empty, not
///   negligible if it has a member with `j > m/2` and `k > n/2`, unknown
///   otherwise.
/// * `DensityZero`: with `d` the window density and `d½` the half-window
///   density, negligible iff the density is not increasing (`d <= d½`) and
///   either `d < threshold` or the set has no member in the tail quadrant
///   while `d <= d½ / 2`. Not negligible iff `d` and `d½` are both at least
///   `2 threshold` and the set meets the tail quadrant. Unknown otherwise.
/// * `RowColumn`: negligible iff the trace is covered by at most
///   [`row_column_budget`] rows and columns.
/// * `ExplicitUnion`: negligible iff the trace lies in the union's trace.
pub fn is_negligible(
    ideal: &IdealModel,
    k: &IndexSet2D,
    window: (u64, u64),
    threshold: f64,
) -> Result<IdealVerdict> {
    let (m, n) = window;
    if m == 0 || n == 0 {
        return Err(Error::WindowTooSmall {
            m,
            n,
            reason: "window must be at least (1, 1)",
        });
    }
    ensure_positive("threshold", threshold)?;
    let count = k.count(m, n);
    let density = count as f64 / (m as f64 * n as f64);
    let half_density = double_density(k, half(m), half(n));
    let mut out = IdealVerdict {
        verdict: Verdict::Unknown,
        window,
        count,
        density,
        half_density,
        cover: None,
    };
    out.verdict = match ideal {
        IdealModel::Fin => match k.is_finite() {
            Some(true) => Verdict::Negligible,
            Some(false) => Verdict::NotNegligible,
            None if count == 0 => Verdict::Negligible,
            None if k.meets_tail(m, n) => Verdict::NotNegligible,
            None => Verdict::Unknown,
        },
        IdealModel::DensityZero => {
            let falling = density <= half_density;
            let in_tail = k.meets_tail(m, n);
            if falling && (density < threshold || (density <= 0.5 * half_density && !in_tail)) {
                Verdict::Negligible
            } else if in_tail && density >= 2.0 * threshold && half_density >= 2.0 * threshold {
                Verdict::NotNegligible
            } else {
                Verdict::Unknown
            }
        }
        IdealModel::RowColumn => {
            let budget = row_column_budget(m, n);
            let cover = cover::min_line_cover(&k.trace(m, n), budget);
            out.cover = Some(cover);
            if cover <= budget {
                Verdict::Negligible
            } else {
                Verdict::NotNegligible
            }
        }
        IdealModel::ExplicitUnion(sets) => {
            let inside = k
                .trace(m, n)
                .into_iter()
                .all(|(j, kk)| sets.iter().any(|s| s.contains(j, kk)));
            if inside {
                Verdict::Negligible
            } else {
                Verdict::NotNegligible
            }
        }
    };
    Ok(out)
}

/// Filter membership: `k ∈ 𝔽(I)` iff its complement is in `I`. The returned
/// verdict is that of the complement, so `Negligible` means "in the filter".
pub fn in_filter(
    ideal: &IdealModel,
    k: &IndexSet2D,
    window: (u64, u64),
    threshold: f64,
) -> Result<IdealVerdict> {
    is_negligible(ideal, &k.complement(), window, threshold)
}

/// I-convergence of a double net to `limit`, judged on the window: the
/// verdict for `{(m, n) : |a(m, n) - limit| >= eps}` at the default
/// threshold.
pub fn ideal_limit_verdict(
    a: impl Fn(u64, u64) -> f64 + Send + Sync + 'static,
    limit: f64,
    ideal: &IdealModel,
    eps: f64,
    window: (u64, u64),
) -> Result<IdealVerdict> {
    ensure_positive("eps", eps)?;
    let exceptional =
        IndexSet2D::predicate("exceptional", move |m, n| (a(m, n) - limit).abs() >= eps);
    is_negligible(ideal, &exceptional, window, DEFAULT_THRESHOLD)
}

/// Bracketing estimate of the I-limit inferior: the smallest `α` on the
/// (ascending) grid whose sublevel set `{(j, k) : x_jk < α}` is judged not
/// negligible, or `+∞` if there is none.
pub fn i_liminf_estimate(
    x: &DoubleSequence<f64>,
    ideal: &IdealModel,
    window: (u64, u64),
    alpha_grid: &[f64],
) -> Result<f64> {
    if alpha_grid.is_empty()
        || alpha_grid
            .windows(2)
            .any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::BadGrid("alpha_grid"));
    }
    for &alpha in alpha_grid {
        let seq = x.clone();
        let below = IndexSet2D::predicate("sublevel", move |j, k| seq.at(j, k) < alpha);
        if is_negligible(ideal, &below, window, DEFAULT_THRESHOLD)?.is_not_negligible() {
            return Ok(alpha);
        }
    }
    Ok(f64::INFINITY)
}

/// Ideal descriptor:
/// `{"ideal":"fin"|"density-zero"|"row-column"}` or
/// `{"ideal":"explicit","sets":[...]}`, with an optional `"threshold"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealSpec {
    pub ideal: IdealKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sets: Option<Vec<IndexSetSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdealKind {
    Fin,
    DensityZero,
    RowColumn,
    Explicit,
}

impl IdealSpec {
    pub fn model(&self) -> Result<IdealModel> {
        Ok(match self.ideal {
            IdealKind::Fin => IdealModel::Fin,
            IdealKind::DensityZero => IdealModel::DensityZero,
            IdealKind::RowColumn => IdealModel::RowColumn,
            IdealKind::Explicit => IdealModel::ExplicitUnion(
                self.sets
                    .as_ref()
                    .ok_or(Error::BadGrid("sets"))?
                    .iter()
                    .map(IndexSetSpec::build)
                    .collect(),
            ),
        })
    }

    pub fn threshold(&self) -> Result<f64> {
        let t = self.threshold.unwrap_or(DEFAULT_THRESHOLD);
        ensure_positive("threshold", t)?;
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const W: (u64, u64) = (200, 200);

    fn verdict(ideal: &IdealModel, k: &IndexSet2D, w: (u64, u64)) -> Verdict {
        is_negligible(ideal, k, w, DEFAULT_THRESHOLD)
            .unwrap()
            .verdict
    }

    #[test]
    fn diagonal_is_density_zero() {
        let v = is_negligible(&IdealModel::DensityZero, &IndexSet2D::diagonal(), W, 0.01).unwrap();
        assert_eq!(v.verdict, Verdict::Negligible);
        assert_eq!(v.density, 0.005);
        assert_eq!(v.half_density, 0.01);
    }

    #[test]
    fn finite_sets_under_fin() {
        let k = IndexSet2D::explicit([(1, 1), (2, 3)]);
        assert_eq!(verdict(&IdealModel::Fin, &k, (1, 1)), Verdict::Negligible);
        assert_eq!(
            verdict(&IdealModel::Fin, &k.complement(), W),
            Verdict::NotNegligible
        );
        assert!(!IdealModel::Fin.is_strongly_admissible());
    }

    #[test]
    fn half_plane_is_not_negligible() {
        let even_rows = IndexSet2D::predicate("even rows", |j, _| j % 2 == 0);
        assert_eq!(
            verdict(&IdealModel::DensityZero, &even_rows, W),
            Verdict::NotNegligible
        );
        assert_eq!(
            verdict(&IdealModel::RowColumn, &even_rows, W),
            Verdict::NotNegligible
        );
        assert_eq!(
            verdict(&IdealModel::Fin, &even_rows, W),
            Verdict::NotNegligible
        );
    }

    #[test]
    fn rows_and_columns_are_negligible_when_strongly_admissible() {
        assert!(IdealModel::DensityZero.is_strongly_admissible());
        assert!(IdealModel::RowColumn.is_strongly_admissible());
        for i in [1, 5, 17] {
            for w in [(8, 8), (50, 30), (200, 200)] {
                let rc = &IdealModel::RowColumn;
                assert_eq!(verdict(rc, &IndexSet2D::row(i), w), Verdict::Negligible);
                assert_eq!(verdict(rc, &IndexSet2D::column(i), w), Verdict::Negligible);
            }
            // density-zero verdicts need a window where a line is thin
            let dz = &IdealModel::DensityZero;
            assert_eq!(verdict(dz, &IndexSet2D::row(i), W), Verdict::Negligible);
            assert_eq!(verdict(dz, &IndexSet2D::column(i), W), Verdict::Negligible);
        }
    }

    #[test]
    fn row_column_cover_budget() {
        assert_eq!(row_column_budget(200, 200), 7);
        assert_eq!(row_column_budget(1, 5), 1);
        let two_rows = IndexSet2D::predicate("rows 1, 2", |j, _| j <= 2);
        assert_eq!(
            verdict(&IdealModel::RowColumn, &two_rows, (16, 16)),
            Verdict::Negligible
        );
        let v = is_negligible(
            &IdealModel::RowColumn,
            &IndexSet2D::diagonal(),
            (16, 16),
            0.01,
        )
        .unwrap();
        assert_eq!(v.verdict, Verdict::NotNegligible);
        assert_eq!(v.cover, Some(5));
    }

    #[test]
    fn explicit_union() {
        let ideal = IdealModel::ExplicitUnion(vec![IndexSet2D::row(1), IndexSet2D::diagonal()]);
        let inside = IndexSet2D::explicit([(1, 9), (4, 4)]);
        assert_eq!(verdict(&ideal, &inside, (10, 10)), Verdict::Negligible);
        let outside = IndexSet2D::explicit([(2, 9)]);
        assert_eq!(verdict(&ideal, &outside, (10, 10)), Verdict::NotNegligible);
        // outside the window nothing is known to differ
        assert_eq!(verdict(&ideal, &outside, (1, 1)), Verdict::Negligible);
    }

    #[test]
    fn filter_membership() {
        let finite = IndexSet2D::explicit([(1, 1), (3, 3)]);
        assert!(in_filter(&IdealModel::Fin, &finite.complement(), W, 0.01)
            .unwrap()
            .is_negligible());
        let even_sum = IndexSet2D::predicate("j+k even", |j, k| (j + k) % 2 == 0);
        let v = in_filter(&IdealModel::DensityZero, &even_sum, W, 0.01).unwrap();
        assert_eq!(v.verdict, Verdict::NotNegligible);
        assert_eq!(v.density, 0.5);
        for ideal in [
            IdealModel::Fin,
            IdealModel::DensityZero,
            IdealModel::RowColumn,
        ] {
            assert!(in_filter(&ideal, &IndexSet2D::All, W, 0.01)
                .unwrap()
                .is_negligible());
        }
    }

    #[test]
    fn limit_verdicts() {
        let v = ideal_limit_verdict(
            |m, n| 1.0 / (m * n) as f64,
            0.0,
            &IdealModel::Fin,
            0.01,
            (100, 100),
        )
        .unwrap();
        assert_ne!(v.verdict, Verdict::NotNegligible);
        let v = ideal_limit_verdict(
            |m, n| 1.0 / (m * n) as f64,
            0.0,
            &IdealModel::DensityZero,
            0.01,
            (100, 100),
        )
        .unwrap();
        assert_eq!(v.verdict, Verdict::Negligible);
        let v = ideal_limit_verdict(|_, _| 5.0, 5.0, &IdealModel::DensityZero, 0.1, W).unwrap();
        assert_eq!(v.verdict, Verdict::Negligible);
        let v = ideal_limit_verdict(
            |m, n| if (m + n) % 2 == 0 { 1.0 } else { -1.0 },
            1.0,
            &IdealModel::DensityZero,
            0.5,
            W,
        )
        .unwrap();
        assert_eq!(v.verdict, Verdict::NotNegligible);
        assert_eq!(v.density, 0.5);
    }

    #[test]
    fn liminf_brackets() {
        let three = DoubleSequence::new("three", |_, _| 3.0);
        let w = (100, 100);
        let dz = IdealModel::DensityZero;
        assert_eq!(
            i_liminf_estimate(&three, &dz, w, &[1.0, 2.0, 3.0, 4.0]).unwrap(),
            4.0
        );
        assert_eq!(
            i_liminf_estimate(&three, &dz, w, &[2.9, 3.0, 3.1]).unwrap(),
            3.1
        );
        assert_eq!(
            i_liminf_estimate(&three, &dz, w, &[1.0, 2.0]).unwrap(),
            f64::INFINITY
        );

        let parity = DoubleSequence::new("parity", |j, _| (j % 2) as f64);
        assert_eq!(
            i_liminf_estimate(&parity, &dz, w, &[0.0, 0.5, 1.0]).unwrap(),
            0.5
        );

        let outliers = DoubleSequence::new("outliers", |j, k| if j + k <= 4 { -10.0 } else { 3.0 });
        let grid = [-5.0, 0.0, 2.9, 3.1, 4.0];
        assert_eq!(
            i_liminf_estimate(&outliers, &IdealModel::Fin, w, &grid).unwrap(),
            i_liminf_estimate(&outliers, &dz, w, &grid).unwrap()
        );
        assert!(i_liminf_estimate(&three, &dz, w, &[2.0, 1.0]).is_err());
    }

    #[test]
    fn ideal_spec_parsing() {
        let s: IdealSpec =
            serde_json::from_str(r#"{"ideal":"density-zero","threshold":0.02}"#).unwrap();
        assert!(matches!(s.model().unwrap(), IdealModel::DensityZero));
        assert_eq!(s.threshold().unwrap(), 0.02);
        let e: IdealSpec =
            serde_json::from_str(r#"{"ideal":"explicit","sets":[{"kind":"row","index":1}]}"#)
                .unwrap();
        assert!(matches!(e.model().unwrap(), IdealModel::ExplicitUnion(v) if v.len() == 1));
        assert!(serde_json::from_str::<IdealSpec>(r#"{"ideal":"maximal"}"#).is_err());
    }
}
