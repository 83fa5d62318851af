use super::DoubleSequence;
use crate::error::{Error, Result};
use crate::ideals::IndexSet2D;
use crate::pmspace::{PmSpace, Point};

/// `x` re-indexed along `K = rows × cols`: `y_il = x_{r_i c_l}`.
///
/// Only product sets (and all of ℕ × ℕ) re-index into a double sequence;
/// finite sets are rejected, as is any other shape.
pub fn subsequence_along<T: 'static>(
    x: &DoubleSequence<T>,
    k: &IndexSet2D,
) -> Result<DoubleSequence<T>> {
    match k {
        IndexSet2D::All => Ok(x.clone()),
        IndexSet2D::Grid { rows, cols } => {
            let (rows, cols, inner) = (rows.clone(), cols.clone(), x.clone());
            let name = format!("{} along {} x {}", x.name(), rows.name(), cols.name());
            Ok(DoubleSequence::new(name, move |i, l| {
                inner.at(rows.nth(i), cols.nth(l))
            }))
        }
        IndexSet2D::Explicit(_) => Err(Error::FiniteIndexSet),
        _ if k.is_finite() == Some(true) => Err(Error::FiniteIndexSet),
        _ => Err(Error::NotGrid),
    }
}

/// Inductive selection of `(j_1, k_1), (j_2, k_2), …` with strictly
/// increasing coordinates and `d_L(F_{x_{j_i k_i} p}, ε₀) < 1/i`, up to
/// `depth` levels inside the window. At each level the first admissible
/// index in dictionary order is taken.
///
/// Failure names the level at which the window held no admissible index.
pub fn extract_convergent_subsequence<S: PmSpace + ?Sized>(
    space: &S,
    x: &DoubleSequence<Point>,
    p: Point,
    window: (u64, u64),
    depth: usize,
) -> Result<Vec<(u64, u64)>> {
    if depth == 0 {
        return Err(Error::EmptySchedule);
    }
    let (m, n) = window;
    let mut found: Vec<(u64, u64)> = Vec::with_capacity(depth);
    for level in 1..=depth {
        let (after_j, after_k) = found.last().copied().unwrap_or((0, 0));
        let bound = 1.0 / level as f64;
        let pick = (after_j + 1..=m)
            .flat_map(|j| (after_k + 1..=n).map(move |k| (j, k)))
            .find(|&(j, k)| space.dl_to_eps0(x.at(j, k), p) < bound);
        match pick {
            Some(idx) => found.push(idx),
            None => return Err(Error::ExtractionFailed { level, found }),
        }
    }
    Ok(found)
}
