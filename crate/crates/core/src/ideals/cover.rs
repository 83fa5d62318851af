//! Minimum number of rows and columns covering a set of cells.
//!
//! By König's theorem this equals the size of a maximum matching in the
//! bipartite row/column graph whose edges are the cells.

use std::collections::HashMap;

/// Size of a minimum line cover of `cells`, or `cap + 1` if it exceeds `cap`.
pub(super) fn min_line_cover(cells: &[(u64, u64)], cap: usize) -> usize {
    let mut row_ids = HashMap::new();
    let mut col_ids = HashMap::new();
    let mut adj: Vec<Vec<usize>> = Vec::new();
    for &(j, k) in cells {
        let r = *row_ids.entry(j).or_insert_with(|| {
            adj.push(Vec::new());
            adj.len() - 1
        });
        let next_col = col_ids.len();
        let c = *col_ids.entry(k).or_insert(next_col);
        adj[r].push(c);
    }
    let mut col_match: Vec<Option<usize>> = vec![None; col_ids.len()];
    let mut matched = 0;
    for r in 0..adj.len() {
        let mut seen = vec![false; col_ids.len()];
        if augment(r, &adj, &mut col_match, &mut seen) {
            matched += 1;
            if matched > cap {
                return cap + 1;
            }
        }
    }
    matched
}

fn augment(
    r: usize,
    adj: &[Vec<usize>],
    col_match: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &c in &adj[r] {
        if seen[c] {
            continue;
        }
        seen[c] = true;
        if col_match[c].is_none_or(|other| augment(other, adj, col_match, seen)) {
            col_match[c] = Some(r);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exhaustive search over row subsets; the columns needed are then forced.
    fn brute_cover(cells: &[(u64, u64)]) -> usize {
        let mut rows: Vec<u64> = cells.iter().map(|c| c.0).collect();
        rows.sort_unstable();
        rows.dedup();
        let mut best = usize::MAX;
        for mask in 0u32..(1 << rows.len()) {
            let chosen: Vec<u64> = (0..rows.len())
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| rows[i])
                .collect();
            let mut cols: Vec<u64> = cells
                .iter()
                .filter(|c| !chosen.contains(&c.0))
                .map(|c| c.1)
                .collect();
            cols.sort_unstable();
            cols.dedup();
            best = best.min(chosen.len() + cols.len());
        }
        best
    }

    #[test]
    fn matches_brute_force() {
        let cases: Vec<Vec<(u64, u64)>> = vec![
            vec![],
            vec![(1, 1)],
            vec![(1, 1), (1, 2), (1, 3)],
            vec![(1, 1), (2, 2), (3, 3)],
            vec![(1, 1), (1, 2), (2, 1), (3, 3), (4, 3), (5, 1)],
            (1..=6).flat_map(|j| [(j, 1), (1, j), (j, j)]).collect(),
        ];
        for cells in cases {
            assert_eq!(
                min_line_cover(&cells, 100),
                brute_cover(&cells),
                "{cells:?}"
            );
        }
    }

    #[test]
    fn early_exit() {
        let diag: Vec<(u64, u64)> = (1..=50).map(|i| (i, i)).collect();
        assert_eq!(min_line_cover(&diag, 3), 4);
    }
}
