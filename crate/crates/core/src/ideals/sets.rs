use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// An infinite, strictly increasing enumeration `i ↦ a_i` of positive
/// integers (1-based), e.g. all of ℕ, the squares or an arithmetic
/// progression.
#[derive(Clone)]
pub struct Axis {
    name: String,
    nth: Arc<dyn Fn(u64) -> u64 + Send + Sync>,
}

impl Axis {
    /// `nth` must be strictly increasing with `nth(1) >= 1`.
    pub fn from_fn(
        name: impl Into<String>,
        nth: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            nth: Arc::new(nth),
        }
    }

    pub fn all() -> Self {
        Self::from_fn("all", |i| i)
    }

    pub fn squares() -> Self {
        Self::from_fn("squares", |i| i * i)
    }

    /// `start, start + step, start + 2 step, ...`
    pub fn progression(start: u64, step: u64) -> Self {
        assert!(
            start >= 1 && step >= 1,
            "progression needs start, step >= 1"
        );
        Self::from_fn(format!("{start}+{step}i"), move |i| start + step * (i - 1))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The `i`-th member, `i >= 1`.
    pub fn nth(&self, i: u64) -> u64 {
        (self.nth)(i)
    }

    /// Members not exceeding `m`, ascending.
    pub fn members_upto(&self, m: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut i = 1;
        loop {
            let a = self.nth(i);
            if a > m {
                return out;
            }
            out.push(a);
            i += 1;
        }
    }

    pub fn contains(&self, j: u64) -> bool {
        let mut i = 1;
        loop {
            let a = self.nth(i);
            if a >= j {
                return a == j;
            }
            i += 1;
        }
    }
}

impl fmt::Debug for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Axis({})", self.name)
    }
}

type Pred = Arc<dyn Fn(u64, u64) -> bool + Send + Sync>;

/// A set of indices `K ⊂ ℕ × ℕ` (indices start at 1).
#[derive(Clone)]
pub enum IndexSet2D {
    /// A finite set, given extensionally.
    Explicit(BTreeSet<(u64, u64)>),
    /// A set known only through its membership test.
    Predicate {
        name: String,
        test: Pred,
    },
    /// `rows × cols`, both infinite.
    Grid {
        rows: Axis,
        cols: Axis,
    },
    /// All of ℕ × ℕ.
    All,
    Complement(Box<IndexSet2D>),
}

impl IndexSet2D {
    pub fn explicit(pairs: impl IntoIterator<Item = (u64, u64)>) -> Self {
        IndexSet2D::Explicit(pairs.into_iter().collect())
    }

    pub fn predicate(
        name: impl Into<String>,
        test: impl Fn(u64, u64) -> bool + Send + Sync + 'static,
    ) -> Self {
        IndexSet2D::Predicate {
            name: name.into(),
            test: Arc::new(test),
        }
    }

    pub fn grid(rows: Axis, cols: Axis) -> Self {
        IndexSet2D::Grid { rows, cols }
    }

    pub fn diagonal() -> Self {
        Self::predicate("diagonal", |j, k| j == k)
    }

    pub fn row(i: u64) -> Self {
        Self::predicate(format!("row {i}"), move |j, _| j == i)
    }

    pub fn column(i: u64) -> Self {
        Self::predicate(format!("column {i}"), move |_, k| k == i)
    }

    /// The complement in ℕ × ℕ; a double complement collapses.
    pub fn complement(&self) -> Self {
        match self {
            IndexSet2D::Complement(inner) => (**inner).clone(),
            other => IndexSet2D::Complement(Box::new(other.clone())),
        }
    }

    pub fn contains(&self, j: u64, k: u64) -> bool {
        match self {
            IndexSet2D::Explicit(s) => s.contains(&(j, k)),
            IndexSet2D::Predicate { test, .. } => test(j, k),
            IndexSet2D::Grid { rows, cols } => rows.contains(j) && cols.contains(k),
            IndexSet2D::All => j >= 1 && k >= 1,
            IndexSet2D::Complement(inner) => !inner.contains(j, k),
        }
    }

    /// `Some(true)` if the set is known to be finite, `Some(false)` if known
    /// to be infinite, `None` for bare predicates.
    pub fn is_finite(&self) -> Option<bool> {
        match self {
            IndexSet2D::Explicit(_) => Some(true),
            IndexSet2D::Predicate { .. } => None,
            IndexSet2D::Grid { .. } | IndexSet2D::All => Some(false),
            IndexSet2D::Complement(inner) => match inner.is_finite() {
                Some(true) => Some(false),
                _ => None,
            },
        }
    }

    /// `K(m, n) = |{(j, k) ∈ K : j <= m, k <= n}|`.
    pub fn count(&self, m: u64, n: u64) -> u64 {
        match self {
            IndexSet2D::Explicit(s) => s
                .iter()
                .filter(|&&(j, k)| j >= 1 && j <= m && k >= 1 && k <= n)
                .count() as u64,
            IndexSet2D::Grid { rows, cols } => {
                rows.members_upto(m).len() as u64 * cols.members_upto(n).len() as u64
            }
            IndexSet2D::All => m * n,
            IndexSet2D::Complement(inner) => m * n - inner.count(m, n),
            IndexSet2D::Predicate { test, .. } => (1..=m)
                .into_par_iter()
                .map(|j| (1..=n).filter(|&k| test(j, k)).count() as u64)
                .sum(),
        }
    }

    /// Members inside the window, in dictionary order.
    pub fn trace(&self, m: u64, n: u64) -> Vec<(u64, u64)> {
        match self {
            IndexSet2D::Explicit(s) => s
                .iter()
                .copied()
                .filter(|&(j, k)| j >= 1 && j <= m && k >= 1 && k <= n)
                .collect(),
            IndexSet2D::Grid { rows, cols } => {
                let cs = cols.members_upto(n);
                rows.members_upto(m)
                    .into_iter()
                    .flat_map(|j| cs.iter().map(move |&k| (j, k)))
                    .collect()
            }
            _ => (1..=m)
                .into_par_iter()
                .flat_map_iter(|j| {
                    (1..=n)
                        .filter(move |&k| self.contains(j, k))
                        .map(move |k| (j, k))
                })
                .collect(),
        }
    }

    /// Whether some member has `j > m/2` and `k > n/2`.
    pub fn meets_tail(&self, m: u64, n: u64) -> bool {
        let (hm, hn) = (m / 2, n / 2);
        match self {
            IndexSet2D::Explicit(s) => s.iter().any(|&(j, k)| j > hm && j <= m && k > hn && k <= n),
            _ => (hm + 1..=m)
                .into_par_iter()
                .any(|j| (hn + 1..=n).any(|k| self.contains(j, k))),
        }
    }
}

impl fmt::Debug for IndexSet2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexSet2D::Explicit(s) => f.debug_tuple("Explicit").field(s).finish(),
            IndexSet2D::Predicate { name, .. } => write!(f, "Predicate({name})"),
            IndexSet2D::Grid { rows, cols } => write!(f, "Grid({} x {})", rows.name(), cols.name()),
            IndexSet2D::All => write!(f, "All"),
            IndexSet2D::Complement(inner) => write!(f, "Complement({inner:?})"),
        }
    }
}

/// `|{k ∈ K : k <= n}| / n`.
pub fn natural_density(k: impl Fn(u64) -> bool, n: u64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    (1..=n).filter(|&i| k(i)).count() as f64 / n as f64
}

/// `K(m, n) / (mn)`.
pub fn double_density(k: &IndexSet2D, m: u64, n: u64) -> f64 {
    if m == 0 || n == 0 {
        return 0.0;
    }
    k.count(m, n) as f64 / (m as f64 * n as f64)
}

/// Serializable index sets, as used by ideal descriptors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum IndexSetSpec {
    Pairs {
        pairs: Vec<(u64, u64)>,
    },
    Row {
        index: u64,
    },
    Column {
        index: u64,
    },
    Diagonal,
    /// `{(a², b²)}`.
    Squares,
    All,
    Complement {
        of: Box<IndexSetSpec>,
    },
}

impl IndexSetSpec {
    pub fn build(&self) -> IndexSet2D {
        match self {
            IndexSetSpec::Pairs { pairs } => IndexSet2D::explicit(pairs.iter().copied()),
            IndexSetSpec::Row { index } => IndexSet2D::row(*index),
            IndexSetSpec::Column { index } => IndexSet2D::column(*index),
            IndexSetSpec::Diagonal => IndexSet2D::diagonal(),
            IndexSetSpec::Squares => IndexSet2D::grid(Axis::squares(), Axis::squares()),
            IndexSetSpec::All => IndexSet2D::All,
            IndexSetSpec::Complement { of } => of.build().complement(),
        }
    }
}
