//! Probabilistic metric spaces `(S, 𝔉, τ)`.
//!
//! Points are opaque handles ([`Point`]) compared by bit pattern; the
//! simple space reads them as real coordinates, the equilateral space only
//! tests them for equality. Every space caches `d_L(F_xy, ε₀)` per
//! distribution class so the quadruple loops in [`crate::seqlab`] evaluate
//! each distinct distance once.

mod axioms;

pub use axioms::{verify_axioms, AxiomCheck, AxiomReport};

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use dashmap::DashMap;
use serde::{Deserialize, Serialize};

use crate::ddf::{distance_to_eps0, tau_m_at, Ddf, DEFAULT_LEVY_TOL};
use crate::error::{ensure_positive, Error, Result};

/// A point handle. Equality and hashing use the bit pattern (with `-0.0`
/// folded into `0.0`).
#[derive(Debug, Clone, Copy, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub f64);

impl Point {
    pub fn key(self) -> u64 {
        if self.0 == 0.0 {
            0
        } else {
            self.0.to_bits()
        }
    }
}

impl PartialEq for Point {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl Eq for Point {}

impl Hash for Point {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state);
    }
}

impl From<f64> for Point {
    fn from(v: f64) -> Self {
        Point(v)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Triangle functions available to a space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TriangleFunction {
    /// τ_M, the sup-min convolution.
    #[default]
    Maximal,
}

impl TriangleFunction {
    pub fn eval(self, f: &Ddf, g: &Ddf, x: f64) -> f64 {
        match self {
            TriangleFunction::Maximal => tau_m_at(f, g, x),
        }
    }
}

/// Concurrent cache of `d_L(F, ε₀)` keyed by distribution class.
#[derive(Debug, Default)]
pub struct PairCache {
    dl: DashMap<u64, f64>,
}

impl PairCache {
    pub fn get_or_insert_with(&self, key: u64, compute: impl FnOnce() -> f64) -> f64 {
        if let Some(v) = self.dl.get(&key) {
            return *v;
        }
        // compute outside the shard lock; concurrent inserts store the same value
        let v = compute();
        *self.dl.entry(key).or_insert(v)
    }

    pub fn len(&self) -> usize {
        self.dl.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dl.is_empty()
    }
}

/// A probabilistic metric space.
pub trait PmSpace: Send + Sync {
    /// `F_ab`.
    fn distribution(&self, a: Point, b: Point) -> Ddf;

    /// Identifies the distribution class of `F_ab`: pairs with equal keys
    /// have equal distributions.
    fn pair_key(&self, a: Point, b: Point) -> u64;

    fn cache(&self) -> &PairCache;

    fn triangle(&self) -> TriangleFunction {
        TriangleFunction::Maximal
    }

    fn name(&self) -> &str;

    /// Whether `F_ab = F_ba` is guaranteed, which lets pair statistics
    /// visit each unordered pair once.
    fn is_symmetric(&self) -> bool {
        true
    }

    /// `F_ab(t)`.
    fn eval(&self, a: Point, b: Point, t: f64) -> f64 {
        self.distribution(a, b).eval(t)
    }

    /// Cached `d_L(F_ab, ε₀)`.
    fn dl_to_eps0(&self, a: Point, b: Point) -> f64 {
        self.cache().get_or_insert_with(self.pair_key(a, b), || {
            distance_to_eps0(&self.distribution(a, b), DEFAULT_LEVY_TOL)
                .expect("default tolerance is positive")
        })
    }
}

/// `y ∈ N_x(t)`, i.e. `F_xy(t) > 1 - t`.
pub fn in_strong_neighborhood<S: PmSpace + ?Sized>(
    space: &S,
    x: Point,
    y: Point,
    t: f64,
) -> Result<bool> {
    ensure_positive("t", t)?;
    Ok(space.eval(x, y, t) > 1.0 - t)
}

/// `(x, y) ∈ 𝔘(t)`, the strong t-vicinity; the same predicate on the ordered pair.
pub fn in_vicinity<S: PmSpace + ?Sized>(space: &S, x: Point, y: Point, t: f64) -> Result<bool> {
    ensure_positive("t", t)?;
    Ok(space.eval(x, y, t) > 1.0 - t)
}

/// Largest `η` on the grid `t, t/2, …, t/2^max_halvings` such that for every
/// sampled triple `(a, c, b)`, `(a, c) ∈ 𝔘(η)` and `(c, b) ∈ 𝔘(η)` imply
/// `(a, b) ∈ 𝔘(t)`.
pub fn find_vicinity_eta<S: PmSpace + ?Sized>(
    space: &S,
    t: f64,
    sample_points: &[Point],
    max_halvings: u32,
) -> Result<f64> {
    ensure_positive("t", t)?;
    let pts = distinct_points(sample_points);
    if pts.is_empty() {
        return Err(Error::TooFewPoints { need: 1, got: 0 });
    }
    let n = pts.len();
    let words = n.div_ceil(64);
    // pairs outside 𝔘(t); only these can break the implication
    let mut bad_pairs = Vec::new();
    for i in 0..n {
        for j in i..n {
            if space.eval(pts[i], pts[j], t) <= 1.0 - t {
                bad_pairs.push((i, j));
            }
        }
    }
    let mut eta = t;
    for _ in 0..=max_halvings {
        let mut rows = vec![0u64; n * words];
        for i in 0..n {
            for j in i..n {
                if space.eval(pts[i], pts[j], eta) > 1.0 - eta {
                    rows[i * words + j / 64] |= 1 << (j % 64);
                    rows[j * words + i / 64] |= 1 << (i % 64);
                }
            }
        }
        let composes = bad_pairs.iter().all(|&(a, b)| {
            let ra = &rows[a * words..(a + 1) * words];
            let rb = &rows[b * words..(b + 1) * words];
            ra.iter().zip(rb).all(|(x, y)| x & y == 0)
        });
        if composes {
            return Ok(eta);
        }
        eta *= 0.5;
    }
    Err(Error::NoVicinityEta { t })
}

pub(crate) fn distinct_points(points: &[Point]) -> Vec<Point> {
    let mut seen = std::collections::HashSet::new();
    points.iter().copied().filter(|p| seen.insert(*p)).collect()
}

/// The equilateral space: `F_pq = F` for `p ≠ q` and `ε₀` on the diagonal,
/// under τ_M.
#[derive(Debug)]
pub struct EquilateralSpace {
    f: Ddf,
    cache: PairCache,
}

impl EquilateralSpace {
    pub fn new(f: Ddf) -> Result<Self> {
        if f.is_eps0() || f.is_eps_inf() {
            return Err(Error::DegenerateEquilateral);
        }
        Ok(Self {
            f,
            cache: PairCache::default(),
        })
    }

    pub fn common_distribution(&self) -> &Ddf {
        &self.f
    }
}

impl PmSpace for EquilateralSpace {
    fn distribution(&self, a: Point, b: Point) -> Ddf {
        if a == b {
            Ddf::eps0()
        } else {
            self.f.clone()
        }
    }

    fn eval(&self, a: Point, b: Point, t: f64) -> f64 {
        if a == b {
            Ddf::eps0().eval(t)
        } else {
            self.f.eval(t)
        }
    }

    fn pair_key(&self, a: Point, b: Point) -> u64 {
        u64::from(a != b)
    }

    fn cache(&self) -> &PairCache {
        &self.cache
    }

    fn name(&self) -> &str {
        "equilateral"
    }
}

/// The simple space generated by the real line and `H`:
/// `F_pq(t) = H(t / |p - q|)`, with `H(t/0) = 1` for `t > 0` and `H(0/0) = 0`.
#[derive(Debug)]
pub struct SimpleSpace {
    h: Ddf,
    cache: PairCache,
}

impl SimpleSpace {
    /// `h` must be strictly increasing on `(0, ∞)`; this is checked on a
    /// geometric probe grid.
    pub fn new(h: Ddf) -> Result<Self> {
        let mut prev = h.eval(1e-9);
        let mut x = 2e-9;
        while x < 1e9 {
            let v = h.eval(x);
            if v <= prev && v < 1.0 {
                return Err(Error::InvalidDdf(format!(
                    "H must be strictly increasing; flat near x = {x}"
                )));
            }
            prev = v;
            x *= 2.0;
        }
        Ok(Self {
            h,
            cache: PairCache::default(),
        })
    }

    pub fn generator(&self) -> &Ddf {
        &self.h
    }
}

impl PmSpace for SimpleSpace {
    fn distribution(&self, a: Point, b: Point) -> Ddf {
        let d = (a.0 - b.0).abs();
        if d == 0.0 {
            Ddf::eps0()
        } else {
            self.h.scaled(d).expect("distance is positive and finite")
        }
    }

    fn eval(&self, a: Point, b: Point, t: f64) -> f64 {
        let d = (a.0 - b.0).abs();
        if t <= 0.0 {
            0.0
        } else if d == 0.0 {
            1.0
        } else {
            self.h.eval(t / d)
        }
    }

    fn pair_key(&self, a: Point, b: Point) -> u64 {
        (a.0 - b.0).abs().to_bits()
    }

    fn cache(&self) -> &PairCache {
        &self.cache
    }

    fn name(&self) -> &str {
        "simple"
    }
}

type DistanceRule = dyn Fn(Point, Point) -> Ddf + Send + Sync;

/// A space given by an arbitrary distance rule. Nothing is assumed about the
/// rule; [`verify_axioms`] is how to find out whether it is a PM space.
pub struct FnSpace {
    name: String,
    rule: Arc<DistanceRule>,
    cache: PairCache,
}

impl FnSpace {
    pub fn new(
        name: impl Into<String>,
        rule: impl Fn(Point, Point) -> Ddf + Send + Sync + 'static,
    ) -> Self {
        Self {
            name: name.into(),
            rule: Arc::new(rule),
            cache: PairCache::default(),
        }
    }
}

impl fmt::Debug for FnSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnSpace").field("name", &self.name).finish()
    }
}

impl PmSpace for FnSpace {
    fn distribution(&self, a: Point, b: Point) -> Ddf {
        (self.rule)(a, b)
    }

    fn pair_key(&self, a: Point, b: Point) -> u64 {
        // ordered pair: the rule may be asymmetric
        let mut h = std::collections::hash_map::DefaultHasher::new();
        (a.key(), b.key()).hash(&mut h);
        h.finish()
    }

    fn cache(&self) -> &PairCache {
        &self.cache
    }

    fn name(&self) -> &str {
        &self.name
    }

    fn is_symmetric(&self) -> bool {
        false
    }
}

/// Space descriptor, as found in scenario configs:
/// `{"space":"equilateral","F":<ddf>}` or `{"space":"simple","H":<ddf>}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "space", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpaceSpec {
    Equilateral {
        #[serde(rename = "F")]
        f: Ddf,
    },
    Simple {
        #[serde(rename = "H")]
        h: Ddf,
    },
}

impl SpaceSpec {
    pub fn build(&self) -> Result<Box<dyn PmSpace>> {
        Ok(match self {
            SpaceSpec::Equilateral { f } => Box::new(EquilateralSpace::new(f.clone())?),
            SpaceSpec::Simple { h } => Box::new(SimpleSpace::new(h.clone())?),
        })
    }
}
