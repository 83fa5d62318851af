//! Named double sequences.
//!
//! | name              | `x_jk`                                                   | params            |
//! |-------------------|----------------------------------------------------------|-------------------|
//! | `harmonic-block`  | `H_a + H_b` where `(a-1)! < j <= a!`, `(b-1)! < k <= b!` |                   |
//! | `note31`          | `p` off `A`; on `A = {(a², b²)}`, `p` if `a = b` else `q` | `p`, `q`          |
//! | `parity`          | `(j + k) mod 2` (or `j mod 2`, `k mod 2`)                | `by`              |
//! | `diagonal`        | `on` if `j = k`, else `off`                              | `on`, `off`       |
//! | `perturbation`    | `c + 1/(jk)`                                             | `c`               |
//! | `reciprocal-sum`  | `1/j + 1/k`                                              |                   |
//! | `constant`        | `value`                                                  | `value`           |
//!
//! `H_a` is the harmonic number `1 + 1/2 + … + 1/a`. Values are reals; the
//! equilateral space reads them as labels.

use serde_json::{Map, Value};

use super::DoubleSequence;
use crate::error::{Error, Result};
use crate::ideals::{Axis, IndexSet2D};

const NAMES: [&str; 7] = [
    "harmonic-block",
    "note31",
    "parity",
    "diagonal",
    "perturbation",
    "reciprocal-sum",
    "constant",
];

pub fn builtin_names() -> &'static [&'static str] {
    &NAMES
}

/// Builds a named sequence. `params` is `null` or an object; unknown keys
/// are rejected.
pub fn builtin_sequence(name: &str, params: &Value) -> Result<DoubleSequence<f64>> {
    let empty = Map::new();
    let obj = match params {
        Value::Null => &empty,
        Value::Object(o) => o,
        _ => return Err(bad(name, "params must be an object")),
    };
    let allowed: &[&str] = match name {
        "harmonic-block" | "reciprocal-sum" => &[],
        "note31" => &["p", "q"],
        "parity" => &["by"],
        "diagonal" => &["on", "off"],
        "perturbation" => &["c"],
        "constant" => &["value"],
        other => return Err(Error::UnknownSequence(other.to_string())),
    };
    if let Some(key) = obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(bad(name, &format!("unknown parameter `{key}`")));
    }
    let num = |key: &str, default: f64| -> Result<f64> {
        match obj.get(key) {
            None => Ok(default),
            Some(v) => v
                .as_f64()
                .filter(|x| x.is_finite())
                .ok_or_else(|| bad(name, &format!("`{key}` must be a finite number"))),
        }
    };
    Ok(match name {
        "harmonic-block" => harmonic_block(),
        "note31" => {
            let (p, q) = (num("p", 0.0)?, num("q", 1.0)?);
            if p == q {
                return Err(bad(name, "`p` and `q` must differ"));
            }
            note31(p, q)
        }
        "parity" => {
            let by = match obj.get("by") {
                None => "sum",
                Some(Value::String(s)) => s.as_str(),
                Some(_) => return Err(bad(name, "`by` must be a string")),
            };
            match by {
                "sum" => DoubleSequence::new("parity", |j, k| ((j + k) % 2) as f64),
                "row" => DoubleSequence::new("parity-row", |j, _| (j % 2) as f64),
                "column" => DoubleSequence::new("parity-column", |_, k| (k % 2) as f64),
                other => {
                    return Err(bad(
                        name,
                        &format!("`by` must be sum, row or column, got `{other}`"),
                    ))
                }
            }
        }
        "diagonal" => {
            let (on, off) = (num("on", 1.0)?, num("off", 0.0)?);
            DoubleSequence::new("diagonal", move |j, k| if j == k { on } else { off })
        }
        "perturbation" => {
            let c = num("c", 1.0)?;
            DoubleSequence::new("perturbation", move |j, k| c + 1.0 / (j as f64 * k as f64))
        }
        "reciprocal-sum" => {
            DoubleSequence::new("reciprocal-sum", |j, k| 1.0 / j as f64 + 1.0 / k as f64)
        }
        "constant" => {
            let v = num("value", 0.0)?;
            DoubleSequence::new("constant", move |_, _| v)
        }
        _ => unreachable!("name checked above"),
    })
}

fn bad(sequence: &str, reason: &str) -> Error {
    Error::InvalidSequenceParam {
        sequence: sequence.to_string(),
        reason: reason.to_string(),
    }
}

/// `(a, H_a)` with `a` the smallest index such that `j <= a!`.
fn block_of(j: u64) -> (u32, f64) {
    let mut a = 1u32;
    let mut fact = 1u128;
    let mut h = 1.0f64;
    while (j as u128) > fact {
        a += 1;
        fact *= a as u128;
        h += 1.0 / a as f64;
    }
    (a, h)
}

fn harmonic_block() -> DoubleSequence<f64> {
    DoubleSequence::new("harmonic-block", |j, k| block_of(j).1 + block_of(k).1)
}

fn exact_sqrt(j: u64) -> Option<u64> {
    let r = (j as f64).sqrt().round() as u64;
    (r.checked_mul(r) == Some(j)).then_some(r)
}

fn note31(p: f64, q: f64) -> DoubleSequence<f64> {
    DoubleSequence::new("note31", move |j, k| match (exact_sqrt(j), exact_sqrt(k)) {
        (Some(a), Some(b)) if a != b => q,
        _ => p,
    })
}

/// The index sets of the `note31` sequence: `A = {(a², b²)}` and the
/// positions `{(a², b²) : a ≠ b}` that carry `q`.
pub fn note31_sets() -> (IndexSet2D, IndexSet2D) {
    let a = IndexSet2D::grid(Axis::squares(), Axis::squares());
    let q_positions = IndexSet2D::predicate(
        "note31 q-positions",
        |j, k| matches!((exact_sqrt(j), exact_sqrt(k)), (Some(a), Some(b)) if a != b),
    );
    (a, q_positions)
}
