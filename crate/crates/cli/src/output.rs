//! Trajectory files: CSV and JSON-lines with one row per record.

use std::fmt::Display;
use std::fs;
use std::path::Path;

use pmconv_core::seqlab::{IndicatorRecord, Mode};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const CSV_HEADER: &str = "scenario,statistic,m,n,t_or_eps,value,mode,samples,seed,count,den";

#[derive(Serialize)]
struct Row<'a> {
    scenario: &'a str,
    statistic: &'a str,
    m: u64,
    n: u64,
    t_or_eps: Option<f64>,
    value: f64,
    mode: Mode,
    samples: Option<u64>,
    seed: Option<u64>,
    count: Option<u128>,
    den: Option<u128>,
}

fn opt<T: Display>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

pub fn to_csv(scenario: &str, statistic: &str, records: &[IndicatorRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{scenario},{statistic},{},{},{},{},{},{},{},{},{}\n",
            r.m,
            r.n,
            opt(r.t_or_eps),
            r.value,
            r.mode,
            opt(r.samples),
            opt(r.seed),
            opt(r.count),
            opt(r.den),
        ));
    }
    out
}

pub fn to_jsonl(scenario: &str, statistic: &str, records: &[IndicatorRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let row = Row {
            scenario,
            statistic,
            m: r.m,
            n: r.n,
            t_or_eps: r.t_or_eps,
            value: r.value,
            mode: r.mode,
            samples: r.samples,
            seed: r.seed,
            count: r.count,
            den: r.den,
        };
        out.push_str(&serde_json::to_string(&row).expect("rows serialize"));
        out.push('\n');
    }
    out
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes through a temporary sibling and a rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let name = path.file_name().and_then(|s| s.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.{}.tmp", std::process::id()));
    fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}
