use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const RESULT_HEADER: [&str; 13] = [
    "dataset",
    "algorithm",
    "k",
    "eps",
    "delta",
    "m",
    "seed",
    "f_value",
    "g_value",
    "ell_value",
    "oracle_calls",
    "wall_ms",
    "provenance",
];

pub const ROUND_HEADER: [&str; 12] = [
    "dataset",
    "algorithm",
    "k",
    "eps",
    "m",
    "seed",
    "round",
    "machine",
    "shard_size",
    "candidate_size",
    "pool_sets",
    "oracle_calls",
];

/// One `(algorithm, k, seed)` cell of an experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub dataset: String,
    pub algorithm: String,
    pub k: usize,
    pub eps: f64,
    pub delta: f64,
    pub m: usize,
    pub seed: u64,
    pub f_value: f64,
    pub g_value: f64,
    pub ell_value: f64,
    pub oracle_calls: u64,
    pub wall_ms: f64,
    pub provenance: String,
}

/// Per-machine metrics of one distributed round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRow {
    pub dataset: String,
    pub algorithm: String,
    pub k: usize,
    pub eps: f64,
    pub m: usize,
    pub seed: u64,
    pub round: usize,
    pub machine: usize,
    pub shard_size: usize,
    pub candidate_size: usize,
    pub pool_sets: usize,
    /// Marginal evaluations issued by the machine.
    pub oracle_calls: u64,
}

/// Formats with 9 significant digits, dropping trailing zeros.
pub fn format_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    format!("{rounded}")
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(path, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

fn to_csv(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let wrap = |e| Error::csv("<memory>", e);
    w.write_record(header).map_err(wrap)?;
    for r in rows {
        w.write_record(&r).map_err(wrap)?;
    }
    w.into_inner().map_err(|e| Error::io("<memory>", e.into_error()))
}

/// CSV text for `rows` under the fixed header.
pub fn results_csv(rows: &[ResultRow]) -> Result<String> {
    let bytes = to_csv(
        &RESULT_HEADER,
        rows.iter().map(|r| {
            vec![
                r.dataset.clone(),
                r.algorithm.clone(),
                r.k.to_string(),
                format_sig(r.eps),
                format_sig(r.delta),
                r.m.to_string(),
                r.seed.to_string(),
                format_sig(r.f_value),
                format_sig(r.g_value),
                format_sig(r.ell_value),
                r.oracle_calls.to_string(),
                format_sig(r.wall_ms),
                r.provenance.clone(),
            ]
        }),
    )?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes `rows` to `path`, replacing it atomically.
pub fn emit_results(rows: &[ResultRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_atomic(path, results_csv(rows)?.as_bytes())
}

pub fn emit_rounds(rows: &[RoundRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let bytes = to_csv(
        &ROUND_HEADER,
        rows.iter().map(|r| {
            vec![
                r.dataset.clone(),
                r.algorithm.clone(),
                r.k.to_string(),
                format_sig(r.eps),
                r.m.to_string(),
                r.seed.to_string(),
                r.round.to_string(),
                r.machine.to_string(),
                r.shard_size.to_string(),
                r.candidate_size.to_string(),
                r.pool_sets.to_string(),
                r.oracle_calls.to_string(),
            ]
        }),
    )?;
    write_atomic(path, &bytes)
}

pub fn read_results(path: impl AsRef<Path>) -> Result<Vec<ResultRow>> {
    let path = path.as_ref();
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    let header: Vec<String> = reader
        .headers()
        .map_err(|e| Error::csv(path, e))?
        .iter()
        .map(str::to_string)
        .collect();
    if header != RESULT_HEADER {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: format!("unexpected header {}", header.join(",")),
        });
    }
    reader
        .deserialize()
        .collect::<std::result::Result<Vec<ResultRow>, _>>()
        .map_err(|e| Error::csv(path, e))
}

/// Sibling path for per-round metrics: `out.csv` → `out.rounds.csv`.
pub fn rounds_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.rounds.csv"))
}
