use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::objectives::{DenseMatrix, DiGraph, ModularCost, ScoreEntry};

/// A graph read from an edge list, with the original id of every dense node.
#[derive(Debug, Clone)]
pub struct LoadedGraph {
    pub graph: DiGraph,
    /// `original_ids[i]` is the file id of dense node `i`, ascending.
    pub original_ids: Vec<u64>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

/// Reads a whitespace-separated `src dst` edge list. Lines starting with `#`
/// and blank lines are skipped. Node ids are compacted to `0..n` in
/// ascending order of the original ids.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<LoadedGraph> {
    let path = path.as_ref();
    let text = read(path)?;
    let mut raw = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(path, i + 1, format!("expected `src dst`, got `{trimmed}`")));
        }
        let parse = |s: &str| {
            s.parse::<u64>()
                .map_err(|_| parse_err(path, i + 1, format!("`{s}` is not a non-negative integer node id")))
        };
        raw.push((parse(fields[0])?, parse(fields[1])?));
    }
    let original_ids: Vec<u64> = raw
        .iter()
        .flat_map(|&(a, b)| [a, b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let dense: BTreeMap<u64, usize> = original_ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let graph = DiGraph::from_edges(original_ids.len(), raw.iter().map(|(a, b)| (dense[a], dense[b])))?;
    Ok(LoadedGraph { graph, original_ids })
}

/// Writes `dense_id,original_id` rows for a loaded graph.
pub fn write_id_map(path: impl AsRef<Path>, original_ids: &[u64]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record(["dense_id", "original_id"]).map_err(|e| Error::csv(path, e))?;
    for (i, id) in original_ids.iter().enumerate() {
        w.write_record([i.to_string(), id.to_string()]).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes an edge list in the format read by [`load_edge_list`].
pub fn write_edge_list(path: impl AsRef<Path>, graph: &DiGraph) -> Result<()> {
    let path = path.as_ref();
    let mut out = format!("# nodes {} edges {}\n", graph.n(), graph.edge_count());
    for (u, v) in graph.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

fn csv_reader(path: &Path, header: bool) -> Result<csv::Reader<fs::File>> {
    csv::ReaderBuilder::new()
        .has_headers(header)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Error::csv(path, e))
}

fn record_line(rec: &csv::StringRecord, fallback: usize) -> usize {
    rec.position().map_or(fallback, |p| p.line() as usize)
}

/// Reads a numeric CSV, one row per element. `header` skips the first row.
pub fn load_matrix(path: impl AsRef<Path>, header: bool) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, rec) in csv_reader(path, header)?.records().enumerate() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        let line = record_line(&rec, i + 1);
        let row = rec
            .iter()
            .map(|s| match s.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(parse_err(path, line, format!("`{s}` is not a finite number"))),
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_err(
                    path,
                    line,
                    format!("expected {} columns, got {}", first.len(), row.len()),
                ));
            }
        }
        rows.push(row);
    }
    DenseMatrix::from_rows(&rows)
}

/// Writes a matrix as a header-less CSV.
pub fn write_matrix(path: impl AsRef<Path>, m: &DenseMatrix) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    for i in 0..m.rows() {
        w.write_record(m.row(i).iter().map(|v| format!("{v:e}")))
            .map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads `word,element,value` triples.
pub fn load_scores(path: impl AsRef<Path>, header: bool) -> Result<Vec<ScoreEntry>> {
    let path = path.as_ref();
    let mut reader = csv_reader(path, header)?;
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| Error::csv(path, e))?;
        let line = record_line(&rec, i + 1);
        let entry: ScoreEntry = rec
            .deserialize(None)
            .map_err(|e| parse_err(path, line, format!("expected word,element,value: {e}")))?;
        if !(entry.value.is_finite() && entry.value >= 0.0) {
            return Err(parse_err(path, line, format!("score {} must be non-negative", entry.value)));
        }
        out.push(entry);
    }
    Ok(out)
}

/// Reads one cost per line (first column of each row).
pub fn load_costs(path: impl AsRef<Path>, header: bool) -> Result<ModularCost> {
    let path = path.as_ref();
    let m = load_matrix(path, header)?;
    ModularCost::new((0..m.rows()).map(|i| m.get(i, 0)).collect())
}

/// Reads a stream order: one element id per line, forming a permutation of `0..n`.
pub fn load_stream_order(path: impl AsRef<Path>, n: usize) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let text = read(path)?;
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let u: usize = t
            .parse()
            .map_err(|_| parse_err(path, i + 1, format!("`{t}` is not an element id")))?;
        if u >= n || seen[u] {
            return Err(parse_err(path, i + 1, format!("element {u} is out of range or repeated")));
        }
        seen[u] = true;
        order.push(u);
    }
    if order.len() != n {
        return Err(parse_err(
            path,
            text.lines().count(),
            format!("stream lists {} of {n} elements", order.len()),
        ));
    }
    Ok(order)
}
