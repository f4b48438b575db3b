//! Pattern and host specifications given on the command line.

use std::fs;

use arc_cover::graph::{
    directed_cycle, parse_digraph, parse_pattern, parse_undirected, random_digraph, random_tournament,
    rotational_tournament, transitive_tournament, two_cycle,
};
use arc_cover::{Digraph, Error, Pattern, Result, UndirectedGraph};

use crate::report::{sha256, InputRecord};

fn read(path: &str) -> Result<(String, String)> {
    let bytes = fs::read(path).map_err(|e| Error::InvalidArgument(format!("cannot read {path:?}: {e}")))?;
    let digest = sha256(&bytes);
    let text = String::from_utf8(bytes).map_err(|_| Error::InvalidArgument(format!("{path:?} is not UTF-8")))?;
    Ok((text, digest))
}

fn number<T: std::str::FromStr>(field: &str, spec: &str) -> Result<T> {
    field.parse().map_err(|_| Error::InvalidArgument(format!("bad number {field:?} in {spec:?}")))
}

/// `cycle:k`, `tt:r`, `c2` or `file:path`.
pub fn pattern(spec: &str, role: &'static str) -> Result<(Pattern, InputRecord)> {
    let mut record = InputRecord { role, source: spec.to_string(), sha256: None };
    let p = match spec.split_once(':') {
        Some(("cycle", k)) => directed_cycle(number(k, spec)?)?,
        Some(("tt", r)) => transitive_tournament(number(r, spec)?)?,
        Some(("file", path)) => {
            let (text, digest) = read(path)?;
            record.sha256 = Some(digest);
            parse_pattern(&text)?
        }
        None if spec == "c2" => two_cycle(),
        _ => return Err(Error::InvalidArgument(format!("unknown pattern {spec:?}; use cycle:k, tt:r, c2 or file:path"))),
    };
    Ok((p, record))
}

/// A graph-core file path (optionally `file:path`) or a generator:
/// `rotational:n`, `tournament:n`, `random:n:p`, `tt:n`, `cycle:k`.
/// Random generators use `seed`.
pub fn host(spec: &str, seed: u64) -> Result<(Digraph, InputRecord)> {
    let mut record = InputRecord { role: "host", source: spec.to_string(), sha256: None };
    let parts: Vec<&str> = spec.split(':').collect();
    let d = match parts.as_slice() {
        ["rotational", n] => rotational_tournament(number(n, spec)?)?,
        ["tournament", n] => random_tournament(number(n, spec)?, seed),
        ["random", n, p] => random_digraph(number(n, spec)?, number(p, spec)?, seed)?,
        ["tt", n] => transitive_tournament(number(n, spec)?)?.to_digraph(),
        ["cycle", k] => directed_cycle(number(k, spec)?)?.to_digraph(),
        _ => {
            let path = spec.strip_prefix("file:").unwrap_or(spec);
            let (text, digest) = read(path)?;
            record.sha256 = Some(digest);
            parse_digraph(&text)?
        }
    };
    Ok((d, record))
}

/// An undirected graph file, `complete:n` or `matching:m`.
pub fn undirected(spec: &str, multigraph: bool) -> Result<(UndirectedGraph, InputRecord)> {
    let mut record = InputRecord { role: "graph", source: spec.to_string(), sha256: None };
    let g = match spec.split_once(':') {
        Some(("complete", n)) => UndirectedGraph::complete(number(n, spec)?),
        Some(("matching", m)) => UndirectedGraph::perfect_matching(number(m, spec)?),
        _ => {
            let path = spec.strip_prefix("file:").unwrap_or(spec);
            let (text, digest) = read(path)?;
            record.sha256 = Some(digest);
            parse_undirected(&text, multigraph)?
        }
    };
    Ok((g, record))
}
