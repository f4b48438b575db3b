//! Line-oriented text format.
//!
//! ```text
//! # comment
//! 3
//! 0 1 1
//! 1 2 5/2
//! 2 0        # weight defaults to 1
//! ```

use num_traits::One;

use super::{Digraph, Pattern, UndirectedGraph};
use crate::error::{Error, Result};
use crate::num::{format_rational, parse_rational, Rational};

struct Record {
    line: usize,
    u: usize,
    v: usize,
    weight: Option<Rational>,
}

fn parse_records(text: &str) -> Result<(usize, Vec<Record>)> {
    let mut vertex_count = None;
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let err = |message: String| Error::Parse { line, message };
        if vertex_count.is_none() {
            if fields.len() != 1 {
                return Err(err(format!("expected vertex count, found {content:?}")));
            }
            let n = fields[0].parse::<usize>().map_err(|_| err(format!("bad vertex count {:?}", fields[0])))?;
            vertex_count = Some(n);
            continue;
        }
        if !(2..=3).contains(&fields.len()) {
            return Err(err(format!("expected `tail head [weight]`, found {content:?}")));
        }
        let u = fields[0].parse::<usize>().map_err(|_| err(format!("bad vertex {:?}", fields[0])))?;
        let v = fields[1].parse::<usize>().map_err(|_| err(format!("bad vertex {:?}", fields[1])))?;
        let weight = match fields.get(2) {
            Some(w) => Some(parse_rational(w).map_err(|_| err(format!("bad weight {w:?}")))?),
            None => None,
        };
        records.push(Record { line, u, v, weight });
    }
    let n = vertex_count.ok_or(Error::Parse { line: 0, message: "missing vertex count".into() })?;
    Ok((n, records))
}

/// Semantic errors are reported against the offending line.
fn at_line<T>(line: usize, result: Result<T>) -> Result<T> {
    result.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::Parse { line, message: other.to_string() },
    })
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    let (n, records) = parse_records(text)?;
    for r in &records {
        at_line(r.line, Digraph::new(n, [(r.u, r.v, r.weight.clone().unwrap_or_else(Rational::one))]))?;
    }
    Digraph::new(n, records.into_iter().map(|r| (r.u, r.v, r.weight.unwrap_or_else(Rational::one))))
}

pub fn serialize_digraph(d: &Digraph) -> String {
    let mut out = format!("{}\n", d.vertex_count());
    for a in d.arcs() {
        out.push_str(&format!("{} {} {}\n", a.tail, a.head, format_rational(&a.weight)));
    }
    out
}

pub fn parse_pattern(text: &str) -> Result<Pattern> {
    let (n, records) = parse_records(text)?;
    if let Some(r) = records.iter().find(|r| r.weight.is_some()) {
        return Err(Error::Parse { line: r.line, message: "pattern arcs cannot carry weights".into() });
    }
    let mut arcs = Vec::with_capacity(records.len());
    for r in &records {
        arcs.push((r.u, r.v));
        at_line(r.line, Pattern::new(n.max(1), &arcs))?;
    }
    Pattern::new(n, &arcs)
}

pub fn serialize_pattern(p: &Pattern) -> String {
    let mut out = format!("{}\n", p.vertex_count());
    for (u, v) in p.arcs() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub fn parse_undirected(text: &str, multigraph: bool) -> Result<UndirectedGraph> {
    let (n, records) = parse_records(text)?;
    let edges: Vec<_> = records.iter().map(|r| (r.u, r.v, r.weight.clone().unwrap_or_else(Rational::one))).collect();
    for (i, r) in records.iter().enumerate() {
        at_line(r.line, UndirectedGraph::new(n, edges[..=i].iter().cloned(), multigraph))?;
    }
    UndirectedGraph::new(n, edges, multigraph)
}
