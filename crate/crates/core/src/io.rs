//! Edge-list text format.
//!
//! ```text
//! c any comment
//! p edge <n> <m>
//! c label <i> <name>
//! e <u> <v>
//! ```
//!
//! Vertices are 1-based in the file. `c label` lines name vertices and must
//! follow the header; other comment lines are ignored. Duplicate edges and
//! self-loops are rejected, and the header's edge count must match.

use crate::error::{Error, Result};
use crate::graph::Graph;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut graph: Option<Graph> = None;
    let mut declared_edges = 0usize;
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut any_label = false;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        match kind {
            "c" => {
                if tok.next() != Some("label") {
                    continue;
                }
                let g = graph
                    .as_ref()
                    .ok_or_else(|| parse_err(line_no, "label before header"))?;
                let (Some(idx), Some(name), None) = (tok.next(), tok.next(), tok.next()) else {
                    return Err(parse_err(line_no, "expected `c label <vertex> <name>`"));
                };
                let v = vertex(idx, g.vertex_count(), line_no)?;
                if labels[v].replace(name.to_string()).is_some() {
                    return Err(parse_err(line_no, format!("vertex {idx} labelled twice")));
                }
                any_label = true;
            }
            "p" => {
                if graph.is_some() {
                    return Err(parse_err(line_no, "second header"));
                }
                let (Some("edge"), Some(n), Some(m), None) = (tok.next(), tok.next(), tok.next(), tok.next()) else {
                    return Err(parse_err(line_no, "expected `p edge <vertices> <edges>`"));
                };
                let n: usize = n
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad vertex count `{n}`")))?;
                declared_edges = m
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("bad edge count `{m}`")))?;
                graph = Some(Graph::new(n));
                labels = vec![None; n];
            }
            "e" => {
                let g = graph.as_mut().ok_or_else(|| parse_err(line_no, "edge before header"))?;
                let (Some(u), Some(v), None) = (tok.next(), tok.next(), tok.next()) else {
                    return Err(parse_err(line_no, "expected `e <u> <v>`"));
                };
                let (u, v) = (
                    vertex(u, g.vertex_count(), line_no)?,
                    vertex(v, g.vertex_count(), line_no)?,
                );
                if u == v {
                    return Err(parse_err(line_no, format!("self-loop on vertex {}", u + 1)));
                }
                if !g.add_edge(u, v).expect("endpoints checked") {
                    return Err(parse_err(line_no, format!("duplicate edge {} {}", u + 1, v + 1)));
                }
            }
            other => return Err(parse_err(line_no, format!("unknown line type `{other}`"))),
        }
    }

    let mut g = graph.ok_or_else(|| parse_err(text.lines().count().max(1), "missing `p edge` header"))?;
    if g.edge_count() != declared_edges {
        return Err(parse_err(
            text.lines().count(),
            format!("header declares {declared_edges} edges, found {}", g.edge_count()),
        ));
    }
    if any_label {
        let names: Option<Vec<String>> = labels.into_iter().collect();
        let names = names.ok_or_else(|| parse_err(text.lines().count(), "labels given for only some vertices"))?;
        g.set_labels(names)?;
    }
    Ok(g)
}

fn vertex(tok: &str, n: usize, line: usize) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
        Ok(v) => Err(parse_err(line, format!("vertex {v} out of range 1..={n}"))),
        Err(_) => Err(parse_err(line, format!("bad vertex `{tok}`"))),
    }
}

/// Canonical text: header, label lines, then edges sorted by `(min, max)`.
pub fn write_graph(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.vertex_count(), g.edge_count());
    if let Some(labels) = g.labels() {
        for (i, l) in labels.iter().enumerate() {
            out.push_str(&format!("c label {} {}\n", i + 1, l));
        }
    }
    for e in g.edges() {
        out.push_str(&format!("e {} {}\n", e.lo() + 1, e.hi() + 1));
    }
    out
}
