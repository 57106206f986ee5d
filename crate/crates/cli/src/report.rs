//! JSON payloads. Field names are a stable interface; vertices are 1-based
//! and edges are sorted `[lo, hi]` pairs.

use serde::Serialize;
use twoclub_core::reduction::{RuleApplication, RuleId};
use twoclub_core::solver::SearchStats;
use twoclub_core::{Edge, Graph};

pub const TOOL_VERSION: &str = concat!("twoclub ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Yes,
    No,
    Opt,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub status: Status,
    pub k_used: usize,
    pub deleted_edges: Vec<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deleted_labels: Option<Vec<[String; 2]>>,
    pub stats: SearchStats,
    pub reductions: Vec<ReportedRule>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
    pub tool_version: &'static str,
}

#[derive(Debug, Serialize)]
pub struct ReportedRule {
    pub rule: RuleId,
    pub vertices: Vec<usize>,
    pub edges: Vec<[usize; 2]>,
    pub budget_delta: usize,
}

impl From<&RuleApplication> for ReportedRule {
    fn from(a: &RuleApplication) -> Self {
        ReportedRule {
            rule: a.rule,
            vertices: a.vertices.iter().map(|v| v + 1).collect(),
            edges: one_based(&a.edges),
            budget_delta: a.budget_decrease,
        }
    }
}

/// Wall-clock milliseconds per phase.
#[derive(Debug, Default, Serialize)]
pub struct Timings {
    pub parse_ms: f64,
    pub solve_ms: f64,
    pub verify_ms: f64,
}

pub fn one_based<'a>(edges: impl IntoIterator<Item = &'a Edge>) -> Vec<[usize; 2]> {
    let mut out: Vec<[usize; 2]> = edges.into_iter().map(|e| [e.lo() + 1, e.hi() + 1]).collect();
    out.sort_unstable();
    out
}

pub fn labelled<'a>(g: &Graph, edges: impl IntoIterator<Item = &'a Edge>) -> Option<Vec<[String; 2]>> {
    g.labels()?;
    let mut sorted: Vec<&Edge> = edges.into_iter().collect();
    sorted.sort_unstable();
    Some(sorted.into_iter().map(|e| [g.label(e.lo()), g.label(e.hi())]).collect())
}

pub fn render_edges(g: &Graph, edges: &[[usize; 2]]) -> String {
    let names: Vec<String> = edges
        .iter()
        .map(|&[u, v]| format!("{}-{}", g.label(u - 1), g.label(v - 1)))
        .collect();
    if names.is_empty() {
        "(none)".into()
    } else {
        names.join(", ")
    }
}
