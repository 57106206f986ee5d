//! Polynomial-time reduction rules, applied to a fixpoint before every
//! branching decision.
//!
//! Rules are tried in the order 1..=6 and the scan restarts at rule 1 after
//! any rule changes the instance. Rules 1 and 2 end the run with an answer.
//! Rule 3 removes whole components, so residual instances carry an `origin`
//! map back to the vertex indices of the graph the search started from; all
//! reported edges use those original indices.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{DistanceMatrix, Edge, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    /// Remaining deletion budget `k`; negative means the instance is dead.
    pub budget: i64,
    origin: Vec<usize>,
}

impl Instance {
    pub fn new(graph: Graph, budget: i64) -> Self {
        let origin = (0..graph.vertex_count()).collect();
        Instance { graph, budget, origin }
    }

    /// Original index of current vertex `v`.
    pub fn origin_of(&self, v: usize) -> usize {
        self.origin[v]
    }

    pub fn original_edge(&self, e: Edge) -> Edge {
        Edge::new(self.origin[e.lo()], self.origin[e.hi()])
    }

    /// Same vertex identities, new graph and budget.
    pub fn with_graph(&self, graph: Graph, budget: i64) -> Instance {
        debug_assert_eq!(graph.vertex_count(), self.origin.len());
        Instance {
            graph,
            budget,
            origin: self.origin.clone(),
        }
    }

    fn restricted_to(&self, keep: &[usize]) -> Instance {
        Instance {
            graph: self.graph.induced_subgraph(keep),
            budget: self.budget,
            origin: keep.iter().map(|&v| self.origin[v]).collect(),
        }
    }

    fn without_edges(&self, edges: &[Edge]) -> Instance {
        let mut graph = self.graph.clone();
        for &e in edges {
            graph.remove_edge(e).expect("rule deletes existing edges only");
        }
        Instance {
            graph,
            budget: self.budget - edges.len() as i64,
            origin: self.origin.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    #[serde(rename = "rule1")]
    NegativeBudget,
    #[serde(rename = "rule2")]
    EmptyGraph,
    #[serde(rename = "rule3")]
    TwoClubComponent,
    #[serde(rename = "rule4")]
    HeavyCommonNeighbors,
    #[serde(rename = "rule5")]
    DegreeTwoComponent,
    #[serde(rename = "rule6")]
    ThreeTail,
}

impl RuleId {
    pub fn number(self) -> u8 {
        match self {
            RuleId::NegativeBudget => 1,
            RuleId::EmptyGraph => 2,
            RuleId::TwoClubComponent => 3,
            RuleId::HeavyCommonNeighbors => 4,
            RuleId::DegreeTwoComponent => 5,
            RuleId::ThreeTail => 6,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "rule{}", self.number())
    }
}

/// One entry of the reduction log. Vertices and edges use original indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleApplication {
    pub rule: RuleId,
    pub vertices: Vec<usize>,
    pub edges: Vec<Edge>,
    pub budget_decrease: usize,
}

/// A rule that changed the instance.
#[derive(Debug, Clone)]
pub struct RuleFiring {
    pub instance: Instance,
    pub application: RuleApplication,
}

impl RuleFiring {
    fn deleting(inst: &Instance, rule: RuleId, edges: Vec<Edge>) -> RuleFiring {
        let residual = inst.without_edges(&edges);
        let mut vertices: Vec<usize> = edges.iter().flat_map(|e| [e.lo(), e.hi()]).collect();
        vertices.sort_unstable();
        vertices.dedup();
        RuleFiring {
            application: RuleApplication {
                rule,
                vertices: vertices.into_iter().map(|v| inst.origin_of(v)).collect(),
                budget_decrease: edges.len(),
                edges: edges.into_iter().map(|e| inst.original_edge(e)).collect(),
            },
            instance: residual,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReductionStatus {
    Reduced,
    AnsweredYes,
    AnsweredNo,
}

#[derive(Debug, Clone)]
pub struct ReductionOutcome {
    pub status: ReductionStatus,
    /// Residual instance; empty when answered yes.
    pub instance: Instance,
    /// Edges deleted by rules, in original indices.
    pub deleted: BTreeSet<Edge>,
    pub rule_log: Vec<RuleApplication>,
}

/// Applies rules 1-6 until none fires or an answer is reached.
pub fn reduce_exhaustively(inst: Instance) -> ReductionOutcome {
    let mut current = inst;
    let mut deleted = BTreeSet::new();
    let mut rule_log = Vec::new();
    let status = loop {
        if current.budget < 0 {
            rule_log.push(terminal(RuleId::NegativeBudget));
            break ReductionStatus::AnsweredNo;
        }
        if current.graph.is_empty() {
            rule_log.push(terminal(RuleId::EmptyGraph));
            break ReductionStatus::AnsweredYes;
        }
        let firing = rule3_strip_two_club_components(&current)
            .or_else(|| rule4_heavy_common_neighbors(&current))
            .or_else(|| rule5_resolve_degree_two_component(&current))
            .or_else(|| rule6_three_tail(&current));
        match firing {
            Some(f) => {
                deleted.extend(f.application.edges.iter().copied());
                rule_log.push(f.application);
                current = f.instance;
            }
            None => break ReductionStatus::Reduced,
        }
    };
    ReductionOutcome {
        status,
        instance: current,
        deleted,
        rule_log,
    }
}

fn terminal(rule: RuleId) -> RuleApplication {
    RuleApplication {
        rule,
        vertices: Vec::new(),
        edges: Vec::new(),
        budget_decrease: 0,
    }
}

/// Rule 3: drop every component of diameter at most two (isolated vertices
/// included).
pub fn rule3_strip_two_club_components(inst: &Instance) -> Option<RuleFiring> {
    let g = &inst.graph;
    let dm = g.distance_matrix();
    let mut keep = Vec::new();
    let mut removed = Vec::new();
    for comp in g.components() {
        if is_two_club(&comp, &dm) {
            removed.extend(comp);
        } else {
            keep.extend(comp);
        }
    }
    if removed.is_empty() {
        return None;
    }
    keep.sort_unstable();
    removed.sort_unstable();
    Some(RuleFiring {
        application: RuleApplication {
            rule: RuleId::TwoClubComponent,
            vertices: removed.iter().map(|&v| inst.origin_of(v)).collect(),
            edges: Vec::new(),
            budget_decrease: 0,
        },
        instance: inst.restricted_to(&keep),
    })
}

fn is_two_club(comp: &[usize], dm: &DistanceMatrix) -> bool {
    comp.iter().all(|&u| comp.iter().all(|&v| dm.raw(u, v) <= 2))
}

/// Rule 4: non-adjacent `a, b` with more than `k` common neighbours end up in
/// one 2-club, so neighbours of either one that are three or more steps from
/// the other are cut off. Only fires when that cut is non-empty.
pub fn rule4_heavy_common_neighbors(inst: &Instance) -> Option<RuleFiring> {
    let g = &inst.graph;
    if inst.budget < 0 {
        return None;
    }
    let k = inst.budget as usize;
    let n = g.vertex_count();
    let mut dm: Option<DistanceMatrix> = None;
    for a in 0..n {
        if g.degree(a) <= k {
            continue;
        }
        for b in a + 1..n {
            if g.has_edge(a, b) || g.degree(b) <= k {
                continue;
            }
            let common = g.neighbors(a).intersection(g.neighbors(b)).count();
            if common <= k {
                continue;
            }
            let dm = dm.get_or_insert_with(|| g.distance_matrix());
            let cut: Vec<Edge> = g
                .neighbors(a)
                .iter()
                .filter(|&&u| dm.farther_than(u, b, 2))
                .map(|&u| Edge::new(a, u))
                .chain(
                    g.neighbors(b)
                        .iter()
                        .filter(|&&u| dm.farther_than(u, a, 2))
                        .map(|&u| Edge::new(b, u)),
                )
                .collect();
            if !cut.is_empty() {
                return Some(RuleFiring::deleting(inst, RuleId::HeavyCommonNeighbors, cut));
            }
        }
    }
    None
}

/// Rule 5: optimally split the first path or cycle component (max degree two)
/// that is not already a 2-club.
pub fn rule5_resolve_degree_two_component(inst: &Instance) -> Option<RuleFiring> {
    let g = &inst.graph;
    let dm = g.distance_matrix();
    let comp = g
        .components()
        .into_iter()
        .find(|comp| comp.iter().all(|&v| g.degree(v) <= 2) && !is_two_club(comp, &dm))?;
    let mut cut = Vec::new();
    let order = match comp.iter().find(|&&v| g.degree(v) <= 1) {
        Some(&end) => walk(g, end, None),
        None => {
            // cycle: drop its smallest edge, then split the remaining path
            let u = comp[0];
            let w = *g.neighbors(u).iter().next().unwrap();
            cut.push(Edge::new(u, w));
            walk(g, u, Some(w))
        }
    };
    cut.extend(path_cut(&order));
    Some(RuleFiring::deleting(inst, RuleId::DegreeTwoComponent, cut))
}

/// Vertices of a path or cycle in walk order from `start`, never stepping
/// onto `skip` first.
fn walk(g: &Graph, start: usize, skip: Option<usize>) -> Vec<usize> {
    let mut order = vec![start];
    let mut prev = skip.unwrap_or(usize::MAX);
    let mut cur = start;
    loop {
        let next = g.neighbors(cur).iter().copied().find(|&w| w != prev);
        match next {
            Some(w) if w != start => {
                order.push(w);
                prev = cur;
                cur = w;
            }
            _ => break,
        }
    }
    order
}

/// Edges `v3v4, v6v7, ...` of a path listed as `v1..vs`.
fn path_cut(order: &[usize]) -> Vec<Edge> {
    (3..order.len())
        .step_by(3)
        .map(|i| Edge::new(order[i - 1], order[i]))
        .collect()
}

/// Rule 6: a 3-tail `a-b-c-d` (`d` pendant, `b, c` of degree two, `a` of
/// degree at least two) loses `ab`.
pub fn rule6_three_tail(inst: &Instance) -> Option<RuleFiring> {
    let g = &inst.graph;
    let other = |v: usize, not: usize| g.neighbors(v).iter().copied().find(|&w| w != not);
    for d in 0..g.vertex_count() {
        if g.degree(d) != 1 {
            continue;
        }
        let c = *g.neighbors(d).iter().next().unwrap();
        if g.degree(c) != 2 {
            continue;
        }
        let b = other(c, d).unwrap();
        if g.degree(b) != 2 {
            continue;
        }
        let a = other(b, c).unwrap();
        if a == d || g.degree(a) < 2 {
            continue;
        }
        return Some(RuleFiring::deleting(inst, RuleId::ThreeTail, vec![Edge::new(a, b)]));
    }
    None
}

/// Scans for any applicable rule among 3-6; used to check fixpoints.
pub fn any_rule_applies(inst: &Instance) -> bool {
    rule3_strip_two_club_components(inst).is_some()
        || rule4_heavy_common_neighbors(inst).is_some()
        || rule5_resolve_degree_two_component(inst).is_some()
        || rule6_three_tail(inst).is_some()
}
