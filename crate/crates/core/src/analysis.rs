//! Branching numbers, branch-completeness checks, and the Liu et al.
//! Case 2.2.4 rule table with its omitted `{1, 4}` branch.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::graph::{delete_edges, Edge, Graph};
use crate::oracle;
use crate::solver::SearchStats;

pub const DEFAULT_TOLERANCE: f64 = 1e-6;

/// Budget decrements of a branching rule, one per branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchingVector {
    deltas: Vec<u32>,
}

impl BranchingVector {
    pub fn new(deltas: Vec<u32>) -> Result<Self> {
        if deltas.is_empty() {
            return Err(Error::InvalidVector("no branches".into()));
        }
        if deltas.contains(&0) {
            return Err(Error::InvalidVector("a branch must decrease the budget".into()));
        }
        Ok(BranchingVector { deltas })
    }

    /// `count` copies of each `(delta, count)` pair.
    pub fn from_counts(counts: &[(u32, usize)]) -> Result<Self> {
        Self::new(counts.iter().flat_map(|&(d, n)| std::iter::repeat_n(d, n)).collect())
    }

    pub fn deltas(&self) -> &[u32] {
        &self.deltas
    }

    /// Compact form such as `[2,2,2,3×10,4×4]`.
    pub fn compact(&self) -> String {
        let mut sorted = self.deltas.clone();
        sorted.sort_unstable();
        let mut parts = Vec::new();
        let mut i = 0;
        while i < sorted.len() {
            let j = sorted[i..].iter().take_while(|&&d| d == sorted[i]).count();
            if j > 3 {
                parts.push(format!("{}×{}", sorted[i], j));
            } else {
                parts.extend(std::iter::repeat_n(sorted[i].to_string(), j));
            }
            i += j;
        }
        format!("[{}]", parts.join(","))
    }
}

/// Unique root `x >= 1` of `sum_i x^(-delta_i) = 1`, by bisection on
/// `[1, #branches]`. A single branch gives 1.
pub fn branching_number(v: &BranchingVector, tol: f64) -> f64 {
    let excess = |x: f64| v.deltas.iter().map(|&d| x.powi(-(d as i32))).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (1.0f64, v.deltas.len() as f64);
    if excess(lo) <= 0.0 {
        return 1.0;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if excess(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A branching rule together with the base of the running time it is
/// claimed to give.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Recurrence {
    pub name: &'static str,
    pub vector: BranchingVector,
    pub claimed_base: f64,
}

/// Every branching rule of the algorithm, the trivial three-way split, and
/// the original and repaired Liu et al. Case 2.2.4 rules.
pub fn recurrences() -> Vec<Recurrence> {
    let rec = |name, counts: &[(u32, usize)], claimed_base| Recurrence {
        name,
        vector: BranchingVector::from_counts(counts).unwrap(),
        claimed_base,
    };
    vec![
        rec("simple", &[(1, 3)], 3.0),
        rec("case1", &[(1, 2), (2, 1)], 2.415),
        rec("case2", &[(1, 2)], 2.0),
        rec("case3", &[(1, 1), (2, 4)], 2.562),
        rec("case4.1", &[(1, 1), (2, 4)], 2.562),
        rec("case4.2.1", &[(2, 3), (3, 10), (4, 4)], 2.695),
        rec("case4.2.2", &[(2, 3), (3, 11)], 2.67),
        rec("liu-2.2.4", &[(2, 3), (3, 10)], 2.62),
        rec("liu-2.2.4-fixed", &[(2, 4), (3, 10)], 2.761),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Complete,
    Incomplete,
    /// The oracle cap was hit before `OPT(g)` was known.
    Indeterminate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Completeness {
    pub verdict: Verdict,
    pub opt: Option<usize>,
    /// `min_B |B| + OPT(g - B)` over branches whose value does not exceed
    /// `OPT(g)`; `None` if there are none.
    pub best_branch_value: Option<usize>,
}

impl Completeness {
    pub fn is_complete(&self) -> bool {
        self.verdict == Verdict::Complete
    }
}

/// A stateless branching step on `g` is complete iff
/// `OPT(g) = min_B (|B| + OPT(g - B))`. Since every branch value is at least
/// `OPT(g)`, each residual is searched only up to `OPT(g) - |B|`.
pub fn check_branch_completeness(g: &Graph, branches: &[Vec<Edge>], cap: usize) -> Result<Completeness> {
    let Some(opt) = oracle::opt_3k(g, cap)? else {
        return Ok(Completeness {
            verdict: Verdict::Indeterminate,
            opt: None,
            best_branch_value: None,
        });
    };
    let mut best: Option<usize> = None;
    for b in branches {
        if b.len() > opt {
            continue;
        }
        let residual = delete_edges(g, b)?;
        if let Some(rest) = oracle::opt_3k(&residual, opt - b.len())? {
            let value = b.len() + rest;
            best = Some(best.map_or(value, |x| x.min(value)));
        }
    }
    Ok(Completeness {
        verdict: if best == Some(opt) {
            Verdict::Complete
        } else {
            Verdict::Incomplete
        },
        opt: Some(opt),
        best_branch_value: best,
    })
}

/// A gadget whose edges are numbered from 1, and branches given as sets of
/// those numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BranchRuleTable {
    pub gadget: Graph,
    pub numbered_edges: Vec<Edge>,
    pub branches: Vec<BTreeSet<usize>>,
}

impl BranchRuleTable {
    pub fn edge(&self, number: usize) -> Edge {
        self.numbered_edges[number - 1]
    }

    pub fn branch_edge_sets(&self) -> Vec<Vec<Edge>> {
        self.branches
            .iter()
            .map(|b| b.iter().map(|&i| self.edge(i)).collect())
            .collect()
    }

    pub fn branching_vector(&self) -> BranchingVector {
        BranchingVector::new(self.branches.iter().map(|b| b.len() as u32).collect()).unwrap()
    }

    pub fn with_branch(&self, numbers: &[usize]) -> BranchRuleTable {
        let mut t = self.clone();
        t.branches.push(numbers.iter().copied().collect());
        t
    }
}

/// Liu et al.'s Case 2.2.4 rule, edges numbered 1=ts, 2=ut, 3=vu, 4=sw,
/// 5=ux, 6=xw, 7=vy, 8=yw.
pub fn liu_case_224() -> BranchRuleTable {
    let gadget = fixtures::liu_gadget();
    let id = |s: &str| gadget.vertex_by_label(s).unwrap();
    let numbered_edges = [
        ("t", "s"),
        ("u", "t"),
        ("v", "u"),
        ("s", "w"),
        ("u", "x"),
        ("x", "w"),
        ("v", "y"),
        ("y", "w"),
    ]
    .iter()
    .map(|&(p, q)| Edge::new(id(p), id(q)))
    .collect();
    let branches: [&[usize]; 13] = [
        &[1, 5, 7],
        &[1, 5, 8],
        &[1, 6, 7],
        &[1, 6, 8],
        &[2, 4],
        &[2, 5, 7],
        &[2, 5, 8],
        &[2, 6, 7],
        &[2, 6, 8],
        &[3, 7],
        &[3, 8],
        &[3, 4, 5],
        &[3, 4, 6],
    ];
    BranchRuleTable {
        gadget,
        numbered_edges,
        branches: branches.iter().map(|b| b.iter().copied().collect()).collect(),
    }
}

/// True when no branch deletes both `ts` (1) and `sw` (4) while keeping `ut`
/// (2) and `vu` (3), i.e. the situation "1 and 4 both deleted" is uncovered.
pub fn has_one_four_gap(table: &BranchRuleTable) -> bool {
    !table
        .branches
        .iter()
        .any(|b| b.contains(&1) && b.contains(&4) && !b.contains(&2) && !b.contains(&3))
}

pub fn liu_gap_check() -> bool {
    has_one_four_gap(&liu_case_224())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LiuGapReport {
    pub gap: bool,
    pub original_vector: String,
    pub original_number: f64,
    pub gap_after_fix: bool,
    pub fixed_vector: String,
    pub fixed_number: f64,
}

/// Gap check on the published table and on the table with `{1, 4}` added.
pub fn liu_gap_report(tol: f64) -> LiuGapReport {
    let original = liu_case_224();
    let fixed = original.with_branch(&[1, 4]);
    LiuGapReport {
        gap: has_one_four_gap(&original),
        original_vector: original.branching_vector().compact(),
        original_number: branching_number(&original.branching_vector(), tol),
        gap_after_fix: has_one_four_gap(&fixed),
        fixed_vector: fixed.branching_vector().compact(),
        fixed_number: branching_number(&fixed.branching_vector(), tol),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub tried: usize,
    /// The rule applied to the bare gadget.
    pub standalone: Completeness,
    /// First decorated gadget on which the rule is incomplete, as an edge
    /// list over 0-based vertices (gadget vertices first).
    pub witness: Option<WitnessGraph>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessGraph {
    pub vertex_count: usize,
    pub labels: Vec<String>,
    pub edges: Vec<Edge>,
    pub completeness: Completeness,
}

/// Seeded search over the gadget plus one to three additions (a new vertex
/// joined to one or two existing vertices, or a new edge) for a graph on
/// which Liu's table is incomplete. Best effort: `None` means nothing was
/// found within `budget` tries.
pub fn liu_witness_search(budget: usize, seed: u64) -> Result<WitnessSearch> {
    const CAP: usize = 8;
    let table = liu_case_224();
    let branches = table.branch_edge_sets();
    let standalone = check_branch_completeness(&table.gadget, &branches, CAP)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for tried in 1..=budget {
        let g = decorate(&table.gadget, &mut rng);
        let c = check_branch_completeness(&g, &branches, CAP)?;
        if c.verdict == Verdict::Incomplete {
            return Ok(WitnessSearch {
                tried,
                standalone,
                witness: Some(WitnessGraph {
                    vertex_count: g.vertex_count(),
                    labels: g.labels().map(<[String]>::to_vec).unwrap_or_default(),
                    edges: g.edges().collect(),
                    completeness: c,
                }),
            });
        }
    }
    Ok(WitnessSearch {
        tried: budget,
        standalone,
        witness: None,
    })
}

fn decorate(base: &Graph, rng: &mut ChaCha8Rng) -> Graph {
    let additions = rng.gen_range(1..=3);
    let mut labels: Vec<String> = base.labels().map(<[String]>::to_vec).unwrap_or_default();
    let mut edges: Vec<(usize, usize)> = base.edges().map(Edge::endpoints).collect();
    let mut n = base.vertex_count();
    for _ in 0..additions {
        if rng.gen_bool(0.5) {
            let first = rng.gen_range(0..n);
            edges.push((n, first));
            if rng.gen_bool(0.5) {
                let second = rng.gen_range(0..n);
                if second != first {
                    edges.push((n, second));
                }
            }
            labels.push(format!("n{}", n - base.vertex_count() + 1));
            n += 1;
        } else {
            let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if u != v {
                edges.push((u, v));
            }
        }
    }
    let mut g = Graph::new(n);
    for (u, v) in edges {
        g.add_edge(u, v).unwrap();
    }
    g.with_labels(labels).unwrap()
}

/// Per-level growth `nodes^(1/k)` of a search tree; 1 for `k = 0`.
pub fn empirical_branching(stats: &SearchStats, k: usize) -> f64 {
    if k == 0 || stats.nodes_expanded == 0 {
        return 1.0;
    }
    (stats.nodes_expanded as f64).powf(1.0 / k as f64)
}
