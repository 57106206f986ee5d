//! Bounded search tree for 2-Club Cluster Edge Deletion.
//!
//! Every search node reduces its instance to a fixpoint, then picks the first
//! applicable branching case in the order
//! `Case1, Case2, Case3, Case4.1, Case4.2.1, Case4.2.2` and recurses once per
//! branch set. Branches are plain edge-deletion sets with no permanent-edge
//! bookkeeping: each case's sets are chosen so that every minimal optimal
//! solution contains at least one of them, which is all a stateless
//! recursion needs.
//!
//! When none of the cases can be instantiated with pairwise distinct roles
//! the node falls back to the three-way split on the canonical conflict
//! quadruple and bumps [`SearchStats::fallback_count`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{conflict_quadruples, delete_edges, ConflictQuadruple, DistanceMatrix, Edge, Graph};
use crate::reduction::{
    reduce_exhaustively, rule3_strip_two_club_components, rule5_resolve_degree_two_component, rule6_three_tail,
    Instance, ReductionStatus, RuleId,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseId {
    #[serde(rename = "case1")]
    Case1,
    #[serde(rename = "case2")]
    Case2,
    #[serde(rename = "case3")]
    Case3,
    #[serde(rename = "case4.1")]
    Case41,
    #[serde(rename = "case4.2.1")]
    Case421,
    #[serde(rename = "case4.2.2")]
    Case422,
    #[serde(rename = "fallback")]
    FallbackGeneric,
}

impl CaseId {
    pub const ALL: [CaseId; 7] = [
        CaseId::Case1,
        CaseId::Case2,
        CaseId::Case3,
        CaseId::Case41,
        CaseId::Case421,
        CaseId::Case422,
        CaseId::FallbackGeneric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseId::Case1 => "case1",
            CaseId::Case2 => "case2",
            CaseId::Case3 => "case3",
            CaseId::Case41 => "case4.1",
            CaseId::Case421 => "case4.2.1",
            CaseId::Case422 => "case4.2.2",
            CaseId::FallbackGeneric => "fallback",
        }
    }

    pub fn from_name(name: &str) -> Option<CaseId> {
        CaseId::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    A,
    B,
    C,
    D,
    W,
    X,
    Y,
    V,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseDescriptor {
    pub case: CaseId,
    pub roles: BTreeMap<Role, usize>,
    /// One edge set per branch, in the order the search explores them.
    pub branch_sets: Vec<Vec<Edge>>,
}

impl CaseDescriptor {
    pub fn role(&self, r: Role) -> Option<usize> {
        self.roles.get(&r).copied()
    }

    /// Branch-set sizes, i.e. the budget decrements of each branch.
    pub fn branching_vector(&self) -> Vec<usize> {
        self.branch_sets.iter().map(Vec::len).collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub per_case_counts: BTreeMap<CaseId, u64>,
    pub per_rule_counts: BTreeMap<RuleId, u64>,
    pub fallback_count: u64,
    pub max_depth: u64,
}

impl SearchStats {
    pub fn merge(&mut self, other: &SearchStats) {
        self.nodes_expanded += other.nodes_expanded;
        for (&c, &n) in &other.per_case_counts {
            *self.per_case_counts.entry(c).or_default() += n;
        }
        for (&r, &n) in &other.per_rule_counts {
            *self.per_rule_counts.entry(r).or_default() += n;
        }
        self.fallback_count += other.fallback_count;
        self.max_depth = self.max_depth.max(other.max_depth);
    }

    /// Nodes that branched, whatever case they used.
    pub fn branching_nodes(&self) -> u64 {
        self.per_case_counts.values().sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub deleted: BTreeSet<Edge>,
}

impl Solution {
    pub fn cost(&self) -> usize {
        self.deleted.len()
    }
}

#[derive(Debug, Clone)]
pub struct Decision {
    pub answer: bool,
    pub solution: Option<Solution>,
    pub stats: SearchStats,
}

#[derive(Debug, Clone)]
pub struct Minimum {
    pub opt: usize,
    pub solution: Solution,
    pub stats: SearchStats,
}

type Finder = fn(&Graph, &DistanceMatrix, ConflictQuadruple) -> Option<CaseDescriptor>;

/// Case detection on a graph that is reduced under rules 3, 5 and 6 and
/// still has a conflict quadruple.
pub fn detect_case(g: &Graph) -> Result<CaseDescriptor> {
    let probe = Instance::new(g.clone(), 0);
    if rule3_strip_two_club_components(&probe).is_some()
        || rule5_resolve_degree_two_component(&probe).is_some()
        || rule6_three_tail(&probe).is_some()
    {
        return Err(Error::CasePrecondition("a reduction rule still applies"));
    }
    let dm = g.distance_matrix();
    // rule 3 is exhausted and the graph is non-empty, so a conflict exists
    Ok(detect(g, &dm))
}

fn detect(g: &Graph, dm: &DistanceMatrix) -> CaseDescriptor {
    if let Some(d) = case1(g, dm) {
        return d;
    }
    let quads = conflict_quadruples(g, dm);
    let canonical = *quads.first().expect("reduced non-empty graph has a conflict");
    if quads.iter().all(|q| g.degree(q.a) == 1 && g.degree(q.d) == 1) {
        let ConflictQuadruple { a, b, c, d } = canonical;
        return descriptor(
            CaseId::Case2,
            &[(Role::A, a), (Role::B, b), (Role::C, c), (Role::D, d)],
            vec![vec![Edge::new(a, b)], vec![Edge::new(c, d)]],
        );
    }
    let oriented: Vec<ConflictQuadruple> = quads.iter().copied().filter(|q| g.degree(q.d) >= 2).collect();
    let finders: [Finder; 4] = [case3, case41, case421, case422];
    for find in finders {
        if let Some(d) = oriented.iter().find_map(|&q| find(g, dm, q)) {
            return d;
        }
    }
    let ConflictQuadruple { a, b, c, d } = canonical;
    descriptor(
        CaseId::FallbackGeneric,
        &[(Role::A, a), (Role::B, b), (Role::C, c), (Role::D, d)],
        canonical.edges().iter().map(|&e| vec![e]).collect(),
    )
}

fn descriptor(case: CaseId, roles: &[(Role, usize)], branch_sets: Vec<Vec<Edge>>) -> CaseDescriptor {
    CaseDescriptor {
        case,
        roles: roles.iter().copied().collect(),
        branch_sets,
    }
}

/// Induced `a-b-c` whose ends have at least two neighbours, in total, that
/// are three or more steps from the opposite end. Picks the triple with the
/// most such neighbours, lexicographically first among ties.
fn case1(g: &Graph, dm: &DistanceMatrix) -> Option<CaseDescriptor> {
    let mut best: Option<((usize, usize, usize), Vec<Edge>)> = None;
    for a in 0..g.vertex_count() {
        for &b in g.neighbors(a) {
            for &c in g.neighbors(b).range(a + 1..) {
                if g.has_edge(a, c) {
                    continue;
                }
                let cut: Vec<Edge> = far_neighbors(g, dm, a, c)
                    .map(|u| Edge::new(a, u))
                    .chain(far_neighbors(g, dm, c, a).map(|u| Edge::new(c, u)))
                    .collect();
                if cut.len() >= 2 && best.as_ref().is_none_or(|(_, e)| cut.len() > e.len()) {
                    best = Some(((a, b, c), cut));
                }
            }
        }
    }
    let ((a, b, c), cut) = best?;
    Some(descriptor(
        CaseId::Case1,
        &[(Role::A, a), (Role::B, b), (Role::C, c)],
        vec![vec![Edge::new(a, b)], vec![Edge::new(b, c)], cut],
    ))
}

/// Neighbours of `v` at distance three or more from `other`.
fn far_neighbors<'a>(g: &'a Graph, dm: &'a DistanceMatrix, v: usize, other: usize) -> impl Iterator<Item = usize> + 'a {
    g.neighbors(v)
        .iter()
        .copied()
        .filter(move |&u| dm.farther_than(u, other, 2))
}

fn e(u: usize, v: usize) -> Edge {
    Edge::new(u, v)
}

fn case3(g: &Graph, _dm: &DistanceMatrix, q: ConflictQuadruple) -> Option<CaseDescriptor> {
    let ConflictQuadruple { a, b, c, d } = q;
    let w = g.neighbors(b).intersection(g.neighbors(d)).copied().find(|&w| w != c)?;
    Some(descriptor(
        CaseId::Case3,
        &[(Role::A, a), (Role::B, b), (Role::C, c), (Role::D, d), (Role::W, w)],
        vec![
            vec![e(a, b)],
            vec![e(b, c), e(b, w)],
            vec![e(c, d), e(d, w)],
            vec![e(b, c), e(d, w)],
            vec![e(c, d), e(b, w)],
        ],
    ))
}

/// `(y, x)` pairs: `y` a neighbour of `d` two steps from `b`, `x` a common
/// neighbour of `b` and `y` outside `N[d]`.
fn case4_witnesses<'a>(
    g: &'a Graph,
    dm: &'a DistanceMatrix,
    q: ConflictQuadruple,
) -> impl Iterator<Item = (usize, usize)> + 'a {
    let ConflictQuadruple { b, c, d, .. } = q;
    g.neighbors(d)
        .iter()
        .copied()
        .filter(move |&y| y != c && dm.raw(b, y) == 2)
        .flat_map(move |y| {
            g.neighbors(b)
                .intersection(g.neighbors(y))
                .copied()
                .filter(move |&x| x != d && !g.has_edge(x, d))
                .map(move |x| (y, x))
        })
}

fn case41(g: &Graph, dm: &DistanceMatrix, q: ConflictQuadruple) -> Option<CaseDescriptor> {
    let ConflictQuadruple { a, b, c, d } = q;
    let (y, x) = case4_witnesses(g, dm, q).find(|&(y, _)| dm.raw(a, y) == 3)?;
    Some(descriptor(
        CaseId::Case41,
        &[
            (Role::A, a),
            (Role::B, b),
            (Role::C, c),
            (Role::D, d),
            (Role::X, x),
            (Role::Y, y),
        ],
        vec![
            vec![e(a, b)],
            vec![e(b, c), e(b, x)],
            vec![e(c, d), e(x, y)],
            vec![e(b, x), e(c, d)],
            vec![e(b, c), e(x, y)],
        ],
    ))
}

/// `(y, x, v, w)` for `d(a, y) = 2`: `v` a common neighbour of `a` and `y`
/// with `d(v, c) = 2`, distinct from `x`, and `w` a common neighbour of `c`
/// and `v`.
fn case42_witnesses<'a>(
    g: &'a Graph,
    dm: &'a DistanceMatrix,
    q: ConflictQuadruple,
) -> impl Iterator<Item = (usize, usize, usize, usize)> + 'a {
    let ConflictQuadruple { a, c, .. } = q;
    case4_witnesses(g, dm, q)
        .filter(move |&(y, _)| dm.raw(a, y) == 2)
        .flat_map(move |(y, x)| {
            g.neighbors(a)
                .intersection(g.neighbors(y))
                .copied()
                .filter(move |&v| v != x && dm.raw(v, c) == 2)
                .flat_map(move |v| {
                    g.neighbors(c)
                        .intersection(g.neighbors(v))
                        .copied()
                        .map(move |w| (y, x, v, w))
                })
        })
}

fn case421(g: &Graph, dm: &DistanceMatrix, q: ConflictQuadruple) -> Option<CaseDescriptor> {
    let ConflictQuadruple { a, b, c, d } = q;
    let (y, x, v, w) = case42_witnesses(g, dm, q).find(|&(y, x, _, w)| w != b && w != x && w != y)?;
    let (ab, bc, cd, bx, xy, dy, av, vy, cw, vw) = (
        e(a, b),
        e(b, c),
        e(c, d),
        e(b, x),
        e(x, y),
        e(d, y),
        e(a, v),
        e(v, y),
        e(c, w),
        e(v, w),
    );
    Some(descriptor(
        CaseId::Case421,
        &[
            (Role::A, a),
            (Role::B, b),
            (Role::C, c),
            (Role::D, d),
            (Role::X, x),
            (Role::Y, y),
            (Role::V, v),
            (Role::W, w),
        ],
        vec![
            vec![dy, cd],
            vec![dy, bc],
            vec![dy, ab, bx],
            vec![dy, ab, xy],
            vec![av, ab],
            vec![av, bc, bx],
            vec![av, bc, xy],
            vec![av, cd, bx],
            vec![av, cd, xy],
            vec![vy, cd, bx],
            vec![vy, cd, xy],
            vec![vy, ab, cw],
            vec![vy, ab, vw],
            vec![vy, bc, bx, cw],
            vec![vy, bc, bx, vw],
            vec![vy, bc, xy, cw],
            vec![vy, bc, xy, vw],
        ],
    ))
}

fn case422(g: &Graph, dm: &DistanceMatrix, q: ConflictQuadruple) -> Option<CaseDescriptor> {
    let ConflictQuadruple { a, b, c, d } = q;
    let (y, x, v, _) = case42_witnesses(g, dm, q).find(|&(_, _, _, w)| w == b)?;
    let (ab, bc, cd, bx, xy, dy, av, vy, vb) = (
        e(a, b),
        e(b, c),
        e(c, d),
        e(b, x),
        e(x, y),
        e(d, y),
        e(a, v),
        e(v, y),
        e(v, b),
    );
    Some(descriptor(
        CaseId::Case422,
        &[
            (Role::A, a),
            (Role::B, b),
            (Role::C, c),
            (Role::D, d),
            (Role::X, x),
            (Role::Y, y),
            (Role::V, v),
            (Role::W, b),
        ],
        vec![
            vec![dy, cd],
            vec![dy, bc],
            vec![dy, ab, bx],
            vec![dy, ab, xy],
            vec![av, ab],
            vec![av, bc, bx],
            vec![av, bc, xy],
            vec![av, cd, bx],
            vec![av, cd, xy],
            vec![vy, cd, bx],
            vec![vy, cd, xy],
            vec![vy, bc, bx],
            vec![vy, bc, xy],
            vec![vy, ab, vb],
        ],
    ))
}

struct Search {
    stats: SearchStats,
}

impl Search {
    fn node(&mut self, inst: Instance, depth: u64) -> Option<BTreeSet<Edge>> {
        self.stats.nodes_expanded += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        let out = reduce_exhaustively(inst);
        for app in &out.rule_log {
            *self.stats.per_rule_counts.entry(app.rule).or_default() += 1;
        }
        match out.status {
            ReductionStatus::AnsweredNo => None,
            ReductionStatus::AnsweredYes => Some(out.deleted),
            ReductionStatus::Reduced => {
                let res = out.instance;
                let dm = res.graph.distance_matrix();
                let desc = detect(&res.graph, &dm);
                *self.stats.per_case_counts.entry(desc.case).or_default() += 1;
                if desc.case == CaseId::FallbackGeneric {
                    self.stats.fallback_count += 1;
                }
                for set in &desc.branch_sets {
                    let budget = res.budget - set.len() as i64;
                    if budget < 0 {
                        // rule 1 kills the child before it does any work
                        *self.stats.per_rule_counts.entry(RuleId::NegativeBudget).or_default() += 1;
                        continue;
                    }
                    let graph = delete_edges(&res.graph, set).expect("branch sets use existing edges");
                    if let Some(mut sol) = self.node(res.with_graph(graph, budget), depth + 1) {
                        sol.extend(out.deleted.iter().copied());
                        sol.extend(set.iter().map(|&e| res.original_edge(e)));
                        return Some(sol);
                    }
                }
                None
            }
        }
    }
}

/// Can `inst.graph` be made a 2-clubs graph with at most `inst.budget`
/// deletions? Yes answers carry a verified certificate in the indices of
/// `inst.graph`.
pub fn solve_decision(inst: &Instance) -> Result<Decision> {
    let mut search = Search {
        stats: SearchStats::default(),
    };
    let root = Instance::new(inst.graph.clone(), inst.budget);
    let found = search.node(root, 0);
    let solution = match found {
        Some(deleted) => {
            let sol = Solution { deleted };
            if !verify_solution(&inst.graph, &sol)? || sol.cost() as i64 > inst.budget {
                return Err(Error::CertificateRejected);
            }
            Some(sol)
        }
        None => None,
    };
    Ok(Decision {
        answer: solution.is_some(),
        solution,
        stats: search.stats,
    })
}

/// Minimum deletion count by iterative deepening on the budget. Stats are
/// summed over all levels.
pub fn solve_minimize(g: &Graph) -> Result<Minimum> {
    let mut stats = SearchStats::default();
    for k in 0..=g.edge_count() {
        let d = solve_decision(&Instance::new(g.clone(), k as i64))?;
        stats.merge(&d.stats);
        if let Some(solution) = d.solution {
            return Ok(Minimum {
                opt: k,
                solution,
                stats,
            });
        }
    }
    unreachable!("deleting every edge always yields a 2-clubs graph")
}

/// Does deleting `sol.deleted` from `g` leave a 2-clubs graph?
pub fn verify_solution(g: &Graph, sol: &Solution) -> Result<bool> {
    let residual = delete_edges(g, &sol.deleted)?;
    Ok(crate::graph::is_two_clubs_graph(&residual))
}
